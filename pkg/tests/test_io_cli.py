import json
import math

import numpy as np
import pytest

from tensornorms import cli, io
from tensornorms.canonical import (
    cyclic_group,
    dft_decomposition,
    glynn_decomposition,
    group_tensor,
    group_tuple,
    matmul_tensor,
    symmetric_group,
)
from tensornorms.decomposition import assemble
from tensornorms.errors import ValidationError

from conftest import random_tensor


def test_tensor_roundtrip_exact(tmp_path, rng):
    T = random_tensor(rng, (2, 3, 2))
    io.write_tensor(T, tmp_path / "t.json")
    assert io.read_tensor(tmp_path / "t.json").equals(T)


def test_tensor_json_layout():
    T, _ = matmul_tensor(1, 1, 2)
    obj = io.tensor_to_json(T)
    assert obj["dims"] == [1, 2, 2]
    idx = [e["idx"] for e in obj["entries"]]
    assert idx == sorted(idx) and min(min(i) for i in idx) == 1


def test_decomposition_roundtrip_keeps_named_certificate(tmp_path):
    T, dec = matmul_tensor(2, 2, 2)
    io.write_decomposition(dec, tmp_path / "d.json")
    back = io.read_decomposition(tmp_path / "d.json")
    assert assemble(back).equals(T)
    assert back.certificate is not None and back.certificate.rule == "matmul"


def test_tampered_certificate_dropped(tmp_path):
    obj = io.decomposition_to_json(glynn_decomposition(3))
    obj["certificate"] = {"t": 2, "rule": "matmul", "params": [2, 2, 2]}
    with pytest.warns(UserWarning, match="could not be re-derived"):
        dec = io.decomposition_from_json(obj)
    assert dec.certificate is None


def test_structural_certificate_rederived():
    obj = io.tuple_to_json(group_tuple(cyclic_group(3)))
    assert io.tuple_from_json(obj).certificate.t == pytest.approx(1.5)


def test_decomposition_file_read_as_tuple(tmp_path):
    io.write_decomposition(dft_decomposition(3), tmp_path / "d.json")
    tup = io.read_tuple(tmp_path / "d.json")
    assert len(tup) == 3 and all(math.isclose(v.length, 1) for v in tup)


def test_group_roundtrip(tmp_path):
    G = symmetric_group(3)
    io.write_group(G, tmp_path / "g.json")
    obj = json.loads((tmp_path / "g.json").read_text())
    assert obj["identity"] == 1 and min(map(min, obj["mul"])) == 1
    assert np.array_equal(io.read_group(tmp_path / "g.json").mul, G.mul)


def test_parse_error_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"dims": [2],\n "entries": [}\n')
    with pytest.raises(ValidationError, match=r"bad\.json:2:"):
        io.read_tensor(p)


def test_schema_error_location():
    with pytest.raises(ValidationError, match=r"entries\[0\]\.idx"):
        io.tensor_from_json({"dims": [2], "entries": [{"idx": [3], "re": 1}]})
    with pytest.raises(ValidationError, match="factors"):
        io.decomposition_from_json({"dims": [2], "terms": [{"coeff": 1}]})


# --- CLI ------------------------------------------------------------------


def tnt(*argv):
    code, report, _ = cli.run([str(a) for a in argv])
    return code, report["results"]


def test_construct_roundtrip(tmp_path):
    code, res = tnt("construct", "matmul", "--p", 2, "--q", 2, "--r", 2, "--out-dir", tmp_path)
    assert code == 0 and len(res["files"]) == 2
    T, dec = matmul_tensor(2, 2, 2)
    assert io.read_tensor(tmp_path / "matmul_2_2_2_tensor.json").equals(T)
    assert assemble(io.read_decomposition(tmp_path / "matmul_2_2_2_dec.json")).equals(assemble(dec))
    for name, extra in (("dft", ["--n", 4]), ("glynn", ["--n", 3]), ("strassen", []), ("det3", []),
                        ("det", ["--n", 3]), ("per", ["--n", 3]), ("counterexample", []),
                        ("group", ["--kind", "symmetric", "--n", 3]), ("group-tuple", ["--n", 3])):
        code, res = tnt("construct", name, *extra, "--out-dir", tmp_path)
        assert code == 0 and res["files"]
    assert len(io.read_decomposition(tmp_path / "dft_4_dec.json")) == 4
    assert len(io.read_decomposition(tmp_path / "glynn_3_dec.json")) == 4


def test_group_file_construct(tmp_path):
    io.write_group(cyclic_group(4), tmp_path / "g.json")
    code, _ = tnt("construct", "group", "--group-file", tmp_path / "g.json", "--out-dir", tmp_path)
    assert code == 0
    assert io.read_tensor(tmp_path / "group_file_tensor.json").equals(group_tensor(cyclic_group(4)))


def test_measure_commands(tmp_path):
    tnt("construct", "matmul", "--out-dir", tmp_path)
    tnt("construct", "group-tuple", "--n", 3, "--out-dir", tmp_path)
    code, res = tnt("measure", "t-ortho", "--t", 2, "--tuple", tmp_path / "matmul_2_2_2_dec.json")
    assert code == 0 and res["verdict"] == "CertifiedYes"
    code, res = tnt("measure", "bracket", "--alpha", 1.3333333333, "--tuple", tmp_path / "cyclic_3_tuple.json")
    assert res["value"] <= 1 + 1e-6 and res["status"] == "HeuristicLower"
    io.write_tuple(io.tuple_from_json({"dims": [2], "members": [{"factors": [[1, 0]]}, {"factors": [[0, 1]]}]}),
                   tmp_path / "two_basis.json")
    assert tnt("measure", "mu", "--tuple", tmp_path / "two_basis.json")[1]["mu"] == 0
    assert tnt("measure", "mu-alpha", "--alpha", 2, "--tuple", tmp_path / "two_basis.json")[1]["mu_alpha"] == 0
    res = tnt("measure", "bracket-upper", "--alpha", 2, "--tuple", tmp_path / "two_basis.json")[1]
    assert res["value"] == pytest.approx(1) and res["status"] != "HeuristicLower"


def test_verify_and_bounds_and_extract(tmp_path):
    tnt("construct", "matmul", "--out-dir", tmp_path)
    code, res = tnt("verify-dsvd", tmp_path / "matmul_2_2_2_dec.json")
    assert code == 0 and res["singular_values"] == [1.0] * 8 and res["norms"]["nuclear"] == pytest.approx(8)
    tnt("construct", "glynn", "--n", 3, "--out-dir", tmp_path)
    code, res = tnt("verify-dsvd", tmp_path / "glynn_3_dec.json")
    assert code == 2 and res["failed_clause"] == "two_orthogonality"
    tnt("construct", "per", "--n", 3, "--out-dir", tmp_path)
    code, res = tnt("bounds", tmp_path / "per_3_tensor.json", "--dec", tmp_path / "glynn_3_dec.json")
    lo, up = res["nuclear"]["lower"], res["nuclear"]["upper"]
    assert lo["certified"] and up["certified"]
    assert lo["value"] == pytest.approx(3 ** 1.5, abs=1e-9) and up["value"] == pytest.approx(3 ** 1.5, abs=1e-9)
    assert "spectral_lower" in res["uncertified"]
    tnt("construct", "dft", "--n", 3, "--out-dir", tmp_path)
    code, res = tnt("extract", tmp_path / "cyclic_3_tensor.json", "--seed", 42, "--out-dec", tmp_path / "ex.json")
    assert code == 0 and res["terms"] == 3 and np.allclose(res["singular_values"], math.sqrt(3))
    assert io.read_decomposition(tmp_path / "ex.json")


def test_exit_codes(tmp_path, capsys):
    assert cli.main(["bogus"]) == 1
    assert cli.main(["construct", "det", "--n", "9", "--out-dir", str(tmp_path)]) == 1
    assert cli.main(["bounds", str(tmp_path / "missing.json")]) == 1
    (tmp_path / "bad.json").write_text("{")
    assert cli.main(["bounds", str(tmp_path / "bad.json")]) == 1
    assert "bad.json:1:" in capsys.readouterr().err


def test_report_fields_and_out_file(tmp_path):
    tnt("construct", "det", "--n", 2, "--out-dir", tmp_path)
    out = tmp_path / "report.json"
    assert cli.main(["bounds", str(tmp_path / "det_2_tensor.json"), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert set(rep) == {"command", "inputs", "settings", "results", "warnings", "timing"}
    assert rep["settings"]["seed"] == 42 and rep["settings"]["restarts"] == 64
    assert len(next(iter(rep["inputs"].values()))) == 64


def test_warnings_captured_in_report(tmp_path):
    obj = io.decomposition_to_json(glynn_decomposition(2))
    obj["terms"][0]["factors"][0] = [{"re": 0, "im": 0}, {"re": 0, "im": 0}]
    (tmp_path / "z.json").write_text(json.dumps(obj))
    code, report, _ = cli.run(["verify-dsvd", str(tmp_path / "z.json")])
    assert any("zero factor" in w for w in report["warnings"])
