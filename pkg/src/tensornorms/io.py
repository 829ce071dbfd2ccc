"""JSON readers and writers. Indices in files are 1-based.

Formats::

    tensor         {"dims": [...], "entries": [{"idx": [...], "re": x, "im": y}, ...]}
    decomposition  {"dims": [...], "terms": [{"coeff": {"re","im"}, "factors": [[{"re","im"}, ...], ...]}],
                    "certificate": {"t": .., "rule": .., "params": [...]}}   (certificate optional)
    tuple          {"dims": [...], "members": [{"factors": [...]}], "certificate": ...}
    group          {"order": n, "mul": [[...]], "identity": 1}

A decomposition file is also accepted wherever a tuple is expected (its
normalized terms). Certificates in files are never trusted: named ones are
rebuilt and compared, structural ones are re-derived.
"""
from __future__ import annotations

import json
import warnings
from pathlib import Path

import numpy as np

from .canonical import GroupTable
from .certificates import structural_certificate, validate_named
from .core import DenseTensor, TensorSpace
from .decomposition import Certificate, Decomposition, PureTensor, PureTuple
from .errors import ValidationError


def _c(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _read_c(obj, where: str) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if not isinstance(obj, dict) or "re" not in obj:
        raise ValidationError(f"{where}: expected a number or {{'re', 'im'}} object")
    try:
        return complex(float(obj["re"]), float(obj.get("im", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False, allow_nan=False) + "\n"


def parse_json(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def read_json(path) -> object:
    path = Path(path)
    return parse_json(path.read_text(), str(path))


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _dims(obj, where: str) -> tuple[int, ...]:
    dims = _require(obj, "dims", where)
    if not isinstance(dims, list) or not dims or not all(isinstance(n, int) and n >= 1 for n in dims):
        raise ValidationError(f"{where}.dims: expected a nonempty list of positive integers")
    return tuple(dims)


# --------------------------------------------------------------------------
# tensors


def tensor_to_json(T: DenseTensor) -> dict:
    entries = []
    for idx in zip(*np.nonzero(T.data)):
        z = T.data[idx]
        entries.append({"idx": [int(i) + 1 for i in idx], "re": float(z.real), "im": float(z.imag)})
    return {"dims": list(T.dims), "entries": entries}


def tensor_from_json(obj, where: str = "tensor") -> DenseTensor:
    dims = _dims(obj, where)
    data = np.zeros(dims, dtype=np.complex128)
    entries = _require(obj, "entries", where)
    if not isinstance(entries, list):
        raise ValidationError(f"{where}.entries: expected a list")
    for k, e in enumerate(entries):
        loc = f"{where}.entries[{k}]"
        idx = _require(e, "idx", loc)
        if not isinstance(idx, list) or len(idx) != len(dims):
            raise ValidationError(f"{loc}.idx: expected {len(dims)} indices")
        if not all(isinstance(i, int) and 1 <= i <= n for i, n in zip(idx, dims)):
            raise ValidationError(f"{loc}.idx: index {idx} out of range for dims {list(dims)}")
        data[tuple(i - 1 for i in idx)] += _read_c(e, loc)
    return DenseTensor(data)


# --------------------------------------------------------------------------
# pure tensors, tuples and decompositions


def _factors_to_json(v: PureTensor) -> list:
    return [[_c(z) for z in f] for f in v.factors]


def _factors_from_json(obj, dims, where: str) -> PureTensor:
    if not isinstance(obj, list) or len(obj) != len(dims):
        raise ValidationError(f"{where}: expected {len(dims)} factors")
    facs = []
    for m, (f, n) in enumerate(zip(obj, dims)):
        if not isinstance(f, list) or len(f) != n:
            raise ValidationError(f"{where}[{m}]: expected a vector of length {n}")
        facs.append(np.array([_read_c(z, f"{where}[{m}][{i}]") for i, z in enumerate(f)]))
    return PureTensor(tuple(facs))


def pure_to_json(v: PureTensor) -> dict:
    return {"dims": list(v.dims), "factors": _factors_to_json(v)}


def pure_from_json(obj, where: str = "pure") -> PureTensor:
    dims = _dims(obj, where)
    return _factors_from_json(_require(obj, "factors", where), dims, f"{where}.factors")


def _cert_to_json(cert: Certificate | None):
    if cert is None:
        return None
    return {"t": cert.t if np.isfinite(cert.t) else "inf", "rule": cert.rule, "params": list(cert.params)}


def _verified_certificate(tup: PureTuple, obj, where: str) -> Certificate | None:
    if obj is None:
        return None
    rule = _require(obj, "rule", where)
    t = _require(obj, "t", where)
    t = float(t)
    params = tuple(obj.get("params", ()))
    cert = validate_named(tup, rule, params)
    if cert is None:
        cert = structural_certificate(tup.with_certificate(None))
    if cert is None or cert.t < t:
        warnings.warn(f"{where}: certificate {rule!r} (t={t:g}) could not be re-derived and was dropped")
        return None
    return cert


def tuple_to_json(tup: PureTuple) -> dict:
    out = {"dims": list(tup.space.dims), "members": [{"factors": _factors_to_json(v)} for v in tup]}
    if tup.certificate is not None:
        out["certificate"] = _cert_to_json(tup.certificate)
    return out


def tuple_from_json(obj, where: str = "tuple") -> PureTuple:
    if isinstance(obj, dict) and "terms" in obj:
        return decomposition_from_json(obj, where).term_tuple()
    dims = _dims(obj, where)
    members = _require(obj, "members", where)
    if not isinstance(members, list) or not members:
        raise ValidationError(f"{where}.members: expected a nonempty list")
    pures = tuple(
        _factors_from_json(_require(m, "factors", f"{where}.members[{k}]"), dims, f"{where}.members[{k}].factors")
        for k, m in enumerate(members)
    )
    tup = PureTuple(TensorSpace(dims), pures)
    return tup.with_certificate(_verified_certificate(tup, obj.get("certificate"), f"{where}.certificate"))


def decomposition_to_json(dec: Decomposition) -> dict:
    out = {
        "dims": list(dec.space.dims),
        "terms": [{"coeff": _c(c), "factors": _factors_to_json(v)} for c, v in dec.terms],
    }
    if dec.certificate is not None:
        out["certificate"] = _cert_to_json(dec.certificate)
    return out


def decomposition_from_json(obj, where: str = "decomposition") -> Decomposition:
    dims = _dims(obj, where)
    terms = _require(obj, "terms", where)
    if not isinstance(terms, list):
        raise ValidationError(f"{where}.terms: expected a list")
    parsed = []
    for k, t in enumerate(terms):
        loc = f"{where}.terms[{k}]"
        coeff = _read_c(_require(t, "coeff", loc), f"{loc}.coeff")
        parsed.append((coeff, _factors_from_json(_require(t, "factors", loc), dims, f"{loc}.factors")))
    dec = Decomposition(TensorSpace(dims), tuple(parsed))
    cert_obj = obj.get("certificate")
    if cert_obj is not None and parsed:
        nonzero = [v for _, v in parsed if np.all(v.factor_norms > 0)]
        if len(nonzero) == len(parsed):
            cert = _verified_certificate(dec.term_tuple(), cert_obj, f"{where}.certificate")
            dec = Decomposition(dec.space, dec.terms, cert)
    return dec


# --------------------------------------------------------------------------
# groups


def group_to_json(G: GroupTable) -> dict:
    return {"order": G.order, "mul": (G.mul + 1).tolist(), "identity": G.identity + 1}


def group_from_json(obj, where: str = "group") -> GroupTable:
    n = _require(obj, "order", where)
    mul = _require(obj, "mul", where)
    ident = obj.get("identity", 1)
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"{where}.order: expected a positive integer")
    if not isinstance(mul, list) or len(mul) != n or not all(isinstance(row, list) and len(row) == n for row in mul):
        raise ValidationError(f"{where}.mul: expected an {n}x{n} table")
    if not all(isinstance(x, int) for row in mul for x in row) or not isinstance(ident, int):
        raise ValidationError(f"{where}: table entries and identity must be integers")
    return GroupTable(n, np.array(mul) - 1, ident - 1)


# --------------------------------------------------------------------------
# files


def _writer(to_json):
    def write(obj, path) -> None:
        Path(path).write_text(dumps(to_json(obj)))

    return write


def _reader(from_json):
    def read(path):
        return from_json(read_json(path), str(path))

    return read


write_tensor = _writer(tensor_to_json)
read_tensor = _reader(tensor_from_json)
write_decomposition = _writer(decomposition_to_json)
read_decomposition = _reader(decomposition_from_json)
write_tuple = _writer(tuple_to_json)
read_tuple = _reader(tuple_from_json)
write_group = _writer(group_to_json)
read_group = _reader(group_from_json)
