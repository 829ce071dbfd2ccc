"""``tnt`` command-line front end.

Every command prints a JSON run report (or writes it to ``--out``). Exit
codes: 0 success, 2 verification failure, 1 error.
"""
from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import canonical, io
from ._ascent import OptimizerSettings
from .bounds import nuclear_interval, spectral_bounds
from .decomposition import PureTuple
from .orthogonality import (
    bracket_alpha,
    bracket_alpha_upper,
    coherence_mu,
    dsvd_extract,
    dsvd_verify,
    mu_alpha,
    t_orthogonality_check,
)

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class _Failure(Exception):
    """Verification failed; the report is still emitted."""


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def _settings(args) -> OptimizerSettings:
    return OptimizerSettings(seed=args.seed, restarts=args.restarts, max_iters=args.max_iters, tol=args.opt_tol)


class _Run:
    def __init__(self, args):
        self.args = args
        self.inputs = {}

    def load(self, reader, path):
        data = Path(path).read_bytes()
        self.inputs[str(path)] = hashlib.sha256(data).hexdigest()
        return reader(path)


def _load_tuple(run: _Run, args) -> PureTuple | tuple:
    if args.tuple:
        return run.load(io.read_tuple, args.tuple)
    if args.tensor:
        return (run.load(io.read_tensor, args.tensor),)
    raise ValueError("give --tuple or --tensor")


# --------------------------------------------------------------------------
# commands


def cmd_construct(run: _Run, args) -> dict:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []

    def put(writer, obj, name):
        path = out / name
        writer(obj, path)
        files.append(str(path))

    name = args.name
    if name == "matmul":
        T, dec = canonical.matmul_tensor(args.p, args.q, args.r)
        tag = f"matmul_{args.p}_{args.q}_{args.r}"
        put(io.write_tensor, T, f"{tag}_tensor.json")
        put(io.write_decomposition, dec, f"{tag}_dec.json")
    elif name == "strassen":
        put(io.write_decomposition, canonical.strassen_decomposition(), "strassen_dec.json")
    elif name in ("group", "group-tuple"):
        G = _group(args)
        tag = G.name.replace("(", "_").replace(")", "") if G.name else "group_file"
        if name == "group":
            put(io.write_group, G, f"{tag}_table.json")
            put(io.write_tensor, canonical.group_tensor(G), f"{tag}_tensor.json")
        else:
            put(io.write_tuple, canonical.group_tuple(G), f"{tag}_tuple.json")
    elif name == "dft":
        put(io.write_decomposition, canonical.dft_decomposition(args.n), f"dft_{args.n}_dec.json")
        put(io.write_tensor, canonical.group_tensor(canonical.cyclic_group(args.n)), f"cyclic_{args.n}_tensor.json")
    elif name == "det":
        put(io.write_tensor, canonical.determinant_tensor(args.n), f"det_{args.n}_tensor.json")
    elif name == "per":
        put(io.write_tensor, canonical.permanent_tensor(args.n), f"per_{args.n}_tensor.json")
    elif name == "glynn":
        put(io.write_decomposition, canonical.glynn_decomposition(args.n), f"glynn_{args.n}_dec.json")
    elif name == "det3":
        put(io.write_decomposition, canonical.det3_decomposition(), "det3_dec.json")
    elif name == "counterexample":
        put(io.write_tuple, canonical.pairwise_counterexample(), "counterexample_tuple.json")
    return {"files": files}


def _group(args):
    if args.group_file:
        return io.read_group(args.group_file)
    return canonical.group_table(args.kind, args.n)


def cmd_measure(run: _Run, args) -> dict:
    S = _load_tuple(run, args)
    kind = args.kind
    if kind in ("mu", "mu-alpha"):
        if not isinstance(S, PureTuple):
            raise ValueError("coherence needs a tuple of pure tensors (--tuple)")
        if kind == "mu":
            return {"mu": coherence_mu(S)}
        return {"alpha": _need(args.alpha, "--alpha"), "mu_alpha": mu_alpha(S, args.alpha)}
    if kind == "bracket":
        est = bracket_alpha(S, _need(args.alpha, "--alpha"), _settings(args))
        return {
            "alpha": est.alpha,
            "value": est.value,
            "status": est.status.value,
            "witness": io.pure_to_json(est.witness),
        }
    if kind == "bracket-upper":
        est = bracket_alpha_upper(S, _need(args.alpha, "--alpha"))
        return {"alpha": est.alpha, "value": est.value, "status": est.status.value, "route": est.route,
                "routes": est.routes}
    if kind == "t-ortho":
        if not isinstance(S, PureTuple):
            raise ValueError("t-orthogonality needs a tuple of pure tensors (--tuple)")
        v = t_orthogonality_check(S, _need(args.t, "--t"), args.tol, _settings(args))
        out = {"t": v.t, "verdict": v.verdict.value, "detail": v.detail, "value": v.value,
               "witness": io.pure_to_json(v.witness) if v.witness is not None else None}
        return out
    raise ValueError(f"unknown measure {kind!r}")


def _need(x, flag):
    if x is None:
        raise ValueError(f"{flag} is required")
    return x


def cmd_verify_dsvd(run: _Run, args) -> dict:
    dec = run.load(io.read_decomposition, args.dec)
    rep = dsvd_verify(dec, args.tol, _settings(args))
    out = {
        "ok": rep.ok,
        "status": rep.status,
        "failed_clause": rep.failed_clause,
        "singular_values": rep.singular_values,
        "unit_ok": rep.unit_ok,
    }
    if rep.two_ortho is not None:
        v = rep.two_ortho
        out["two_orthogonality"] = {
            "verdict": v.verdict.value,
            "detail": v.detail,
            "witness": io.pure_to_json(v.witness) if v.witness is not None else None,
        }
    if rep.ok:
        out["norms"] = {"nuclear": rep.nuclear, "spectral": rep.spectral, "frobenius": rep.frobenius}
    else:
        raise _Failure(out)
    return out


def cmd_bounds(run: _Run, args) -> dict:
    T = run.load(io.read_tensor, args.tensor)
    dec = run.load(io.read_decomposition, args.dec) if args.dec else None
    settings = _settings(args)
    interval = nuclear_interval(T, dec, settings, args.tol)
    spec = spectral_bounds(T, settings)
    return {
        "nuclear": interval.to_dict(),
        "spectral": {"upper": spec.upper.to_dict(), "upper_routes": spec.routes},
        "uncertified": {
            "spectral_lower": spec.lower.value,
            "spectral_witness": io.pure_to_json(spec.lower.witness),
        },
    }


def cmd_extract(run: _Run, args) -> dict:
    T = run.load(io.read_tensor, args.tensor)
    res = dsvd_extract(T, args.residual_tol, args.max_terms, _settings(args))
    out = {
        "terms": len(res.decomposition),
        "singular_values": res.singular_values,
        "residual_norm": res.residual_norm,
        "complete": res.complete,
    }
    if args.out_dec:
        io.write_decomposition(res.decomposition, args.out_dec)
        out["decomposition_file"] = str(args.out_dec)
    if not res.complete:
        raise _Failure(out)
    return out


# --------------------------------------------------------------------------
# parser


def _add_settings(p):
    p.add_argument("--seed", type=int, default=42, help="optimizer seed (default 42)")
    p.add_argument("--restarts", type=int, default=64, help="random restarts (default 64)")
    p.add_argument("--max-iters", type=int, default=10_000, help="optimizer iteration cap")
    p.add_argument("--opt-tol", type=float, default=1e-12, help="optimizer relative-gain tolerance")
    p.add_argument("--tol", type=float, default=1e-9, help="verification tolerance")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1; exit code 2 is reserved for failed verification.
    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tnt", description="Nuclear norms, spectral norms and orthogonal tensor decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a canonical tensor, decomposition or tuple")
    p.add_argument("name", choices=["matmul", "strassen", "group", "dft", "det", "per", "glynn", "det3",
                                     "counterexample", "group-tuple"])
    for dim in ("p", "q", "r"):
        p.add_argument(f"--{dim}", type=int, default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--kind", default="cyclic", help="group kind: cyclic, dihedral, symmetric")
    p.add_argument("--group-file", help="group table JSON instead of a built-in kind")
    p.add_argument("--out-dir", default=".")
    _add_settings(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("measure", help="coherence, [S]_alpha estimates and t-orthogonality")
    p.add_argument("kind", choices=["mu", "mu-alpha", "bracket", "bracket-upper", "t-ortho"])
    p.add_argument("--tuple", help="tuple or decomposition JSON")
    p.add_argument("--tensor", help="tensor JSON, measured as a one-member tuple")
    p.add_argument("--alpha", type=float)
    p.add_argument("--t", type=float)
    _add_settings(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify-dsvd", help="check a decomposition is a diagonal SVD")
    p.add_argument("dec")
    _add_settings(p)
    p.set_defaults(func=cmd_verify_dsvd)

    p = sub.add_parser("bounds", help="certified nuclear and spectral norm bounds")
    p.add_argument("tensor")
    p.add_argument("--dec", help="known decomposition of the tensor")
    _add_settings(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("extract", help="greedy diagonal SVD extraction")
    p.add_argument("tensor")
    p.add_argument("--out-dec", help="write the extracted decomposition here")
    p.add_argument("--residual-tol", type=float, default=1e-10)
    p.add_argument("--max-terms", type=int)
    _add_settings(p)
    p.set_defaults(func=cmd_extract)
    return parser


def run(argv=None) -> tuple[int, dict, str | None]:
    """Execute a command; return the exit code, the report and the ``--out`` path."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    state = _Run(args)
    start = time.perf_counter()
    code = EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            results = args.func(state, args)
        except _Failure as fail:
            results, code = fail.args[0], EXIT_FAILED
    report = {
        "command": ["tnt"] + argv,
        "inputs": state.inputs,
        "settings": {**_settings(args).to_dict(), "verify_tol": args.tol},
        "results": _clean(results),
        "warnings": sorted({str(w.message) for w in caught}),
        "timing": {"wall_seconds": time.perf_counter() - start},
    }
    return code, report, args.out


def main(argv=None) -> int:
    try:
        code, report, out = run(argv)
    except (ValueError, OSError, KeyError) as exc:
        print(f"tnt: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = io.dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
