"""Certified bounds on the nuclear and spectral norms.

Every bound carries a ``certified`` flag. A lower bound on the nuclear norm
obtained by dividing by ``[S]_alpha`` is certified only when the divisor is a
certified *upper* bound on ``[S]_alpha``; dividing by an optimizer estimate
gives a number that may overshoot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._ascent import OptimizerSettings
from .canonical import (
    MAX_GROUP_ORDER,
    MAX_PERM_N,
    determinant_tensor,
    group_tensor,
    hadamard_spectral_override,
    matmul_tensor,
    permanent_tensor,
)
from .core import DenseTensor, bipartitions, entrywise_l1, flattening_spectral_norm, frobenius_norm, inner
from .decomposition import Decomposition, PureTensor, PureTuple, assemble, nuclear_cost, normalize
from .errors import DegenerateInputError, InapplicableError, PreconditionError
from .orthogonality import (
    MeasureEstimate,
    MeasureStatus,
    bracket_alpha,
    bracket_alpha_upper,
    coherence_mu,
)


@dataclass(frozen=True)
class Bound:
    value: float
    certified: bool
    route: str
    witness: PureTensor | None = None

    def to_dict(self) -> dict:
        return {"value": self.value, "certified": self.certified, "route": self.route}


@dataclass(frozen=True)
class SpectralBounds:
    lower: Bound
    upper: Bound
    routes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lower": self.lower.to_dict(), "upper": self.upper.to_dict(), "upper_routes": dict(self.routes)}


@dataclass(frozen=True)
class NuclearInterval:
    lower: Bound
    upper: Bound
    lower_routes: dict = field(default_factory=dict)
    upper_routes: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower.to_dict(),
            "upper": self.upper.to_dict(),
            "lower_routes": {k: b.to_dict() for k, b in self.lower_routes.items()},
            "upper_routes": {k: b.to_dict() for k, b in self.upper_routes.items()},
        }


# --------------------------------------------------------------------------
# spectral norm


def _cubic(T: DenseTensor) -> int | None:
    n = T.dims[0]
    return n if T.order == n and all(m == n for m in T.dims) else None


def _override_det_per(T: DenseTensor):
    n = _cubic(T)
    if n is None or n > MAX_PERM_N:
        return None
    if T.equals(determinant_tensor(n)):
        return "det", hadamard_spectral_override("det", n)
    if T.equals(permanent_tensor(n)):
        return "per", hadamard_spectral_override("per", n)
    return None


def _override_matmul(T: DenseTensor):
    if T.order != 3:
        return None
    a, b, c = T.dims
    # dims (pq, qr, rp): p**2 = a*c/b.
    if (a * c) % b:
        return None
    p = math.isqrt(a * c // b)
    if p * p * b != a * c or a % p:
        return None
    q = a // p
    if b % q:
        return None
    r = b // q
    if r * p != c or p * q * r > 4096:
        return None
    M, _ = matmul_tensor(p, q, r)
    return ("matmul", 1.0) if T.equals(M) else None


def _override_group(T: DenseTensor):
    prov = T.provenance
    if not (isinstance(prov, tuple) and prov and prov[0] == "group"):
        return None
    G = prov[1]
    if G.order > MAX_GROUP_ORDER or not T.equals(group_tensor(G)):
        return None
    return "group", math.sqrt(G.order)


_OVERRIDES = (_override_det_per, _override_matmul, _override_group)


def analytic_spectral_upper(T: DenseTensor) -> tuple[str, float] | None:
    """Sharp certified spectral upper bound for recognised tensors.

    Recognition never trusts ``provenance`` alone: the tensor is rebuilt and
    compared exactly.
    """
    for rule in _OVERRIDES:
        hit = rule(T)
        if hit is not None:
            return hit
    return None


def spectral_upper_routes(T: DenseTensor) -> dict[str, float]:
    routes = {"frobenius": frobenius_norm(T)}
    if T.order > 1:
        routes["flattening"] = min(flattening_spectral_norm(T, rows) for rows in bipartitions(T.order))
    hit = analytic_spectral_upper(T)
    if hit is not None:
        routes[f"analytic:{hit[0]}"] = hit[1]
    return routes


def spectral_bounds(T: DenseTensor, settings: OptimizerSettings | None = None) -> SpectralBounds:
    """Heuristic lower bound with witness and certified upper bound on ``[T]``."""
    if frobenius_norm(T) == 0:
        raise DegenerateInputError("spectral bounds of the zero tensor")
    est = bracket_alpha((T,), 2.0, settings)
    routes = spectral_upper_routes(T)
    route = min(routes, key=lambda k: (routes[k], k))
    return SpectralBounds(
        Bound(est.value, False, "multi-start ascent", est.witness),
        Bound(routes[route], True, route),
        routes,
    )


def spectral_measure(T: DenseTensor, alpha: float = 1.0) -> MeasureEstimate:
    """Certified upper bound on ``[(T,)]_alpha``, which equals ``[T]`` for every ``alpha``."""
    routes = spectral_upper_routes(T)
    route = min(routes, key=lambda k: (routes[k], k))
    return MeasureEstimate(float(alpha), routes[route], MeasureStatus.CERTIFIED_UPPER, None, route, routes)


# --------------------------------------------------------------------------
# nuclear norm lower bounds


def nuclear_lower_pairing(T: DenseTensor, S, alpha: float, S_measure: MeasureEstimate) -> Bound:
    """``(sum_i |<T, S_i>|**alpha)**(1/alpha) / [S]_alpha``.

    ``S`` may mix pure and dense tensors. Certified iff ``S_measure`` is a
    certified upper bound.
    """
    if alpha < 1:
        raise ValueError("the pairing bound needs alpha >= 1")
    if not math.isclose(S_measure.alpha, alpha, rel_tol=1e-12):
        raise ValueError(f"measure is for alpha={S_measure.alpha}, not {alpha}")
    if S_measure.value <= 0:
        raise DegenerateInputError("[S]_alpha must be positive")
    members = [S] if isinstance(S, (PureTensor, DenseTensor)) else list(S)
    pairs = np.array([abs(inner(T, m.to_dense() if isinstance(m, PureTensor) else m)) for m in members])
    value = float(np.sum(pairs ** alpha) ** (1 / alpha)) / S_measure.value
    return Bound(value, S_measure.certified, f"pairing(alpha={alpha:g}; {S_measure.route})")


def nuclear_lower_orthogonal(dec: Decomposition, k: int, head_measure: MeasureEstimate, tol: float = 1e-9) -> Bound:
    """``(lambda_1 + ... + lambda_k) / [w^{[k]}]_1`` for an orthogonal normalized decomposition."""
    nd = normalize(dec)
    if not 1 <= k <= len(nd):
        raise ValueError(f"k must lie in 1..{len(nd)}")
    if not math.isclose(head_measure.alpha, 1.0, rel_tol=1e-12):
        raise ValueError("head measure must be [w^{[k]}]_1")
    w = nd.term_tuple()
    if coherence_mu(w) > tol:
        raise PreconditionError(f"terms are not orthogonal (coherence {coherence_mu(w)!r})")
    lam = nd.coeffs.real
    value = float(np.sum(lam[:k])) / head_measure.value
    return Bound(value, head_measure.certified, f"orthogonal(k={k}; {head_measure.route})")


def _decomposition_matches(T: DenseTensor, dec: Decomposition, rtol: float = 1e-10) -> bool:
    if dec.space != T.space:
        return False
    return frobenius_norm(assemble(dec) - T) <= rtol * max(frobenius_norm(T), 1.0)


def nuclear_interval(
    T: DenseTensor,
    known_dec: Decomposition | None = None,
    settings: OptimizerSettings | None = None,
    tol: float = 1e-9,
) -> NuclearInterval:
    """Certified bracket around ``||T||_*``.

    Upper routes: the basis expansion (entrywise 1-norm) and ``known_dec``.
    Lower routes: ``||T||**2 / [T]`` with a certified spectral upper bound,
    and, for a ``known_dec``, the pairing bound against its normalized terms
    and the orthogonal-prefix bound when those terms are orthogonal.
    """
    normT = frobenius_norm(T)
    if normT == 0:
        raise DegenerateInputError("nuclear interval of the zero tensor")
    uppers = {"basis expansion": Bound(entrywise_l1(T), True, "basis expansion")}
    lowers = {}
    spec = spectral_upper_routes(T)
    sroute = min(spec, key=lambda k: (spec[k], k))
    lowers["gram"] = Bound(normT ** 2 / spec[sroute], True, f"gram({sroute})")
    if known_dec is not None:
        if not _decomposition_matches(T, known_dec):
            raise PreconditionError("known decomposition does not assemble to the tensor")
        uppers["decomposition"] = Bound(nuclear_cost(known_dec), True, "decomposition")
        nd = normalize(known_dec)
        if len(nd):
            w = nd.term_tuple()
            m1 = bracket_alpha_upper(w, 1.0, tol)
            lowers["pairing"] = nuclear_lower_pairing(T, w, 1.0, m1)
            if coherence_mu(w) <= tol:
                lowers["orthogonal"] = nuclear_lower_orthogonal(nd, len(nd), m1, tol)
    lo = max(lowers, key=lambda k: (lowers[k].value, k))
    up = min(uppers, key=lambda k: (uppers[k].value, k))
    return NuclearInterval(lowers[lo], uppers[up], lowers, uppers)


# --------------------------------------------------------------------------
# inequality between two decompositions of the same tensor


@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    lhs: float
    rhs: float
    delta: float

    def to_dict(self) -> dict:
        return {"holds": self.holds, "lhs": self.lhs, "rhs": self.rhs, "delta": self.delta}


def check_main_inequality(
    lam, sig, k: int, l: int, v_measure1: float, wk_measure1: float, mu1_w: float, slack: float = 1e-9
) -> InequalityCheck:
    """Evaluate ``W (s_1 + ... + s_l) + delta s_{l+1} >= (1 - mu) (l_1 + ... + l_k)``.

    Here ``W`` is (an upper bound on) ``[w^{[k]}]_1``, ``V`` (an upper bound
    on) ``[v]_1`` and ``delta = k V - l W``. Sequences are zero-padded. Upper
    bounds in place of the exact measures keep the inequality valid as long
    as ``0 <= delta <= W``; outside that range nothing follows and
    :class:`InapplicableError` is raised.
    """
    lam = np.asarray(lam, dtype=float)
    sig = np.asarray(sig, dtype=float)
    if k < 1 or l < 0:
        raise ValueError("need k >= 1 and l >= 0")
    for name, x in (("lam", lam), ("sig", sig)):
        if x.size and (np.any(x <= 0) or np.any(np.diff(x) > 0)):
            raise ValueError(f"{name} must be positive and nonincreasing")
    delta = k * v_measure1 - l * wk_measure1
    if not (-slack <= delta <= wk_measure1 + slack):
        raise InapplicableError(f"delta = {delta!r} lies outside [0, {wk_measure1!r}]")
    delta = min(max(delta, 0.0), wk_measure1)

    def padded(x, i):
        return float(x[i]) if i < x.size else 0.0

    lhs = wk_measure1 * float(np.sum(sig[:l])) + delta * padded(sig, l)
    rhs = (1 - mu1_w) * float(np.sum(lam[:k]))
    return InequalityCheck(lhs >= rhs - slack * max(1.0, abs(rhs)), lhs, rhs, delta)
