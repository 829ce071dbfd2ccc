"""Coherence, the spectral measure ``[S]_alpha``, t-orthogonality and diagonal SVDs.

``[S]_alpha`` is the maximum of ``(sum_i |<S_i, u>|**alpha)**(1/alpha)`` over
unit pure tensors ``u``. :func:`bracket_alpha` only ever returns a *lower*
estimate of it (the best value found by multi-start ascent).
:func:`bracket_alpha_upper` returns certified upper bounds. Only upper bounds
and structural certificates may be used to prove anything.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from ._ascent import OptimizerSettings, maximize
from .certificates import ORTHO_TOL, structural_certificate
from .core import DenseTensor, bipartitions, flattening_spectral_norm, frobenius_norm, inner
from .decomposition import (
    Certificate,
    Decomposition,
    PureTensor,
    PureTuple,
    cardinality_ok,
    normalize,
)
from .errors import DegenerateInputError, PreconditionError

UNIT_TOL = 1e-9

Member = Union[PureTensor, DenseTensor]


class MeasureStatus(str, enum.Enum):
    HEURISTIC_LOWER = "HeuristicLower"
    CERTIFIED_UPPER = "CertifiedUpper"
    EXACT_STRUCTURAL = "ExactStructural"


class Verdict(str, enum.Enum):
    CERTIFIED_YES = "CertifiedYes"
    CERTIFIED_NO = "CertifiedNo"
    NUMERICALLY_CONSISTENT = "NumericallyConsistent"


@dataclass(frozen=True)
class MeasureEstimate:
    """A value of ``[S]_alpha`` with its provenance.

    ``HeuristicLower`` values are recomputable from the stored witness.
    ``CertifiedUpper`` values name the bound rule in ``route``;
    ``routes`` lists every rule that applied.
    """

    alpha: float
    value: float
    status: MeasureStatus
    witness: PureTensor | None = None
    route: str = ""
    routes: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status is not MeasureStatus.HEURISTIC_LOWER


@dataclass(frozen=True)
class OrthogonalityVerdict:
    t: float
    verdict: Verdict
    witness: PureTensor | None = None
    detail: str = ""
    value: float | None = None
    certificate: Certificate | None = None


# --------------------------------------------------------------------------
# coherence


def _members(S) -> list[Member]:
    if isinstance(S, (PureTensor, DenseTensor)):
        return [S]
    return list(S)


def _check_unit(v: PureTuple, tol: float = UNIT_TOL) -> None:
    for i, m in enumerate(v):
        if abs(m.length - 1) > tol:
            raise PreconditionError(f"member {i} has length {m.length!r}, expected unit length")


def _off_diagonal_overlaps(v: PureTuple) -> np.ndarray:
    G = np.abs(v.gram())
    np.fill_diagonal(G, 0)
    return G


def coherence_mu(v: PureTuple) -> float:
    """``max_{i != j} |<v_i, v_j>|`` for unit members; 0 for fewer than two."""
    _check_unit(v)
    if len(v) <= 1:
        return 0.0
    return float(_off_diagonal_overlaps(v).max())


def mu_alpha(v: PureTuple, alpha: float) -> float:
    """``max_i (sum_{j != i} |<v_i, v_j>|**alpha)**(1/alpha)``."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    _check_unit(v)
    if len(v) <= 1:
        return 0.0
    G = _off_diagonal_overlaps(v)
    return float(np.max(np.sum(G ** alpha, axis=1)) ** (1 / alpha))


# --------------------------------------------------------------------------
# [S]_alpha


def bracket_alpha(S, alpha: float, settings: OptimizerSettings | None = None, extra_starts=()) -> MeasureEstimate:
    """Heuristic lower estimate of ``[S]_alpha`` with a witness pure tensor.

    Starts from every member (factors normalized; rank-one truncated HOSVD for
    dense members), the uniform superposition and ``settings.restarts`` seeded
    random points.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    members = _members(S)
    if not members:
        raise ValueError("bracket_alpha needs a nonempty tuple")
    res = maximize(members, alpha, settings, extra_starts)
    witness = PureTensor(tuple(res.factors))
    return MeasureEstimate(
        float(alpha), res.value, MeasureStatus.HEURISTIC_LOWER, witness, "multi-start ascent",
        {"multi-start ascent": res.value},
    )


def evaluate_at(S, u: PureTensor, alpha: float) -> float:
    """``(sum_i |<S_i, u>|**alpha)**(1/alpha)`` at a given pure tensor."""
    ud = u.to_dense()
    vals = [abs(inner(m.to_dense() if isinstance(m, PureTensor) else m, ud)) for m in _members(S)]
    return float(np.sum(np.array(vals) ** alpha) ** (1 / alpha))


def _norm(m: Member) -> float:
    return m.length if isinstance(m, PureTensor) else frobenius_norm(m)


def _member_gram(members: Sequence[Member]) -> np.ndarray:
    if all(isinstance(m, PureTensor) for m in members):
        return PureTuple.of(members).gram()
    vecs = np.array([(m.to_dense() if isinstance(m, PureTensor) else m).data.ravel() for m in members])
    return vecs.conj() @ vecs.T


def bracket_alpha_upper(S, alpha: float, tol: float = ORTHO_TOL) -> MeasureEstimate:
    """Certified upper bound on ``[S]_alpha``: the minimum over the applicable rules.

    frobenius
        ``(sum_i ||S_i||**alpha)**(1/alpha)``.
    gram
        ``sqrt(lambda_max(Gram))`` bounds ``[S]_2`` even over all unit vectors;
        converted to ``alpha`` with the usual l^p inequalities.
    mu
        For unit pure members and ``alpha = 2 beta`` with ``beta >= 1``:
        ``[v]_{2 beta}**(2 beta) <= mu_beta(v)**beta + 1``. Never applied for
        ``beta < 1``, where it is false.
    structural
        A certified t-orthogonal tuple has ``[S]_alpha = 1`` for ``alpha >= 2/t``.
    flattening
        For a single tensor, the largest singular value of any flattening.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    members = _members(S)
    r = len(members)
    routes = {}
    norms = np.array([_norm(m) for m in members])
    routes["frobenius"] = float(np.sum(norms ** alpha) ** (1 / alpha))
    lam = float(max(np.linalg.eigvalsh(_member_gram(members)).max(), 0.0))
    routes["gram"] = math.sqrt(lam) * (r ** (1 / alpha - 0.5) if alpha < 2 else 1.0)
    pure_unit = all(isinstance(m, PureTensor) for m in members) and np.all(np.abs(norms - 1) <= UNIT_TOL)
    exact = False
    if pure_unit:
        tup = S if isinstance(S, PureTuple) else PureTuple.of(members)
        if alpha >= 2:
            beta = alpha / 2
            routes["mu"] = float((mu_alpha(tup, beta) ** beta + 1) ** (1 / alpha))
        cert = structural_certificate(tup, tol)
        if cert is not None and alpha >= 2 / cert.t:
            routes[f"structural:{cert.rule}"] = 1.0
            exact = True
    if r == 1 and isinstance(members[0], DenseTensor) and members[0].order > 1:
        T = members[0]
        routes["flattening"] = min(flattening_spectral_norm(T, rows) for rows in bipartitions(T.order))
    route = min(routes, key=lambda k: (routes[k], k))
    status = MeasureStatus.EXACT_STRUCTURAL if exact and routes[route] == 1.0 else MeasureStatus.CERTIFIED_UPPER
    return MeasureEstimate(float(alpha), routes[route], status, None, route, routes)


# --------------------------------------------------------------------------
# t-orthogonality


def t_orthogonality_check(
    S: PureTuple, t: float, tol: float = 1e-9, settings: OptimizerSettings | None = None
) -> OrthogonalityVerdict:
    """Decide whether ``[S]_{2/t} = 1``.

    ``CertifiedYes`` comes only from a structural certificate or a certified
    upper bound ``<= 1 + tol``; ``CertifiedNo`` only with a witness whose value
    exceeds ``1 + tol``. Anything else is ``NumericallyConsistent``, which is
    not a proof.
    """
    if t < 1:
        raise ValueError("t-orthogonality needs t >= 1")
    _check_unit(S, max(tol, UNIT_TOL))
    cert = structural_certificate(S, ORTHO_TOL)
    if cert is not None and cert.t >= t:
        return OrthogonalityVerdict(t, Verdict.CERTIFIED_YES, None, f"structural certificate {cert.rule} (t={cert.t:g})",
                                    1.0, cert)
    alpha = 2.0 / t
    est = bracket_alpha(S, alpha, settings)
    if est.value > 1 + tol:
        return OrthogonalityVerdict(t, Verdict.CERTIFIED_NO, est.witness,
                                    f"witness attains {est.value!r} > 1", est.value)
    upper = bracket_alpha_upper(S, alpha)
    if upper.value <= 1 + tol:
        return OrthogonalityVerdict(t, Verdict.CERTIFIED_YES, None, f"upper bound via {upper.route}", est.value)
    detail = f"best value found {est.value!r}; best certified upper bound {upper.value!r} ({upper.route})"
    if not cardinality_ok(len(S), S.space.size, t):
        detail += f"; {len(S)} members exceed the cardinality bound {S.space.size}**(1/{t:g})"
    return OrthogonalityVerdict(t, Verdict.NUMERICALLY_CONSISTENT, est.witness, detail, est.value)


def count_orthogonal_modes(v: PureTensor, w: PureTensor, tol: float = 1e-9) -> int:
    """Number of modes ``i`` where ``<v^(i), w^(i)> = 0`` (relative to the factor norms)."""
    if v.dims != w.dims:
        raise ValueError("pure tensors live in different spaces")
    count = 0
    for a, b in zip(v.factors, w.factors):
        if abs(np.vdot(b, a)) <= tol * np.linalg.norm(a) * np.linalg.norm(b):
            count += 1
    return count


# --------------------------------------------------------------------------
# diagonal SVD


@dataclass(frozen=True)
class DsvdReport:
    """Outcome of :func:`dsvd_verify`.

    The derived norms follow from the singular values: nuclear = sum,
    spectral = largest, frobenius = root of the sum of squares. They are
    meaningful only when ``ok``.
    """

    singular_values: np.ndarray
    two_ortho: OrthogonalityVerdict | None
    unit_ok: bool
    ok: bool
    failed_clause: str | None
    decomposition: Decomposition

    @property
    def nuclear(self) -> float:
        return float(np.sum(self.singular_values))

    @property
    def spectral(self) -> float:
        return float(self.singular_values[0]) if len(self.singular_values) else 0.0

    @property
    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(self.singular_values ** 2)))

    @property
    def status(self) -> str:
        if self.ok:
            return "verified"
        if self.two_ortho is not None and self.two_ortho.verdict is Verdict.NUMERICALLY_CONSISTENT:
            return "consistent"
        return "failed"


def dsvd_verify(dec: Decomposition, tol: float = 1e-9, settings: OptimizerSettings | None = None) -> DsvdReport:
    """Check that ``dec`` (after normalization) is a diagonal singular value decomposition.

    Clauses, in order: ``nonempty``, ``unit_terms``, ``coefficients`` (real,
    positive, nonincreasing) and ``two_orthogonality``. The first violated
    clause is reported in ``failed_clause``; a ``CertifiedNo`` 2-orthogonality
    verdict carries its witness.
    """
    nd = normalize(dec)
    sig = nd.coeffs
    if len(nd) == 0:
        return DsvdReport(np.array([]), None, True, False, "nonempty", nd)
    unit_ok = all(abs(v.length - 1) <= tol for v in nd.pures)
    if not unit_ok:
        return DsvdReport(sig.real, None, False, False, "unit_terms", nd)
    if np.any(np.abs(sig.imag) > 0) or np.any(sig.real <= 0) or np.any(np.diff(sig.real) > tol * sig.real[0]):
        return DsvdReport(sig.real, None, True, False, "coefficients", nd)
    verdict = t_orthogonality_check(nd.term_tuple(), 2.0, tol, settings)
    ok = verdict.verdict is Verdict.CERTIFIED_YES
    return DsvdReport(sig.real, verdict, True, ok, None if ok else "two_orthogonality", nd)


@dataclass(frozen=True)
class ExtractionResult:
    decomposition: Decomposition
    residual_norm: float
    complete: bool

    @property
    def singular_values(self) -> np.ndarray:
        return self.decomposition.coeffs.real


def dsvd_extract(
    T: DenseTensor,
    tol: float = 1e-10,
    max_terms: int | None = None,
    settings: OptimizerSettings | None = None,
) -> ExtractionResult:
    """Greedy rank-one deflation by spectral maximizers.

    Repeatedly finds a unit pure ``u`` maximizing ``|<R, u>|`` on the residual
    ``R``, folds the phase of ``<R, u>`` into ``u`` and subtracts. For a tensor
    with a diagonal SVD the maximizer is a leading term, so the loop recovers
    it. Stops once ``||R|| <= tol * ||T||``; hitting ``max_terms`` (default
    ``floor(sqrt(dim))``, the most terms a 2-orthogonal tuple can have) flags
    the result incomplete.
    """
    norm_T = frobenius_norm(T)
    if norm_T == 0:
        raise DegenerateInputError("cannot extract a decomposition of the zero tensor")
    if max_terms is None:
        max_terms = max(1, math.isqrt(T.space.size))
    R = DenseTensor(T.data)
    terms = []
    complete = False
    for _ in range(max_terms):
        est = bracket_alpha((R,), 2.0, settings)
        u = est.witness
        z = inner(R, u.to_dense())
        if abs(z) == 0:
            break
        u = u.scaled_first(z / abs(z))
        terms.append((abs(z), u))
        R = DenseTensor(R.data - abs(z) * u.to_dense().data)
        if frobenius_norm(R) <= tol * norm_T:
            complete = True
            break
    dec = normalize(Decomposition(T.space, tuple(terms)))
    return ExtractionResult(dec, frobenius_norm(R), complete)
