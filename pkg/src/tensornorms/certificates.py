"""Structural rules that prove t-orthogonality of a tuple of pure unit tensors.

Numerical optimization only ever gives lower estimates of ``[S]_alpha``; a
tuple is certified t-orthogonal only by one of the rules below.

mode partition
    If the modes split into ``k`` disjoint groups and, within each group, every
    pair of members is orthogonal in at least one mode of the group, the tuple
    is a horizontal product of ``k`` orthogonal (1-orthogonal) tuples and hence
    ``k``-orthogonal.

basis cover
    For members that are (phase multiples of) standard basis tensors with index
    set ``X``: if weights ``lambda_F >= 0`` summing to 1 sit on mode subsets
    ``F`` onto which ``X`` projects injectively, and every mode is covered with
    total weight at most ``s``, then weighted AM-GM gives
    ``sum_x prod_m |u_m(x_m)|**(2 s) <= 1``, i.e. the tuple is ``1/s``-orthogonal.
    The group-algebra tuple (pairs of modes, ``s = 2/3``) is the motivating case.

attached
    Certificates carried by tuples built through horizontal/vertical products
    of certified tuples, or by named constructions re-validated on load.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .decomposition import Certificate, PureTuple, cardinality_ok

ORTHO_TOL = 1e-9
MAX_PARTITION_MODES = 12


def _pair_orthogonality(tup: PureTuple, tol: float) -> np.ndarray:
    """Boolean array ``(d, n_pairs)``: pair ``i < j`` orthogonal in mode ``m``."""
    r = len(tup)
    iu = np.triu_indices(r, 1)
    out = []
    for A in tup.factor_matrices():
        norms = np.linalg.norm(A, axis=1)
        G = np.abs(A @ A.conj().T)
        out.append(G[iu] <= tol * (norms[iu[0]] * norms[iu[1]]))
    return np.array(out).reshape(len(out), -1)


def mode_partition_degree(tup: PureTuple, tol: float = ORTHO_TOL) -> float:
    """Largest ``k`` such that the modes split into ``k`` pairwise-orthogonal groups.

    Returns ``inf`` for tuples with fewer than two members and 0 when no group
    of modes separates all pairs.
    """
    if len(tup) <= 1:
        return math.inf
    d = tup.space.order
    if d > MAX_PARTITION_MODES:
        return 0
    ortho = _pair_orthogonality(tup, tol)
    full = (1 << d) - 1
    covering = np.zeros(1 << d, bool)
    for mask in range(1, 1 << d):
        modes = [m for m in range(d) if mask >> m & 1]
        covering[mask] = bool(np.all(np.any(ortho[modes], axis=0)))
    # best[mask]: most disjoint covering groups inside mask. Unused modes can be
    # appended to any group without breaking its covering property.
    best = np.zeros(1 << d, int)
    for mask in range(1, full + 1):
        b = 0
        sub = mask
        while sub:
            if covering[sub]:
                b = max(b, 1 + best[mask ^ sub])
            sub = (sub - 1) & mask
        best[mask] = b
    return float(best[full])


def basis_indices(tup: PureTuple, tol: float = ORTHO_TOL) -> np.ndarray | None:
    """Index matrix ``(r, d)`` if every member is a unimodular multiple of a basis tensor."""
    idx = np.zeros((len(tup), tup.space.order), dtype=int)
    for i, mem in enumerate(tup):
        for j, f in enumerate(mem.factors):
            a = np.abs(f)
            k = int(np.argmax(a))
            if abs(a[k] - 1) > tol or np.any(np.delete(a, k) > tol):
                return None
            idx[i, j] = k
    return idx


def basis_cover_degree(tup: PureTuple, tol: float = ORTHO_TOL) -> float:
    """Degree proven by the basis-cover rule, 0 if it does not apply."""
    X = basis_indices(tup, tol)
    if X is None:
        return 0.0
    r, d = X.shape
    if r <= 1:
        return math.inf
    if d > MAX_PARTITION_MODES:
        return 0.0
    injective = []
    for k in range(1, d + 1):
        for F in combinations(range(d), k):
            if any(set(G) <= set(F) for G in injective):
                continue
            if len({tuple(row) for row in X[:, F]}) == r:
                injective.append(F)
    if not injective:
        return 0.0
    K = len(injective)
    # Variables: lambda_F (K of them) then s; minimize s.
    c = np.zeros(K + 1)
    c[-1] = 1
    A_ub = np.zeros((d, K + 1))
    for f, F in enumerate(injective):
        for m in F:
            A_ub[m, f] = 1
    A_ub[:, -1] = -1
    A_eq = np.zeros((1, K + 1))
    A_eq[0, :K] = 1
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(d), A_eq=A_eq, b_eq=[1], bounds=[(0, None)] * (K + 1))
    if not res.success:
        return 0.0
    # Snap the weights to rationals and recompute the coverage exactly; any
    # probability vector gives a valid bound.
    lam = [Fraction(float(x)).limit_denominator(1000) for x in res.x[:K]]
    lam = [max(x, Fraction(0)) for x in lam]
    total = sum(lam)
    lam = [x / total for x in lam]
    cover = [sum(lam[f] for f, F in enumerate(injective) if m in F) for m in range(d)]
    s = max(cover)
    return float(1 / s)


def structural_certificate(tup: PureTuple, tol: float = ORTHO_TOL) -> Certificate | None:
    """Strongest certificate available from the attached one and the structural rules."""
    cands = []
    if tup.certificate is not None:
        cands.append(tup.certificate)
    k = mode_partition_degree(tup, tol)
    if k >= 1:
        cands.append(Certificate(k, "mode-partition"))
    t = basis_cover_degree(tup, tol)
    if t >= 1:
        cands.append(Certificate(t, "basis-cover"))
    if not cands:
        return None
    best = max(cands, key=lambda c: c.t)
    if not cardinality_ok(len(tup), tup.space.size, best.t):
        raise AssertionError(f"structural rule {best.rule} violates the cardinality bound")
    return best


def certify(tup: PureTuple, tol: float = ORTHO_TOL) -> PureTuple:
    """Return ``tup`` with its strongest structural certificate attached."""
    return tup.with_certificate(structural_certificate(tup, tol))


def same_members_up_to_phase(a: PureTuple, b: PureTuple, tol: float = 1e-9) -> bool:
    """True if the two tuples hold the same unit pure tensors up to order and phase."""
    if len(a) != len(b) or a.space != b.space:
        return False
    A = PureTuple(a.space, tuple(m.normalized() for m in a))
    B = PureTuple(b.space, tuple(m.normalized() for m in b))
    G = np.ones((len(A), len(B)), dtype=np.complex128)
    for X, Y in zip(A.factor_matrices(), B.factor_matrices()):
        G = G * (X @ Y.conj().T)
    hits = np.abs(np.abs(G) - 1) <= tol
    return bool(np.all(hits.sum(axis=0) == 1) and np.all(hits.sum(axis=1) == 1))


def validate_named(tup: PureTuple, rule: str, params) -> Certificate | None:
    """Re-derive a named certificate by rebuilding its construction and comparing."""
    from . import canonical

    builder = canonical.NAMED_TUPLES.get(rule)
    if builder is None:
        return None
    try:
        ref = builder(*params)
    except (TypeError, ValueError):
        return None
    if ref.certificate is None or not same_members_up_to_phase(tup, ref):
        return None
    return ref.certificate
