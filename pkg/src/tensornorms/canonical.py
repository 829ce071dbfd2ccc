"""Explicit tensors, decompositions, tuples and closed-form bounds.

Index conventions: ``e_{i,j}`` in ``C^{p x q}`` is the basis vector with
flat index ``i*q + j`` (0-based, row-major). Group elements are ``0..n-1``;
for cyclic groups element ``i`` is ``x**i``. File formats shift everything by
one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

import numpy as np

from .certificates import certify
from .core import DenseTensor, TensorSpace, flatten, matrix_rank
from .decomposition import (
    Certificate,
    Decomposition,
    PureTensor,
    PureTuple,
    apply_mode_unitary,
    basis_pure,
    vertical_product,
)
from .errors import ResourceError, ValidationError

MAX_MATMUL_VOLUME = 4096
MAX_GROUP_ORDER = 32
MAX_PERM_N = 6
MAX_ASSOCIATIVITY_CHECK = 64


# --------------------------------------------------------------------------
# matrix multiplication


def _e(p: int, q: int, i: int, j: int) -> np.ndarray:
    v = np.zeros(p * q)
    v[i * q + j] = 1
    return v


def _embedded_diagonal(n: int, modes: tuple[int, int, int]) -> PureTuple:
    # (e_i placed on the modes flagged 1, the scalar 1 elsewhere), certified.
    members = []
    for i in range(n):
        facs = []
        for flag in modes:
            if flag:
                f = np.zeros(n)
                f[i] = 1
            else:
                f = np.ones(1)
            facs.append(f)
        members.append(PureTensor(tuple(facs)))
    return certify(PureTuple.of(members))


def matmul_tuple(p: int, q: int, r: int) -> PureTuple:
    """The ``pqr`` terms ``e_{i,j} ⊗ e_{j,k} ⊗ e_{k,i}`` as a certified 2-orthogonal tuple.

    Built as a vertical product of three 2-orthogonal tuples (each a diagonal
    ``e_i ⊗ e_i`` padded with a trivial mode), followed by the permutation of
    the last mode taking ``e_{i,k}`` to ``e_{k,i}``. Order: lexicographic in
    ``(i, j, k)``.
    """
    for x in (p, q, r):
        if int(x) != x or x < 1:
            raise ValueError("matmul dimensions must be positive integers")
    if p * q * r > MAX_MATMUL_VOLUME:
        raise ResourceError(f"pqr = {p * q * r} exceeds the cap {MAX_MATMUL_VOLUME}")
    P = _embedded_diagonal(p, (1, 0, 1))
    Q = _embedded_diagonal(q, (1, 1, 0))
    R = _embedded_diagonal(r, (0, 1, 1))
    PQR = vertical_product(vertical_product(P, Q), R)
    assert PQR.certificate is not None and PQR.certificate.t >= 2
    perm = np.zeros((r * p, p * r))
    for i, k in product(range(p), range(r)):
        perm[k * p + i, i * r + k] = 1
    out = apply_mode_unitary(PQR, 2, perm)
    return out.with_certificate(Certificate(2.0, "matmul", (p, q, r)))


def matmul_tensor(p: int, q: int, r: int) -> tuple[DenseTensor, Decomposition]:
    """``M_{p,q,r}`` in ``C^{pq} ⊗ C^{qr} ⊗ C^{rp}`` and its certified ``pqr``-term decomposition."""
    tup = matmul_tuple(p, q, r)
    dec = Decomposition(tup.space, tuple((1.0, v) for v in tup), tup.certificate)
    data = np.zeros(tup.space.dims)
    for i, j, k in product(range(p), range(q), range(r)):
        data[i * q + j, j * r + k, k * p + i] = 1
    return DenseTensor(data, provenance=("matmul", (p, q, r))), dec


# Each row: three factors, each a list of (coefficient, i, j) for e_{i,j} (1-based).
_STRASSEN = (
    (((1, 1, 1), (1, 2, 2)), ((1, 1, 1), (1, 2, 2)), ((1, 1, 1), (1, 2, 2))),
    (((1, 2, 1), (-1, 2, 2)), ((1, 1, 1),), ((1, 1, 2), (1, 2, 2))),
    (((1, 1, 2), (1, 2, 2)), ((1, 2, 1), (-1, 2, 2)), ((1, 1, 1),)),
    (((1, 1, 1), (1, 2, 1)), ((1, 1, 2), (-1, 1, 1)), ((1, 2, 2),)),
    (((1, 1, 2), (-1, 1, 1)), ((1, 2, 2),), ((1, 1, 1), (1, 2, 1))),
    (((1, 2, 2),), ((1, 1, 1), (1, 2, 1)), ((1, 1, 2), (-1, 1, 1))),
    (((1, 1, 1),), ((1, 1, 2), (1, 2, 2)), ((1, 2, 1), (-1, 2, 2))),
)


def strassen_decomposition() -> Decomposition:
    """Strassen's seven-term decomposition of ``M_{2,2,2}`` (integer factors)."""
    terms = []
    for row in _STRASSEN:
        facs = tuple(sum(c * _e(2, 2, i - 1, j - 1) for c, i, j in factor) for factor in row)
        terms.append((1.0, PureTensor(facs)))
    return Decomposition(TensorSpace((4, 4, 4)), tuple(terms))


# --------------------------------------------------------------------------
# groups


@dataclass(frozen=True, eq=False)
class GroupTable:
    """Multiplication table on elements ``0..n-1``: ``mul[a][b]`` is ``a·b``."""

    order: int
    mul: np.ndarray
    identity: int
    name: str = ""

    def __post_init__(self):
        mul = np.array(self.mul, dtype=int)
        mul.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        validate_group(self)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))


def validate_group(G: GroupTable) -> None:
    n = G.order
    M = G.mul
    if n < 1 or M.shape != (n, n):
        raise ValidationError(f"multiplication table must be {n}x{n}, got shape {M.shape}")
    if M.min() < 0 or M.max() >= n:
        raise ValidationError("table entries out of range")
    perm = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(M[a]), perm):
            raise ValidationError(f"row {a + 1} is not a permutation")
        if not np.array_equal(np.sort(M[:, a]), perm):
            raise ValidationError(f"column {a + 1} is not a permutation")
    e = G.identity
    if not (0 <= e < n) or not np.array_equal(M[e], perm) or not np.array_equal(M[:, e], perm):
        raise ValidationError(f"element {e + 1} is not a two-sided identity")
    if n <= MAX_ASSOCIATIVITY_CHECK:
        lhs = M[M, :]  # (a·b)·c indexed [a, b, c]
        rhs = M[:, M]  # a·(b·c) indexed [a, b, c]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b, c = (int(x) + 1 for x in bad[0])
            raise ValidationError(f"associativity fails at (a, b, c) = ({a}, {b}, {c})")


def cyclic_group(n: int) -> GroupTable:
    i = np.arange(n)
    return GroupTable(n, (i[:, None] + i[None, :]) % n, 0, f"cyclic({n})")


def dihedral_group(n: int) -> GroupTable:
    """Symmetries of the ``n``-gon, order ``2n``; element ``a + n*b`` is ``r**a s**b``."""
    mul = np.zeros((2 * n, 2 * n), dtype=int)
    for a, b, c, d in product(range(n), range(2), range(n), range(2)):
        mul[a + n * b, c + n * d] = (a + (-1) ** b * c) % n + n * ((b + d) % 2)
    return GroupTable(2 * n, mul, 0, f"dihedral({n})")


def symmetric_group(m: int) -> GroupTable:
    """Permutations of ``m`` points in lexicographic order; ``(s·t)(x) = s(t(x))``."""
    perms = list(permutations(range(m)))
    index = {p: i for i, p in enumerate(perms)}
    mul = np.array([[index[tuple(s[t[x]] for x in range(m))] for t in perms] for s in perms])
    return GroupTable(len(perms), mul, 0, f"symmetric({m})")


_GROUP_KINDS = {"cyclic": cyclic_group, "dihedral": dihedral_group, "symmetric": symmetric_group}


def group_table(kind: str, n: int) -> GroupTable:
    """Built-in group by name: ``cyclic`` (order n), ``dihedral`` (order 2n), ``symmetric`` (order n!)."""
    if kind not in _GROUP_KINDS:
        raise ValueError(f"unknown group kind {kind!r}; choose from {sorted(_GROUP_KINDS)}")
    if n < 1:
        raise ValueError("group parameter must be positive")
    order = {"cyclic": n, "dihedral": 2 * n, "symmetric": math.factorial(n)}[kind]
    if order > MAX_GROUP_ORDER:
        raise ResourceError(f"group order {order} exceeds the cap {MAX_GROUP_ORDER}")
    return _GROUP_KINDS[kind](n)


def _check_group_cap(G: GroupTable) -> None:
    if G.order > MAX_GROUP_ORDER:
        raise ResourceError(f"group order {G.order} exceeds the cap {MAX_GROUP_ORDER}")


def group_triples(G: GroupTable) -> list[tuple[int, int, int]]:
    """All ``(g, h, k)`` with ``g·h·k = 1``, lexicographic in ``(g, h)``."""
    inv = np.array([int(np.flatnonzero(G.mul[x] == G.identity)[0]) for x in range(G.order)])
    return [(g, h, int(inv[G.mul[g, h]])) for g in range(G.order) for h in range(G.order)]


def group_tensor(G: GroupTable) -> DenseTensor:
    """``T_G``: ones exactly at ``(g, h, k)`` with ``g·h·k = 1``."""
    _check_group_cap(G)
    data = np.zeros((G.order,) * 3)
    for g, h, k in group_triples(G):
        data[g, h, k] = 1
    return DenseTensor(data, provenance=("group", G))


def group_tuple(G: GroupTable) -> PureTuple:
    """The ``n**2`` basis tensors ``g ⊗ h ⊗ k`` with ``g·h·k = 1``, certified 3/2-orthogonal."""
    _check_group_cap(G)
    dims = (G.order,) * 3
    tup = PureTuple.of([basis_pure(dims, x) for x in group_triples(G)])
    out = certify(tup)
    assert out.certificate is not None and out.certificate.t >= 1.5
    return out


def dft_decomposition(n: int) -> Decomposition:
    """``T_{C_n} = sum_t sqrt(n) * chi_t ⊗ chi_t ⊗ chi_t`` with unit characters ``chi_t``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_GROUP_ORDER:
        raise ResourceError(f"group order {n} exceeds the cap {MAX_GROUP_ORDER}")
    i = np.arange(n)
    terms = []
    for t in range(n):
        chi = np.exp(2j * np.pi * ((t * i) % n) / n) / math.sqrt(n)
        terms.append((math.sqrt(n), PureTensor((chi, chi, chi))))
    tup = certify(PureTuple.of([v for _, v in terms]))
    return Decomposition(TensorSpace((n, n, n)), tuple(terms), tup.certificate)


@dataclass(frozen=True)
class IrrepDims:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError("irreducible representation dimensions must be positive")
        object.__setattr__(self, "dims", dims)


@dataclass(frozen=True)
class GroupSpectrum:
    values: np.ndarray
    nuclear: float
    spectral: float


def group_singular_values(n: int, irreps: IrrepDims | tuple[int, ...]) -> GroupSpectrum:
    """Closed-form singular values of ``T_G``: ``sqrt(n/d)`` with multiplicity ``d**3`` per irrep."""
    if not isinstance(irreps, IrrepDims):
        irreps = IrrepDims(tuple(irreps))
    if sum(d * d for d in irreps.dims) != n:
        raise ValueError(f"sum of squared irrep dimensions {sum(d * d for d in irreps.dims)} != {n}")
    vals = np.concatenate([np.full(d ** 3, math.sqrt(n / d)) for d in irreps.dims])
    vals = np.sort(vals)[::-1]
    nuclear = math.sqrt(n) * sum(d ** 2.5 for d in irreps.dims)
    return GroupSpectrum(vals, nuclear, math.sqrt(n))


# --------------------------------------------------------------------------
# determinant and permanent


def _check_perm_cap(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_PERM_N:
        raise ResourceError(f"n = {n} exceeds the cap {MAX_PERM_N} (n**n dense entries)")


def _sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


def determinant_tensor(n: int) -> DenseTensor:
    """``sum_sigma sgn(sigma) e_{sigma(1)} ⊗ ... ⊗ e_{sigma(n)}``."""
    _check_perm_cap(n)
    data = np.zeros((n,) * n)
    for p in permutations(range(n)):
        data[p] = _sign(p)
    return DenseTensor(data, provenance=("det", n))


def permanent_tensor(n: int) -> DenseTensor:
    """``sum_sigma e_{sigma(1)} ⊗ ... ⊗ e_{sigma(n)}``."""
    _check_perm_cap(n)
    data = np.zeros((n,) * n)
    for p in permutations(range(n)):
        data[p] = 1
    return DenseTensor(data, provenance=("per", n))


def glynn_decomposition(n: int) -> Decomposition:
    """``per_n = 2**(1-n) sum_delta (prod delta) (delta)^{⊗n}`` over sign vectors with ``delta_1 = 1``."""
    _check_perm_cap(n)
    terms = []
    for tail in product((1, -1), repeat=n - 1):
        delta = np.array((1,) + tail, dtype=float)
        coeff = float(np.prod(delta)) / 2 ** (n - 1)
        terms.append((coeff, PureTensor((delta,) * n)))
    return Decomposition(TensorSpace((n,) * n), tuple(terms))


# Factors as integer vectors; overall factor 1/2.
_DET3 = (
    ((0, 1, 1), (1, -1, 0), (1, 1, 0)),
    ((1, 1, 0), (0, 1, -1), (0, 1, 1)),
    ((0, 2, 0), (-1, 0, 1), (1, 0, 1)),
    ((0, -1, 1), (1, 1, 0), (-1, 1, 0)),
    ((1, -1, 0), (0, 1, 1), (0, -1, 1)),
)


def det3_decomposition() -> Decomposition:
    """Five-term decomposition of ``det_3`` with coefficients 1/2."""
    terms = tuple((0.5, PureTensor(tuple(np.array(f, dtype=float) for f in row))) for row in _DET3)
    return Decomposition(TensorSpace((3, 3, 3)), terms)


def laplace_flattening_bound(n: int, kind: str) -> int:
    """Rank of the flattening of ``det_n`` or ``per_n`` onto its first ``n // 2`` modes.

    Equals ``C(n, n // 2)`` and lower-bounds the tensor rank.
    """
    if n < 2:
        raise ValueError("needs n >= 2 for a proper flattening")
    T = {"det": determinant_tensor, "per": permanent_tensor}[_check_kind(kind)](n)
    rank = matrix_rank(flatten(T, range(n // 2)).matrix)
    expected = math.comb(n, n // 2)
    assert rank == expected, f"flattening rank {rank} != C({n}, {n // 2}) = {expected}"
    return rank


def det_rank_recursive_upper(n: int) -> Fraction:
    """``(5/6)**(n // 3) * n!`` as an exact rational."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(5, 6) ** (n // 3) * math.factorial(n)


def _check_kind(kind: str) -> str:
    if kind not in ("det", "per"):
        raise ValueError(f"kind must be 'det' or 'per', got {kind!r}")
    return kind


def hadamard_spectral_override(kind: str, n: int) -> float:
    """Certified spectral upper bound: 1 for ``det_n``, ``n!/n**(n/2)`` for ``per_n``."""
    if _check_kind(kind) == "det":
        return 1.0
    return math.factorial(n) / n ** (n / 2)


def pairwise_counterexample() -> PureTuple:
    """``(e1⊗e1⊗e1, e1⊗e2⊗e2, e2⊗e1⊗e2)``: pairwise 2-orthogonal, not 2-orthogonal."""
    dims = (2, 2, 2)
    return PureTuple.of([basis_pure(dims, x) for x in ((0, 0, 0), (0, 1, 1), (1, 0, 1))])


NAMED_TUPLES = {"matmul": matmul_tuple}
