"""Dense complex tensors, flattenings and the higher-order SVD.

Conventions used everywhere in the package:

* The field is complex; real input is embedded.
* ``inner(T, S)`` is linear in ``T`` and conjugate-linear in ``S``
  (``<A, B> = trace(A B^*)`` for matrices).
* Entries are stored row-major over the modes in ascending order; modes are
  numbered from 0 like numpy axes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInputError, DimensionError

RANK_TOL = 1e-9


@dataclass(frozen=True)
class TensorSpace:
    """Mode dimensions ``(n_1, ..., n_d)`` of a tensor product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) < 1:
            raise DimensionError("a tensor space needs at least one mode")
        if any(n < 1 for n in dims):
            raise DimensionError(f"mode dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def order(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def horizontal(self, other: "TensorSpace") -> "TensorSpace":
        """Concatenate the mode lists."""
        return TensorSpace(self.dims + other.dims)

    def vertical(self, other: "TensorSpace") -> "TensorSpace":
        """Merge corresponding modes; mode dimensions multiply."""
        if self.order != other.order:
            raise DimensionError(
                f"vertical product needs equal mode counts, got {self.order} and {other.order}"
            )
        return TensorSpace(tuple(a * b for a, b in zip(self.dims, other.dims)))


class DenseTensor:
    """Immutable complex coefficient array over a :class:`TensorSpace`.

    ``provenance`` optionally records which constructor produced the tensor
    (e.g. ``("det", 3)``); analytic bound registries may consult it, but always
    re-verify the tensor before trusting the tag.
    """

    __slots__ = ("_data", "space", "provenance")

    def __init__(self, data, provenance=None):
        arr = np.array(data, dtype=np.complex128)
        if arr.ndim == 0:
            arr = arr.reshape(1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        self._data = arr
        self.space = TensorSpace(arr.shape)
        self.provenance = provenance

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    @property
    def order(self) -> int:
        return self.space.order

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "DenseTensor":
        return cls(np.zeros(TensorSpace(tuple(dims)).dims, dtype=np.complex128))

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        _check_same_space(self, other)
        return DenseTensor(self._data + other._data)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        _check_same_space(self, other)
        return DenseTensor(self._data - other._data)

    def __mul__(self, scalar) -> "DenseTensor":
        return DenseTensor(complex(scalar) * self._data)

    __rmul__ = __mul__

    def __neg__(self) -> "DenseTensor":
        return DenseTensor(-self._data)

    def __repr__(self) -> str:
        tag = f", provenance={self.provenance!r}" if self.provenance else ""
        return f"DenseTensor(dims={self.dims}{tag})"

    def allclose(self, other: "DenseTensor", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and bool(np.allclose(self._data, other._data, rtol=0, atol=atol))

    def equals(self, other: "DenseTensor") -> bool:
        """Exact entrywise equality."""
        return self.dims == other.dims and bool(np.array_equal(self._data, other._data))


def _check_same_space(T: DenseTensor, S: DenseTensor) -> None:
    if T.space != S.space:
        raise DimensionError(f"tensor spaces differ: {T.dims} vs {S.dims}")


def inner(T: DenseTensor, S: DenseTensor) -> complex:
    """Hermitian inner product, linear in ``T`` and conjugate-linear in ``S``."""
    _check_same_space(T, S)
    return complex(np.vdot(S.data, T.data))


def frobenius_norm(T: DenseTensor) -> float:
    return float(np.linalg.norm(T.data.ravel()))


def entrywise_l1(T: DenseTensor) -> float:
    """Cost of the basis expansion of ``T``: an upper bound on the nuclear norm."""
    return float(np.abs(T.data).sum())


@dataclass(frozen=True)
class Flattening:
    row_modes: tuple[int, ...]
    matrix: np.ndarray


def _check_row_modes(order: int, row_modes: Iterable[int]) -> tuple[int, ...]:
    modes = tuple(sorted(set(int(m) for m in row_modes)))
    if not modes or len(modes) >= order:
        raise ValueError(f"row modes must be a nonempty proper subset of 0..{order - 1}, got {modes}")
    if modes[0] < 0 or modes[-1] >= order:
        raise ValueError(f"row modes out of range for order {order}: {modes}")
    return modes


def flatten(T: DenseTensor, row_modes: Iterable[int]) -> Flattening:
    """Reshape ``T`` into a matrix with rows indexed by ``row_modes``.

    Both the row and the column multi-indices are row-major in ascending mode
    order.
    """
    rows = _check_row_modes(T.order, row_modes)
    cols = tuple(m for m in range(T.order) if m not in rows)
    nr = int(np.prod([T.dims[m] for m in rows]))
    mat = np.transpose(T.data, rows + cols).reshape(nr, -1)
    return Flattening(rows, mat)


def unfold(T: DenseTensor, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding: the flattening with a single row mode."""
    if T.order == 1:
        return T.data.reshape(-1, 1)
    return flatten(T, (mode,)).matrix


def matrix_rank(M: np.ndarray, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def flattening_spectral_norm(T: DenseTensor, row_modes: Iterable[int]) -> float:
    """Largest singular value of a flattening; an upper bound on the spectral norm."""
    return float(np.linalg.norm(flatten(T, row_modes).matrix, 2))


def bipartitions(order: int) -> list[tuple[int, ...]]:
    """Row-mode sets of all proper bipartitions, one per complementary pair."""
    out = []
    for k in range(1, order // 2 + 1):
        for rows in combinations(range(order), k):
            if 2 * k == order and 0 not in rows:
                continue
            out.append(rows)
    return out


@dataclass(frozen=True)
class HosvdResult:
    """Orthonormal mode bases, the core in those bases and the mode singular values.

    ``bases[j]`` holds the basis vectors of mode ``j`` as columns.
    """

    bases: tuple[np.ndarray, ...]
    core: DenseTensor
    mode_singular_values: tuple[np.ndarray, ...]

    def reassemble(self) -> DenseTensor:
        return DenseTensor(multi_mode_product(self.core.data, self.bases))


def multi_mode_product(core: np.ndarray, mats: Sequence[np.ndarray]) -> np.ndarray:
    """Apply ``mats[j]`` to mode ``j`` of ``core`` for every mode."""
    out = core
    for j, M in enumerate(mats):
        out = np.moveaxis(np.tensordot(M, out, axes=([1], [j])), 0, j)
    return out


def _fix_phase(U: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made real positive (first on ties).
    idx = np.argmax(np.abs(U), axis=0)
    pivots = U[idx, np.arange(U.shape[1])]
    phases = np.where(np.abs(pivots) > 0, pivots / np.where(pivots == 0, 1, np.abs(pivots)), 1)
    return U / phases[None, :]


def hosvd(T: DenseTensor) -> HosvdResult:
    """Higher-order singular value decomposition.

    For every mode ``j`` the basis is the left singular basis of the mode-``j``
    unfolding, so the slices ``T_k^{(j)}`` of the core are pairwise orthogonal
    with nonincreasing norms ``mode_singular_values[j][k]``.

    Raises
    ------
    DegenerateInputError
        If ``T`` is the zero tensor.
    """
    if frobenius_norm(T) == 0:
        raise DegenerateInputError("HOSVD of the zero tensor is undefined")
    bases = []
    values = []
    for j in range(T.order):
        U, s, _ = np.linalg.svd(unfold(T, j), full_matrices=True)
        s_full = np.zeros(T.dims[j])
        s_full[: len(s)] = s
        bases.append(_fix_phase(U))
        values.append(s_full)
    core = multi_mode_product(T.data, [U.conj().T for U in bases])
    return HosvdResult(tuple(bases), DenseTensor(core), tuple(values))
