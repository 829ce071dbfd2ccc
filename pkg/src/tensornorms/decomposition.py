"""Pure tensors, tuples of pure tensors and weighted decompositions.

A :class:`Decomposition` is an ordered list of ``(coeff, PureTensor)`` terms.
Its :func:`nuclear_cost` is an upper bound on the nuclear norm of the tensor it
assembles to. Tuples may carry a :class:`Certificate` recording a proven
t-orthogonality degree; the horizontal and vertical products propagate it.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DenseTensor, TensorSpace
from .errors import DimensionError

DROP_RTOL = 1e-14
_SORT_DIGITS = 12


def _as_factor(v) -> np.ndarray:
    arr = np.array(v, dtype=np.complex128).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureTensor:
    """``v^(1) ⊗ ... ⊗ v^(d)`` stored by its factors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        facs = tuple(_as_factor(f) for f in self.factors)
        if not facs:
            raise DimensionError("a pure tensor needs at least one factor")
        object.__setattr__(self, "factors", facs)

    @property
    def space(self) -> TensorSpace:
        return TensorSpace(tuple(len(f) for f in self.factors))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    @property
    def factor_norms(self) -> np.ndarray:
        return np.array([np.linalg.norm(f) for f in self.factors])

    @property
    def length(self) -> float:
        return float(np.prod(self.factor_norms))

    def to_dense(self) -> DenseTensor:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = np.multiply.outer(out, f)
        return DenseTensor(out)

    def normalized(self) -> "PureTensor":
        norms = self.factor_norms
        if np.any(norms == 0):
            raise ValueError("cannot normalize a pure tensor with a zero factor")
        return PureTensor(tuple(f / n for f, n in zip(self.factors, norms)))

    def scaled_first(self, c: complex) -> "PureTensor":
        return PureTensor((c * self.factors[0],) + self.factors[1:])

    def __repr__(self) -> str:
        return f"PureTensor(dims={self.dims})"


def pure_inner(v: PureTensor, w: PureTensor) -> complex:
    """``<v, w>`` computed factorwise."""
    if v.dims != w.dims:
        raise DimensionError(f"tensor spaces differ: {v.dims} vs {w.dims}")
    out = 1.0 + 0j
    for a, b in zip(v.factors, w.factors):
        out *= np.vdot(b, a)
    return complex(out)


def basis_pure(dims: Sequence[int], index: Sequence[int]) -> PureTensor:
    """Standard basis pure tensor ``e_{i_1} ⊗ ... ⊗ e_{i_d}`` (0-based indices)."""
    facs = []
    for n, i in zip(dims, index):
        f = np.zeros(n, dtype=np.complex128)
        f[i] = 1
        facs.append(f)
    return PureTensor(tuple(facs))


@dataclass(frozen=True)
class Certificate:
    """Proven t-orthogonality degree of a tuple together with the rule that proved it."""

    t: float
    rule: str
    params: tuple = ()


def cardinality_ok(r: int, size: int, t: float) -> bool:
    """``r <= size**(1/t)``, the cardinality bound every t-orthogonal tuple obeys."""
    if math.isinf(t):
        return r <= 1
    return r <= size ** (1.0 / t) * (1 + 1e-9)


@dataclass(frozen=True, eq=False)
class PureTuple:
    """Ordered tuple of pure tensors in one space, optionally certified."""

    space: TensorSpace
    members: tuple[PureTensor, ...]
    certificate: Certificate | None = None

    def __post_init__(self):
        members = tuple(self.members)
        for m in members:
            if m.space != self.space:
                raise DimensionError(f"member space {m.dims} differs from tuple space {self.space.dims}")
        object.__setattr__(self, "members", members)
        cert = self.certificate
        if cert is not None and not cardinality_ok(len(members), self.space.size, cert.t):
            raise AssertionError(
                f"certificate {cert.rule} claims t={cert.t} for {len(members)} members in dimension "
                f"{self.space.size}, violating the cardinality bound"
            )

    @classmethod
    def of(cls, members: Sequence[PureTensor], certificate: Certificate | None = None) -> "PureTuple":
        members = tuple(members)
        if not members:
            raise ValueError("use PureTuple(space, ()) for an empty tuple")
        return cls(members[0].space, members, certificate)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def factor_matrices(self) -> list[np.ndarray]:
        """Per mode, the ``(r, n_m)`` matrix whose rows are the members' factors."""
        return [
            np.array([m.factors[j] for m in self.members], dtype=np.complex128).reshape(len(self), n)
            for j, n in enumerate(self.space.dims)
        ]

    def gram(self) -> np.ndarray:
        """Matrix of ``<v_i, v_j>``."""
        G = np.ones((len(self), len(self)), dtype=np.complex128)
        for A in self.factor_matrices():
            G = G * (A @ A.conj().T)
        return G

    def prefix(self, k: int) -> "PureTuple":
        # Subtuples of a t-orthogonal tuple are t-orthogonal.
        return PureTuple(self.space, self.members[:k], self.certificate)

    def with_certificate(self, cert: Certificate | None) -> "PureTuple":
        return PureTuple(self.space, self.members, cert)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``T = sum_i coeff_i * v_i`` with pure ``v_i``.

    ``certificate`` (if any) applies to the tuple of normalized terms.
    """

    space: TensorSpace
    terms: tuple[tuple[complex, PureTensor], ...] = ()
    certificate: Certificate | None = None

    def __post_init__(self):
        terms = tuple((complex(c), v) for c, v in self.terms)
        for _, v in terms:
            if v.space != self.space:
                raise DimensionError(f"term space {v.dims} differs from {self.space.dims}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_terms(cls, coeffs, pures: Sequence[PureTensor], certificate=None, space=None) -> "Decomposition":
        pures = list(pures)
        if space is None:
            space = pures[0].space
        return cls(space, tuple(zip(coeffs, pures)), certificate)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=np.complex128)

    @property
    def pures(self) -> tuple[PureTensor, ...]:
        return tuple(v for _, v in self.terms)

    def term_tuple(self) -> PureTuple:
        """Tuple of the unit-normalized terms, carrying the certificate."""
        return PureTuple(self.space, tuple(v.normalized() for v in self.pures), self.certificate)


def assemble(dec: Decomposition) -> DenseTensor:
    """Dense sum of the terms; the empty decomposition gives the zero tensor."""
    dims = dec.space.dims
    if len(dec) == 0:
        return DenseTensor.zeros(dims)
    mats = PureTuple(dec.space, dec.pures).factor_matrices()
    mats[0] = dec.coeffs[:, None] * mats[0]
    letters = "abcdefghijklmnopqrstuvwxy"
    if len(dims) > len(letters):
        raise DimensionError("too many modes to assemble")
    subs = ",".join("z" + letters[j] for j in range(len(dims)))
    out = np.einsum(f"{subs}->{letters[:len(dims)]}", *mats, optimize=True)
    return DenseTensor(out)


def nuclear_cost(dec: Decomposition) -> float:
    """``sum_i |coeff_i| * ||v_i||``, an upper bound on the nuclear norm of ``assemble(dec)``."""
    return float(sum(abs(c) * v.length for c, v in dec.terms))


def _sort_key(coeff: float, v: PureTensor):
    first = v.factors[0]
    return (-float(f"{coeff:.{_SORT_DIGITS}g}"), tuple((float(z.real), float(z.imag)) for z in first))


def normalize(dec: Decomposition) -> Decomposition:
    """Put a decomposition in DSVD-candidate form.

    Each pure term is rescaled to unit factors, its length and the coefficient
    phase are folded into a real positive coefficient (the phase goes into the
    first factor), negligible terms are dropped, and the terms are sorted by
    nonincreasing coefficient. Terms with a zero factor are dropped with a
    ``UserWarning``.
    """
    staged = []
    for idx, (c, v) in enumerate(dec.terms):
        norms = v.factor_norms
        if np.any(norms == 0):
            warnings.warn(f"term {idx} has a zero factor and was dropped", stacklevel=2)
            continue
        mag = abs(c) * float(np.prod(norms))
        if mag == 0:
            continue
        phase = c / abs(c)
        unit = PureTensor(tuple(f / n for f, n in zip(v.factors, norms))).scaled_first(phase)
        staged.append((mag, unit))
    if staged:
        cmax = max(m for m, _ in staged)
        staged = [(m, v) for m, v in staged if m >= DROP_RTOL * cmax]
    staged.sort(key=lambda mv: _sort_key(*mv))
    return Decomposition(dec.space, tuple((complex(m), v) for m, v in staged), dec.certificate)


def horizontal_product(v: PureTuple, w: PureTuple) -> PureTuple:
    """``(v_1 ⊗ w_1, ..., v_r ⊗ w_r)`` in the space with concatenated modes.

    Certified degrees add.
    """
    if len(v) != len(w):
        raise ValueError(f"horizontal product needs equal lengths, got {len(v)} and {len(w)}")
    members = tuple(PureTensor(a.factors + b.factors) for a, b in zip(v, w))
    cert = None
    if v.certificate is not None and w.certificate is not None:
        cert = Certificate(
            v.certificate.t + w.certificate.t,
            f"horizontal({v.certificate.rule}; {w.certificate.rule})",
        )
    return PureTuple(v.space.horizontal(w.space), members, cert)


def vertical_product(v: PureTuple, w: PureTuple) -> PureTuple:
    """All ``v_i ⊠ w_j`` ordered lexicographically by ``(i, j)``; modes merge pairwise.

    The product of a t-orthogonal and a u-orthogonal tuple is min(t, u)-orthogonal.
    """
    if v.space.order != w.space.order:
        raise ValueError(
            f"vertical product needs equal mode counts, got {v.space.order} and {w.space.order}"
        )
    members = tuple(
        PureTensor(tuple(np.kron(fa, fb) for fa, fb in zip(a.factors, b.factors)))
        for a in v
        for b in w
    )
    cert = None
    if v.certificate is not None and w.certificate is not None:
        cert = Certificate(
            min(v.certificate.t, w.certificate.t),
            f"vertical({v.certificate.rule}; {w.certificate.rule})",
        )
    return PureTuple(v.space.vertical(w.space), members, cert)


def tuple_power(v: PureTuple, d: int) -> PureTuple:
    """``d``-fold horizontal product of ``v`` with itself."""
    if d < 1:
        raise ValueError("tuple power needs d >= 1")
    out = v
    for _ in range(d - 1):
        out = horizontal_product(out, v)
    return out


def apply_mode_unitary(v: PureTuple, mode: int, U: np.ndarray, atol: float = 1e-12) -> PureTuple:
    """Apply a unitary to one mode of every member.

    Local unitaries map unit pure tensors onto unit pure tensors, so the
    certificate is kept.
    """
    U = np.asarray(U, dtype=np.complex128)
    n = v.space.dims[mode]
    if U.shape != (n, n) or not np.allclose(U.conj().T @ U, np.eye(n), atol=atol):
        raise ValueError("apply_mode_unitary needs a unitary matching the mode dimension")
    members = tuple(
        PureTensor(tuple(U @ f if j == mode else f for j, f in enumerate(m.factors))) for m in v
    )
    return PureTuple(v.space, members, v.certificate)
