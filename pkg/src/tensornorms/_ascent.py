"""Multi-start ascent for ``max_u sum_i |<S_i, u>|**alpha`` over unit pure tensors ``u``.

All restarts are advanced together as one batch; every restart only ever sees
its own start vector, so the outcome does not depend on batching.

* One member, any ``alpha``: the objective is a monotone function of
  ``|<S, u>|`` and each mode update is solved in closed form (higher-order
  power iteration).
* ``alpha >= 1``: the objective is convex and ``alpha``-homogeneous in each
  mode, so stepping a mode to its normalized gradient never decreases it.
* ``alpha < 1``: projected gradient ascent on the product of spheres with an
  Armijo backtracking line search on a smoothed objective.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DenseTensor, unfold
from .decomposition import PureTensor

_LETTERS = "abcdefghijklmnopqrstuvw"


@dataclass(frozen=True)
class OptimizerSettings:
    seed: int = 42
    restarts: int = 64
    max_iters: int = 10_000
    tol: float = 1e-12
    smoothing: float = 1e-8
    polish: bool = True

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "smoothing": self.smoothing,
            "polish": self.polish,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerSettings":
        known = {k: d[k] for k in cls().to_dict() if k in d}
        return cls(**known)


class _PureMembers:
    def __init__(self, members: Sequence[PureTensor]):
        d = len(members[0].factors)
        self.mats = [np.array([m.factors[j] for m in members]) for j in range(d)]
        self.dims = [A.shape[1] for A in self.mats]

    def _proj(self, U):
        return [u @ A.conj().T for u, A in zip(U, self.mats)]

    def values(self, U):
        P = self._proj(U)
        z = P[0]
        for p in P[1:]:
            z = z * p
        return z

    def mode_grad(self, U, m, weight):
        P = self._proj(U)
        Q = np.ones_like(P[0])
        for j, p in enumerate(P):
            if j != m:
                Q = Q * p
        z = P[m] * Q
        c = weight(z)
        return (c * Q.conj()) @ self.mats[m], z


class _DenseMembers:
    def __init__(self, members: Sequence[DenseTensor]):
        self.stack = np.stack([m.data for m in members])
        self.dims = list(members[0].dims)
        d = len(self.dims)
        letters = _LETTERS[:d]
        self._field_subs = []
        for m in range(d):
            others = ",".join("y" + letters[j] for j in range(d) if j != m)
            lhs = "z" + letters + ("," + others if others else "")
            self._field_subs.append(f"{lhs}->yz{letters[m]}")
        self._value_subs = "z" + letters + "," + ",".join("y" + ch for ch in letters) + "->yz"
        self._conj = self.stack.conj()
        self._paths = {}

    def _einsum(self, subs, *ops):
        key = (subs, ops[-1].shape[0])
        if key not in self._paths:
            self._paths[key] = np.einsum_path(subs, *ops, optimize="greedy")[0]
        return np.einsum(subs, *ops, optimize=self._paths[key])

    def values(self, U):
        return self._einsum(self._value_subs, self._conj, *U)

    def field(self, U, m):
        others = [u for j, u in enumerate(U) if j != m]
        if not others:
            B = U[0].shape[0]
            return np.broadcast_to(self._conj, (B,) + self._conj.shape)
        return self._einsum(self._field_subs[m], self._conj, *others)

    def mode_grad(self, U, m, weight):
        G = self.field(U, m)
        z = np.einsum("brk,bk->br", G, U[m])
        c = weight(z)
        return np.einsum("br,brk->bk", c, G.conj()), z


def _normalize_rows(X):
    n = np.linalg.norm(X, axis=1, keepdims=True)
    return np.where(n > 0, X / np.where(n > 0, n, 1), X), n[:, 0]


def _phase(z):
    a = np.abs(z)
    return np.where(a > 0, z / np.where(a > 0, a, 1), 0)


def _start_points(members, dims, settings: OptimizerSettings, extra_starts=()):
    starts = []
    for mem in members:
        if isinstance(mem, PureTensor):
            norms = mem.factor_norms
            if np.all(norms > 0):
                starts.append([f / n for f, n in zip(mem.factors, norms)])
        else:
            if np.any(mem.data != 0):
                # Rank-one truncated HOSVD.
                starts.append([np.linalg.svd(unfold(mem, j), full_matrices=False)[0][:, 0].conj()
                               for j in range(len(dims))])
    starts.append([np.full(n, 1 / np.sqrt(n), dtype=np.complex128) for n in dims])
    for s in extra_starts:
        starts.append([np.asarray(f, dtype=np.complex128) / np.linalg.norm(f) for f in s])
    for k in range(settings.restarts):
        rng = np.random.default_rng([settings.seed, k])
        starts.append([_random_unit(rng, n) for n in dims])
    return [np.array([s[j] for s in starts]) for j in range(len(dims))]


def _random_unit(rng, n):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


def _objective(z, alpha):
    return np.sum(np.abs(z) ** alpha, axis=1)


@dataclass
class AscentResult:
    value: float
    factors: list[np.ndarray]
    starts: int
    iterations: int


def maximize(members, alpha: float, settings: OptimizerSettings | None = None, extra_starts=()) -> AscentResult:
    """Best value of ``(sum_i |<S_i, u>|**alpha)**(1/alpha)`` found from all starts."""
    settings = settings or OptimizerSettings()
    members = list(members)
    if all(isinstance(m, PureTensor) for m in members):
        engine = _PureMembers(members)
    else:
        engine = _DenseMembers([m.to_dense() if isinstance(m, PureTensor) else m for m in members])
    dims = engine.dims
    U = _start_points(members, dims, settings, extra_starts)
    single = len(members) == 1
    a_eff = 2.0 if single else float(alpha)
    if a_eff >= 1:
        U, iters = _block_ascent(engine, U, a_eff, settings)
    else:
        U, iters = _projected_ascent(engine, U, a_eff, settings)
    f = _objective(engine.values(U), a_eff)
    best = int(np.argmax(f))
    Ub = [u[best : best + 1].copy() for u in U]
    if settings.polish:
        if a_eff >= 1:
            Ub = _polish(engine, Ub, a_eff, settings)
        else:
            Ub, _ = _projected_ascent(engine, Ub, a_eff, settings, tol=0.0)
    z = engine.values(Ub)[0]
    value = float(np.sum(np.abs(z) ** alpha) ** (1.0 / alpha))
    return AscentResult(value, [u[0] for u in Ub], U[0].shape[0], iters)


def _block_weight(alpha):
    if alpha == 2.0:
        return lambda z: z
    return lambda z: np.abs(z) ** (alpha - 1) * _phase(z)


def _sweep(engine, U, weight):
    for m in range(len(U)):
        g, _ = engine.mode_grad(U, m, weight)
        new, n = _normalize_rows(g)
        U[m] = np.where((n > 0)[:, None], new, U[m])
    return U


def _block_ascent(engine, U, alpha, settings):
    weight = _block_weight(alpha)
    U = [u.copy() for u in U]
    f = _objective(engine.values(U), alpha)
    active = np.arange(U[0].shape[0])
    it = 0
    while active.size and it < settings.max_iters:
        it += 1
        sub = _sweep(engine, [u[active] for u in U], weight)
        f_new = _objective(engine.values(sub), alpha)
        for j in range(len(U)):
            U[j][active] = sub[j]
        gain = (f_new - f[active]) / np.maximum(f[active], 1e-300)
        f[active] = f_new
        active = active[gain >= settings.tol]
    return U, it


_POLISH_MOVE = 1e-14
_POLISH_SWEEPS = 2000


def _polish(engine, U, alpha, settings):
    # Iterate the winner until its factors stop moving (up to phase).
    weight = _block_weight(alpha)
    stall = 0
    for _ in range(min(settings.max_iters, _POLISH_SWEEPS)):
        old = [u.copy() for u in U]
        U = _sweep(engine, U, weight)
        # Phase-aligned distance; 1 - |<o, u>| is quadratic in the angle and stalls too early.
        move = max(np.linalg.norm(u[0] - _phase(np.vdot(u[0], o[0])).conj() * o[0]) for o, u in zip(old, U))
        if move <= _POLISH_MOVE:
            stall += 1
            if stall >= 3:
                break
        else:
            stall = 0
    return U


def _projected_ascent(engine, U, alpha, settings, tol=None):
    tol = settings.tol if tol is None else tol
    eps2 = settings.smoothing ** 2
    weight = lambda z: alpha * (np.abs(z) ** 2 + eps2) ** (alpha / 2 - 1) * z

    def smooth(z):
        return np.sum((np.abs(z) ** 2 + eps2) ** (alpha / 2), axis=1)

    U = [u.copy() for u in U]
    B = U[0].shape[0]
    f = smooth(engine.values(U))
    step = np.ones(B)
    best_exact = _objective(engine.values(U), alpha)
    best_U = [u.copy() for u in U]
    active = np.arange(B)
    it = 0
    while active.size and it < settings.max_iters:
        it += 1
        sub = [u[active] for u in U]
        grads = []
        for m in range(len(sub)):
            g, _ = engine.mode_grad(sub, m, weight)
            radial = np.real(np.sum(sub[m].conj() * g, axis=1))
            grads.append(g - radial[:, None] * sub[m])
        gnorm2 = sum(np.sum(np.abs(g) ** 2, axis=1) for g in grads)
        s = np.minimum(step[active] * 2, 1e3)
        accepted = np.zeros(active.size, bool)
        cand_U = [u.copy() for u in sub]
        f_cand = f[active].copy()
        for _ in range(60):
            todo = ~accepted
            if not todo.any():
                break
            trial = [_normalize_rows(u[todo] + s[todo, None] * g[todo])[0] for u, g in zip(sub, grads)]
            ft = smooth(engine.values(trial))
            ok = ft >= f[active][todo] + 1e-4 * s[todo] * gnorm2[todo]
            idx = np.flatnonzero(todo)
            for j in range(len(sub)):
                cand_U[j][idx[ok]] = trial[j][ok]
            f_cand[idx[ok]] = ft[ok]
            accepted[idx[ok]] = True
            s[idx[~ok]] *= 0.5
        gain = (f_cand - f[active]) / np.maximum(f[active], 1e-300)
        for j in range(len(U)):
            U[j][active] = cand_U[j]
        f[active] = f_cand
        step[active] = s
        exact = _objective(engine.values([u[active] for u in U]), alpha)
        improved = exact > best_exact[active]
        for j in range(len(U)):
            best_U[j][active[improved]] = U[j][active[improved]]
        best_exact[active[improved]] = exact[improved]
        keep = accepted & (gain > tol) & (gnorm2 > 1e-30)
        active = active[keep]
    return best_U, it
