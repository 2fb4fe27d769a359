"""Pairwise comparison matrices: validation, construction and disturbance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    InvalidScale,
    NonPositiveEntry,
    NonPositiveWeight,
    NonSquare,
    ReciprocityViolation,
    TooSmall,
    UnitDiagonalViolation,
)

RECIPROCITY_TOL = 1e-12


@dataclass(frozen=True)
class ScaleBound:
    """Symmetric multiplicative range ``[lo, hi]`` with ``lo = 1/hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.hi) and self.hi >= 1.0 and self.lo > 0):
            raise InvalidScale(f"invalid scale bound [{self.lo}, {self.hi}]")
        if abs(self.lo * self.hi - 1.0) > 1e-12:
            raise InvalidScale(f"scale bound requires lo * hi = 1, got [{self.lo}, {self.hi}]")

    @classmethod
    def symmetric(cls, hi: float) -> "ScaleBound":
        return cls(1.0 / hi, float(hi))

    @classmethod
    def saaty(cls) -> "ScaleBound":
        """The 1/9 .. 9 fundamental scale."""
        return cls.symmetric(9.0)


class PCMatrix:
    """Validated, immutable positive reciprocal matrix.

    The full ``n x n`` grid is stored; ``entries`` is a read-only float array.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        _validate(a)
        a.setflags(write=False)
        self._a = a

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    def __getitem__(self, idx):
        return self._a[idx]

    def __eq__(self, other):
        if not isinstance(other, PCMatrix):
            return NotImplemented
        return np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(f"{x:.6g}" for x in row) + "]" for row in self._a)
        return f"PCMatrix([{rows}])"

    def tolist(self) -> list[list[float]]:
        return self._a.tolist()

    @classmethod
    def _trusted(cls, a: np.ndarray) -> "PCMatrix":
        # Skips validation; only for arrays reciprocal by construction.
        obj = cls.__new__(cls)
        a = np.array(a, dtype=float)
        a.setflags(write=False)
        obj._a = a
        return obj


def _validate(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square grid, got shape {a.shape}")
    n = a.shape[0]
    if n < 2:
        raise TooSmall(f"need at least 2 objects, got {n}")
    bad = ~(np.isfinite(a) & (a > 0))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise NonPositiveEntry(i, j, float(a[i, j]))
    diag = np.diag(a)
    off = np.flatnonzero(diag != 1.0)
    if off.size:
        i = int(off[0])
        raise UnitDiagonalViolation(i, float(diag[i]))
    prod = a * a.T
    viol = np.abs(prod - 1.0) > RECIPROCITY_TOL
    if viol.any():
        i, j = map(int, np.argwhere(np.triu(viol, 1))[0])
        raise ReciprocityViolation(i, j, float(prod[i, j]))


def new_pc_matrix(entries) -> PCMatrix:
    return PCMatrix(entries)


def from_weights(w: Sequence[float]) -> PCMatrix:
    """Consistent matrix with ``a_ij = w_i / w_j``."""
    w = np.asarray(w, dtype=float)
    for i, x in enumerate(w):
        if not (np.isfinite(x) and x > 0):
            raise NonPositiveWeight(i, float(x))
    if w.size < 2:
        raise TooSmall(f"need at least 2 weights, got {w.size}")
    a = w[:, None] / w[None, :]
    np.fill_diagonal(a, 1.0)
    return PCMatrix(a)


def random_consistent(n: int, seed: int, scale: ScaleBound | None = None) -> PCMatrix:
    """Consistent matrix built from hidden weights drawn log-uniformly on ``[1, scale.hi]``."""
    if n < 2:
        raise TooSmall(f"need at least 2 objects, got {n}")
    scale = scale or ScaleBound.saaty()
    rng = np.random.default_rng(seed)
    w = np.exp(rng.uniform(0.0, np.log(scale.hi), size=n))
    return from_weights(w / w.sum())


def disturbance_draws(n_pairs: int, beta: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-comparison factors ``alpha ~ U[1, beta]`` and multiply/divide bits.

    Draw order is fixed: all alphas first, then all direction bits.
    """
    if not beta >= 1.0:
        raise ValueError(f"beta must be >= 1, got {beta}")
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(1.0, beta, size=n_pairs)
    up = rng.random(n_pairs) < 0.5
    return alpha, up


def apply_disturbance(upper, lower, alpha, up, clamp: ScaleBound | None = None):
    """Scale upper-triangle values and rebuild their reciprocals.

    Works elementwise over any leading batch shape. Comparisons left unchanged
    keep their original reciprocal bit-for-bit.
    """
    new_upper = np.where(up, upper * alpha, upper / alpha)
    if clamp is not None:
        new_upper = np.clip(new_upper, clamp.lo, clamp.hi)
    new_lower = np.where(new_upper == upper, lower, 1.0 / new_upper)
    return new_upper, new_lower


def disturb(m: PCMatrix, beta: float, seed: int, clamp: ScaleBound | None = None) -> PCMatrix:
    n = m.n
    iu = np.triu_indices(n, 1)
    alpha, up = disturbance_draws(len(iu[0]), beta, seed)
    a = np.array(m.entries)
    new_upper, new_lower = apply_disturbance(a[iu], a.T[iu], alpha, up, clamp)
    a[iu] = new_upper
    a[iu[1], iu[0]] = new_lower
    return PCMatrix._trusted(a)


def is_consistent(m: PCMatrix, tol: float = 1e-9) -> bool:
    """True iff ``a_ij * a_jk / a_ik`` is within ``tol`` of 1 for every triple."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = m.entries
    ratio = a[:, :, None] * a[None, :, :] / a[:, None, :]
    return bool(np.all(np.abs(ratio - 1.0) <= tol))
