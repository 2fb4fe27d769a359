"""Ordinal rankings, Kendall's tau, Spearman's rho and Manhattan distance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LengthMismatch, TiesPresent
from .prioritize import PriorityVector

TIE_TOL = 1e-12


@dataclass(frozen=True)
class OrdinalRanking:
    """``order[p]`` is the object at position ``p`` (0 = best); ``rank_of`` is 1-based."""

    order: tuple[int, ...]
    rank_of: tuple[int, ...]
    tied: bool = False

    @property
    def n(self) -> int:
        return len(self.order)

    @classmethod
    def from_order(cls, order, tied: bool = False) -> "OrdinalRanking":
        order = tuple(int(x) for x in order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"order {order} is not a permutation")
        rank_of = [0] * len(order)
        for pos, obj in enumerate(order):
            rank_of[obj] = pos + 1
        return cls(order, tuple(rank_of), tied)


def _as_weights(w) -> np.ndarray:
    if isinstance(w, PriorityVector):
        return w.weights
    return np.asarray(w, dtype=float)


def ordinal_ranking(w) -> OrdinalRanking:
    """Sort objects by weight, best first; equal weights keep index order."""
    w = _as_weights(w)
    order = np.argsort(-w, kind="stable")
    gaps = -np.diff(w[order])
    return OrdinalRanking.from_order(order, tied=bool(np.any(gaps <= TIE_TOL)))


def _check_pair(x: OrdinalRanking, y: OrdinalRanking) -> None:
    if x.n != y.n:
        raise LengthMismatch(f"rankings have {x.n} and {y.n} objects")
    if x.tied or y.tied:
        raise TiesPresent("rank correlation is defined only for rankings without ties")


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def kendall_tau(x: OrdinalRanking, y: OrdinalRanking) -> float:
    _check_pair(x, y)
    n = x.n
    if n < 2:
        return 1.0
    rx, ry = x.rank_of, y.rank_of
    s = sum(
        _sign(rx[i] - rx[j]) * _sign(ry[i] - ry[j])
        for i in range(n)
        for j in range(i + 1, n)
    )
    return float(Fraction(2 * s, n * (n - 1)))


def spearman_rho(x: OrdinalRanking, y: OrdinalRanking) -> float:
    _check_pair(x, y)
    n = x.n
    if n < 2:
        return 1.0
    d2 = sum((a - b) ** 2 for a, b in zip(x.rank_of, y.rank_of))
    den = n * (n * n - 1)
    return float(Fraction(den - 6 * d2, den))


def manhattan_distance(u, v) -> float:
    u, v = _as_weights(u), _as_weights(v)
    if u.shape != v.shape:
        raise LengthMismatch(f"vectors have lengths {u.shape[0]} and {v.shape[0]}")
    return float(np.abs(u - v).sum())


# Batched forms used by the Monte Carlo driver. They take integer rank arrays
# of shape (T, n) and reproduce the scalar functions bit-for-bit.

def ranks_batch(w: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(order, rank_of, tied)`` for a batch of weight rows."""
    order = np.argsort(-w, axis=-1, kind="stable")
    sorted_w = np.take_along_axis(w, order, axis=-1)
    tied = np.any(-np.diff(sorted_w, axis=-1) <= TIE_TOL, axis=-1)
    rank_of = np.empty_like(order)
    np.put_along_axis(rank_of, order, np.arange(1, w.shape[-1] + 1), axis=-1)
    return order, rank_of, tied


def kendall_batch(rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
    n = rx.shape[-1]
    i, j = np.triu_indices(n, 1)
    s = (np.sign(rx[:, i] - rx[:, j]) * np.sign(ry[:, i] - ry[:, j])).sum(axis=-1)
    return (2 * s) / (n * (n - 1))


def spearman_batch(rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
    n = rx.shape[-1]
    d2 = ((rx - ry) ** 2).sum(axis=-1)
    den = n * (n * n - 1)
    return (den - 6 * d2) / den
