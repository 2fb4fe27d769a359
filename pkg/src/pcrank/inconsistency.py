"""Koczkodaj triad index and Saaty consistency index."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import InvalidLambda
from .matrix import PCMatrix
from .prioritize import DEFAULT_MAX_ITER, DEFAULT_TOL, evm


@dataclass(frozen=True)
class InconsistencyReport:
    n: int
    ki: float
    kappa: float
    lambda_max: float
    ci: float

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=None)
def _triads(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Triples with a repeated index give q = 1 and never raise the max.
    idx = np.array(list(permutations(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    return idx[:, 0], idx[:, 1], idx[:, 2]


def koczkodaj_batch(stack: np.ndarray) -> np.ndarray:
    """KI for a batch of matrices ``(..., n, n)``; zero when ``n < 3``."""
    stack = np.asarray(stack, dtype=float)
    n = stack.shape[-1]
    if n < 3:
        return np.zeros(stack.shape[:-2])
    i, j, k = _triads(n)
    q = stack[..., i, j] / (stack[..., i, k] * stack[..., k, j])
    return (1.0 - np.minimum(q, 1.0 / q)).max(axis=-1)


def koczkodaj_ki(m: PCMatrix) -> float:
    """Worst triad deviation ``1 - min(q, 1/q)``, ``q = a_ij / (a_ik a_kj)``."""
    return float(koczkodaj_batch(m.entries))


def saaty_ci(lambda_max: float, n: int) -> float:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if lambda_max < n - 1e-6:
        raise InvalidLambda(f"lambda_max {lambda_max} is below n = {n}")
    return max(0.0, (lambda_max - n) / (n - 1))


def inconsistency_report(
    m: PCMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> InconsistencyReport:
    ki = koczkodaj_ki(m)
    lam = evm(m, tol, max_iter).lambda_max
    return InconsistencyReport(n=m.n, ki=ki, kappa=1.0 - ki, lambda_max=lam, ci=saaty_ci(lam, m.n))
