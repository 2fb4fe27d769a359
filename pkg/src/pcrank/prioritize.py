"""Priority vectors by the eigenvalue (EV) and geometric mean (GM) methods."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence
from .matrix import PCMatrix

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


class Method(str, enum.Enum):
    EV = "EV"
    GM = "GM"


@dataclass(frozen=True)
class PriorityVector:
    weights: np.ndarray
    method: Method
    lambda_max: float | None = None
    iterations: int | None = field(default=None, compare=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "method", Method(self.method))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __len__(self):
        return self.n

    def tolist(self) -> list[float]:
        return self.weights.tolist()


def power_iteration(stack: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Principal eigenpairs for a batch of positive matrices, shape ``(T, n, n)``.

    Starts from the uniform vector and keeps the iterate on the simplex. Each
    matrix stops updating as soon as its own L1 step drops below ``tol``, so a
    result never depends on which other matrices share the batch.

    Returns ``(weights, lambda_max, iterations, converged)``.
    """
    stack = np.asarray(stack, dtype=float)
    t, n, _ = stack.shape
    w = np.full((t, n), 1.0 / n)
    iters = np.zeros(t, dtype=np.int64)
    converged = np.zeros(t, dtype=bool)
    active = np.arange(t)
    for step in range(1, max_iter + 1):
        if active.size == 0:
            break
        cur = w[active]
        nxt = (stack[active] * cur[:, None, :]).sum(axis=-1)
        nxt /= nxt.sum(axis=-1, keepdims=True)
        change = np.abs(nxt - cur).sum(axis=-1)
        w[active] = nxt
        iters[active] = step
        done = change < tol
        converged[active[done]] = True
        active = active[~done]
    aw = (stack * w[:, None, :]).sum(axis=-1)
    lam = (aw / w).mean(axis=-1)
    return w, lam, iters, converged


def evm(m: PCMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> PriorityVector:
    """Eigenvalue-method priorities, normalized to sum 1.

    ``lambda_max`` is the mean of ``(A w)_i / w_i`` at the converged iterate.
    Raises :class:`NoConvergence` when the L1 step stays above ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    w, lam, iters, ok = power_iteration(m.entries[None], tol, max_iter)
    if not ok[0]:
        raise NoConvergence(int(iters[0]))
    return PriorityVector(w[0], Method.EV, float(lam[0]), int(iters[0]))


def geometric_means(stack: np.ndarray) -> np.ndarray:
    """Row geometric means normalized to sum 1, computed in log space.

    Accepts one matrix or any batch ``(..., n, n)``.
    """
    logs = np.log(np.asarray(stack, dtype=float)).mean(axis=-1)
    logs -= logs.max(axis=-1, keepdims=True)
    g = np.exp(logs)
    return g / g.sum(axis=-1, keepdims=True)


def gmm(m: PCMatrix) -> PriorityVector:
    return PriorityVector(geometric_means(m.entries), Method.GM)
