"""Shared test utilities."""

import numpy as np


def random_pc(rng: np.random.Generator, n: int, spread: float = 9.0) -> np.ndarray:
    """Arbitrary (generally inconsistent) reciprocal matrix with log-uniform entries."""
    a = np.ones((n, n))
    iu = np.triu_indices(n, 1)
    a[iu] = np.exp(rng.uniform(-np.log(spread), np.log(spread), size=iu[0].size))
    a[iu[1], iu[0]] = 1.0 / a[iu]
    return a
