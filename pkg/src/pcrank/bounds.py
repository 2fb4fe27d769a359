"""Distance bounds between EV and GM priorities and rank-stability certificates.

With ``kappa = 1 - KI`` the Manhattan distance between the two priority
vectors is at most ``K = 1/kappa**2 - 1``. Comparing ``K`` against the gaps in
the EV weights certifies that the two rankings agree (all positions, or just
the winner), and otherwise bounds how far Kendall's tau and Spearman's rho can
fall.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateGap, InvalidKI, KOutOfRange, TiesPresent
from .inconsistency import koczkodaj_ki
from .matrix import PCMatrix
from .prioritize import DEFAULT_MAX_ITER, DEFAULT_TOL, PriorityVector, evm
from .rankstats import TIE_TOL, _as_weights


@dataclass(frozen=True)
class StabilityCertificate:
    n: int
    ki: float
    kappa: float
    K: float
    md_lower: float
    d: float
    d_star: float | None
    k: int
    prop1_holds: bool
    prop2_holds: bool | None
    tau_lower: float
    rho_lower: float

    def to_dict(self) -> dict:
        return asdict(self)


def _kappa(ki: float) -> float:
    if not (0.0 <= ki < 1.0):
        raise InvalidKI(f"KI must lie in [0, 1), got {ki}")
    return 1.0 - ki


def md_bounds(ki: float) -> tuple[float, float]:
    """``(kappa**2 - 1, 1/kappa**2 - 1)``; the lower end is never positive."""
    kappa = _kappa(ki)
    return kappa * kappa - 1.0, 1.0 / (kappa * kappa) - 1.0


def distance_budget(ki: float) -> float:
    return md_bounds(ki)[1]


def weight_gaps(w) -> tuple[float, float]:
    """Smallest adjacent gap and top-two gap of the weights sorted descending."""
    w = _as_weights(w)
    if w.shape[0] < 2:
        raise ValueError("need at least 2 weights")
    gaps = -np.diff(np.sort(w)[::-1])
    if np.any(gaps <= TIE_TOL):
        raise TiesPresent("weights contain ties; gaps are degenerate")
    return float(gaps.min()), float(gaps[0])


def prop1_certify(w_ev, ki: float) -> bool:
    """True when the smallest EV gap exceeds the distance budget (full ranking agrees)."""
    d, _ = weight_gaps(w_ev)
    return d > distance_budget(ki)


def prop2_certify(w_ev, ki: float) -> bool:
    """True when the top EV gap exceeds the distance budget (same winner)."""
    _, d_star = weight_gaps(w_ev)
    return d_star > distance_budget(ki)


def max_pairs(n: int) -> int:
    return n * (n - 1) // 2


def find_k(d: float, K: float, n: int) -> int:
    """Largest ``k`` with ``k*d < K`` (strict), capped at ``C(n, 2)``."""
    if not d > 0:
        raise DegenerateGap(f"gap must be positive, got {d}")
    if K < 0:
        raise ValueError(f"K must be non-negative, got {K}")
    cap = max_pairs(n)
    if K == 0:
        return 0
    ratio = K / d
    if ratio > cap + 1:
        return cap
    k = max(0, min(cap, math.ceil(ratio) - 1))
    # Settle rounding in ratio against the literal inequalities.
    while k < cap and (k + 1) * d < K:
        k += 1
    while k > 0 and k * d >= K:
        k -= 1
    return k


def _check_k(n: int, k: int) -> None:
    if not 0 <= k <= max_pairs(n):
        raise KOutOfRange(f"k = {k} outside [0, {max_pairs(n)}] for n = {n}")


def tau_lower_bound(n: int, k: int) -> float:
    _check_k(n, k)
    c = max_pairs(n)
    return float(Fraction(c - 2 * k, c))


def rho_lower_bound(n: int, k: int) -> float:
    _check_k(n, k)
    return float(1 - Fraction(6 * (k * k + k), n * (n * n - 1)))


def max_feasible_gap(n: int) -> float:
    """Supremum of the smallest adjacent gap over positive sum-1 weights: ``2/(n(n-1))``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return float(Fraction(2, n * (n - 1)))


def certificate_from_gaps(n: int, ki: float, d: float, d_star: float | None = None) -> StabilityCertificate:
    """Certificate from raw scalars, for when only KI and the gaps are known."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if d_star is not None and d_star < d:
        raise ValueError(f"d_star ({d_star}) cannot be smaller than d ({d})")
    kappa = _kappa(ki)
    lower, K = md_bounds(ki)
    prop1 = d > K
    k = find_k(d, K, n)
    if not prop1 and k == 0:
        # d == K exactly: no k satisfies both strict inequalities; allow one swap.
        k = 1
    return StabilityCertificate(
        n=n,
        ki=ki,
        kappa=kappa,
        K=K,
        md_lower=lower,
        d=d,
        d_star=d_star,
        k=k,
        prop1_holds=prop1,
        prop2_holds=None if d_star is None else d_star > K,
        tau_lower=tau_lower_bound(n, k),
        rho_lower=rho_lower_bound(n, k),
    )


def certificate_from_weights(w_ev, ki: float) -> StabilityCertificate:
    w = _as_weights(w_ev)
    d, d_star = weight_gaps(w)
    return certificate_from_gaps(w.shape[0], ki, d, d_star)


def full_certificate(
    m: PCMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> StabilityCertificate:
    w: PriorityVector = evm(m, tol, max_iter)
    return certificate_from_weights(w, koczkodaj_ki(m))
