"""Monte Carlo study of how often the rank-stability condition holds.

Consistent base matrices are disturbed at a sweep of intensities ``beta``;
every disturbed matrix is prioritized by both methods, certified, and compared
against the measured EV/GM rankings. All randomness is derived from
``(master_seed, base index, beta index)``, and work is split per base matrix,
so results do not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .bounds import certificate_from_gaps
from .inconsistency import koczkodaj_batch
from .matrix import ScaleBound, apply_disturbance, disturbance_draws, random_consistent
from .prioritize import DEFAULT_MAX_ITER, DEFAULT_TOL, geometric_means, power_iteration
from .rankstats import kendall_batch, ranks_batch, spearman_batch

log = logging.getLogger(__name__)

THEOREM1_SLACK = 1e-8
BOUND_SLACK = 1e-12
HISTOGRAM_HEADER = ("bin_low", "bin_high", "met", "unmet_identical", "not_identical")


@dataclass(frozen=True)
class McConfig:
    n: int = 3
    base_count: int = 250
    beta_start: float = 1.0
    beta_step: float = 0.02
    beta_end: float = 30.0
    master_seed: int = 20_231_001
    clamp: ScaleBound | None = None
    base_scale: float = 9.0
    ki_bins: int = 50
    ci_bins: int = 50
    ci_range: tuple[float, float] | None = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.base_count < 1:
            raise ValueError("base_count must be >= 1")
        if not self.beta_start >= 1.0:
            raise ValueError("beta_start must be >= 1")
        if not self.beta_step > 0:
            raise ValueError("beta_step must be positive")
        if not self.beta_end >= self.beta_start:
            raise ValueError("beta_end must be >= beta_start")
        if self.ki_bins < 1 or self.ci_bins < 1:
            raise ValueError("bin counts must be >= 1")
        if self.ci_range is not None and not self.ci_range[1] > self.ci_range[0]:
            raise ValueError("ci_range must be an increasing pair")

    def betas(self) -> np.ndarray:
        count = int(math.floor((self.beta_end - self.beta_start) / self.beta_step + 1e-9)) + 1
        return self.beta_start + self.beta_step * np.arange(count)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["clamp"] = None if self.clamp is None else [self.clamp.lo, self.clamp.hi]
        d["ci_range"] = None if self.ci_range is None else list(self.ci_range)
        return d


def _seed(master_seed: int, *key: int) -> int:
    lo, hi = np.random.SeedSequence(master_seed, spawn_key=key).generate_state(2, np.uint32)
    return int(lo) | (int(hi) << 32)


def base_seed(master_seed: int, base: int) -> int:
    return _seed(master_seed, 0, base)


def trial_seed(master_seed: int, base: int, beta_index: int) -> int:
    return _seed(master_seed, 1, base, beta_index)


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    base: int
    beta: float
    ki: float
    ci: float
    d: float
    d_star: float
    K: float
    k: int
    prop1_holds: bool
    prop2_holds: bool
    rankings_identical: bool
    top1_identical: bool
    md: float
    tau: float
    rho: float
    tau_lower: float
    rho_lower: float
    tie_flag: bool


TRIAL_FIELDS = tuple(TrialRecord.__dataclass_fields__)


def run_base(cfg: McConfig, base: int) -> dict[str, np.ndarray]:
    """All beta trials for one base matrix, as columns keyed like :class:`TrialRecord`."""
    n = cfg.n
    betas = cfg.betas()
    t = betas.size
    a0 = random_consistent(n, base_seed(cfg.master_seed, base), ScaleBound.symmetric(cfg.base_scale)).entries
    iu = np.triu_indices(n, 1)
    pairs = iu[0].size

    alpha = np.empty((t, pairs))
    up = np.empty((t, pairs), dtype=bool)
    for j, beta in enumerate(betas):
        alpha[j], up[j] = disturbance_draws(pairs, float(beta), trial_seed(cfg.master_seed, base, j))
    upper, lower = apply_disturbance(a0[iu], a0.T[iu], alpha, up, cfg.clamp)
    stack = np.broadcast_to(a0, (t, n, n)).copy()
    stack[:, iu[0], iu[1]] = upper
    stack[:, iu[1], iu[0]] = lower

    w_ev, lam, _, converged = power_iteration(stack, cfg.tol, cfg.max_iter)
    w_gm = geometric_means(stack)
    ki = koczkodaj_batch(stack)
    ci = np.maximum(0.0, (lam - n) / (n - 1))

    order_ev, rank_ev, tie_ev = ranks_batch(w_ev)
    order_gm, rank_gm, tie_gm = ranks_batch(w_gm)
    tie = tie_ev | tie_gm
    gaps = -np.diff(np.take_along_axis(w_ev, order_ev, axis=-1), axis=-1)

    d = gaps.min(axis=-1)
    d_star = gaps[:, 0]
    kappa = 1.0 - ki
    K = 1.0 / (kappa * kappa) - 1.0
    k = np.full(t, -1, dtype=np.int64)
    tau_lower = np.full(t, np.nan)
    rho_lower = np.full(t, np.nan)
    prop1 = np.zeros(t, dtype=bool)
    prop2 = np.zeros(t, dtype=bool)
    for i in np.flatnonzero(~tie_ev):
        cert = certificate_from_gaps(n, float(ki[i]), float(d[i]), float(d_star[i]))
        k[i] = cert.k
        tau_lower[i], rho_lower[i] = cert.tau_lower, cert.rho_lower
        prop1[i] = cert.prop1_holds and not tie[i]
        prop2[i] = cert.prop2_holds and not tie[i]

    tau = np.where(tie, np.nan, kendall_batch(rank_ev, rank_gm))
    rho = np.where(tie, np.nan, spearman_batch(rank_ev, rank_gm))

    cols = {
        "trial_id": base * t + np.arange(t),
        "base": np.full(t, base),
        "beta": betas,
        "ki": ki,
        "ci": ci,
        "d": d,
        "d_star": d_star,
        "K": K,
        "k": k,
        "prop1_holds": prop1,
        "prop2_holds": prop2,
        "rankings_identical": np.all(order_ev == order_gm, axis=-1),
        "top1_identical": order_ev[:, 0] == order_gm[:, 0],
        "md": np.abs(w_ev - w_gm).sum(axis=-1),
        "tau": tau,
        "rho": rho,
        "tau_lower": tau_lower,
        "rho_lower": rho_lower,
        "tie_flag": tie,
    }
    if not converged.all():
        bad = np.flatnonzero(~converged)
        log.warning("base %d: %d trials did not converge and are excluded", base, bad.size)
    cols = {key: v[converged] for key, v in cols.items()}
    cols["_failed"] = np.array([int((~converged).sum())])
    return cols


def _run_base_star(args):
    return run_base(*args)


@dataclass
class Histogram:
    edges: list[float]
    met: list[int]
    unmet_identical: list[int]
    not_identical: list[int]

    def rows(self) -> Iterator[tuple]:
        for i in range(len(self.met)):
            yield self.edges[i], self.edges[i + 1], self.met[i], self.unmet_identical[i], self.not_identical[i]


@dataclass
class McResult:
    config: McConfig
    total_trials: int
    trials_meeting_condition: int
    fraction_meeting: float
    tied_trial_count: int
    failed_trial_count: int
    rankings_identical_count: int
    histograms: dict[str, Histogram]
    checks: dict[str, int]
    mean_ki_by_beta: list[float | None]
    trials: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    def records(self) -> Iterator[TrialRecord]:
        cols = [self.trials[f].tolist() for f in TRIAL_FIELDS]
        for row in zip(*cols):
            yield TrialRecord(*row)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "total_trials": self.total_trials,
            "trials_meeting_condition": self.trials_meeting_condition,
            "fraction_meeting": self.fraction_meeting,
            "tied_trial_count": self.tied_trial_count,
            "failed_trial_count": self.failed_trial_count,
            "rankings_identical_count": self.rankings_identical_count,
            "histograms": {axis: asdict(h) for axis, h in self.histograms.items()},
            "checks": self.checks,
            "mean_ki_by_beta": self.mean_ki_by_beta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _histogram(values, met, identical, edges) -> Histogram:
    counts = [np.histogram(values[mask], bins=edges)[0] for mask in (met, ~met & identical, ~identical)]
    return Histogram(
        edges=[float(e) for e in edges],
        met=[int(c) for c in counts[0]],
        unmet_identical=[int(c) for c in counts[1]],
        not_identical=[int(c) for c in counts[2]],
    )


def _aggregate(cfg: McConfig, parts: list[dict[str, np.ndarray]]) -> McResult:
    failed = sum(int(p.pop("_failed")[0]) for p in parts)
    trials = {f: np.concatenate([p[f] for p in parts]) for f in TRIAL_FIELDS}
    n_rec = trials["trial_id"].size
    total = n_rec + failed

    tie = trials["tie_flag"]
    ok = ~tie
    met = trials["prop1_holds"]
    identical = trials["rankings_identical"]
    top1 = trials["top1_identical"]

    ki_edges = np.linspace(0.0, 1.0, cfg.ki_bins + 1)
    if cfg.ci_range is not None:
        ci_edges = np.linspace(cfg.ci_range[0], cfg.ci_range[1], cfg.ci_bins + 1)
    else:
        hi = float(trials["ci"][ok].max()) if ok.any() else 0.0
        ci_edges = np.linspace(0.0, hi if hi > 0 else 1.0, cfg.ci_bins + 1)
    histograms = {
        "ki": _histogram(trials["ki"][ok], met[ok], identical[ok], ki_edges),
        "ci": _histogram(trials["ci"][ok], met[ok], identical[ok], ci_edges),
    }

    checks = {
        "prop1_counterexamples": int(np.sum(met & ~identical)),
        "prop2_counterexamples": int(np.sum(trials["prop2_holds"] & ~top1)),
        "theorem1_violations": int(np.sum(trials["md"] > trials["K"] + THEOREM1_SLACK)),
        "tau_violations": int(np.sum(ok & (trials["tau"] < trials["tau_lower"] - BOUND_SLACK))),
        "rho_violations": int(np.sum(ok & (trials["rho"] < trials["rho_lower"] - BOUND_SLACK))),
    }
    for name, count in checks.items():
        if count:
            log.warning("%s: %d", name, count)

    n_betas = cfg.betas().size
    beta_idx = trials["trial_id"] % n_betas
    ki_sum = np.bincount(beta_idx, weights=trials["ki"], minlength=n_betas)
    ki_cnt = np.bincount(beta_idx, minlength=n_betas)
    mean_ki = [float(s / c) if c else None for s, c in zip(ki_sum, ki_cnt)]

    meeting = int(np.sum(met))
    return McResult(
        config=cfg,
        total_trials=total,
        trials_meeting_condition=meeting,
        fraction_meeting=meeting / total if total else 0.0,
        tied_trial_count=int(np.sum(tie)),
        failed_trial_count=failed,
        rankings_identical_count=int(np.sum(identical & ok)),
        histograms=histograms,
        checks=checks,
        mean_ki_by_beta=mean_ki,
        trials=trials,
    )


def run_experiment(cfg: McConfig, workers: int = 1) -> McResult:
    """Run every (base, beta) trial and aggregate. ``workers > 1`` uses processes."""
    jobs = [(cfg, b) for b in range(cfg.base_count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_base_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        parts = [run_base(*job) for job in jobs]
    return _aggregate(cfg, parts)


def histogram_csv(result: McResult, axis: str) -> str:
    """Histogram for ``axis`` ('ki' or 'ci') as CSV text."""
    axis = axis.lower()
    if axis not in ("ki", "ci"):
        raise ValueError(f"axis must be 'ki' or 'ci', got {axis!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HISTOGRAM_HEADER)
    hist = result.histograms.get(axis)
    counted = result.total_trials - result.tied_trial_count - result.failed_trial_count
    if hist is not None and counted > 0:
        for lo, hi, *counts in hist.rows():
            writer.writerow([repr(lo), repr(hi), *counts])
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_trials_csv(result: McResult, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRIAL_FIELDS)
    cols = [result.trials[f].tolist() for f in TRIAL_FIELDS]
    for row in zip(*cols):
        writer.writerow([_fmt(v) for v in row])


def write_outputs(result: McResult, out_dir) -> dict[str, str]:
    """Write result JSON, trial CSV and both histogram CSVs; return their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "result": out / "result.json",
        "trials": out / "trials.csv",
        "hist_ki": out / "histogram_ki.csv",
        "hist_ci": out / "histogram_ci.csv",
    }
    paths["result"].write_text(result.to_json())
    with open(paths["trials"], "w", newline="") as fh:
        write_trials_csv(result, fh)
    paths["hist_ki"].write_text(histogram_csv(result, "ki"))
    paths["hist_ci"].write_text(histogram_csv(result, "ci"))
    return {k: str(v) for k, v in paths.items()}
