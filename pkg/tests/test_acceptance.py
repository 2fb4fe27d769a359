"""Exit criteria for the package; one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected into the terminal summary.
"""

import itertools
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from pcrank import (
    OrdinalRanking,
    PCMatrix,
    certificate_from_gaps,
    certificate_from_weights,
    disturb,
    evm,
    gmm,
    kendall_tau,
    koczkodaj_ki,
    max_feasible_gap,
    random_consistent,
    spearman_rho,
)
from pcrank.montecarlo import McConfig, run_experiment, write_outputs

from helpers import random_pc

PAPER_TRIALS = 250 * 1451


@contextmanager
def criterion(label):
    try:
        yield
    except BaseException:
        line = f"[FAIL] {label}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"[PASS] {label}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def test_ac01_three_object_certificate():
    with criterion("AC1  w=(0.6,0.3,0.1), KI=0.03: K=0.062, d*=0.30, d=0.20, both certificates hold"):
        c = certificate_from_weights((0.60, 0.30, 0.10), 0.03)
        assert c.K == pytest.approx(0.062, abs=1e-3)
        assert c.d_star == pytest.approx(0.30, abs=1e-12)
        assert c.d == pytest.approx(0.20, abs=1e-12)
        assert c.prop1_holds and c.prop2_holds


def test_ac02_tau_bound_five_objects():
    with criterion("AC2  n=5, KI=0.11, d=0.08: K=0.262, k=3, tau lower bound 0.40"):
        c = certificate_from_gaps(5, 0.11, 0.08)
        assert c.K == pytest.approx(0.262, abs=1e-3)
        assert c.k == 3
        assert c.tau_lower == 0.40


def test_ac03_rho_bound_five_objects():
    with criterion("AC3  n=5, KI=0.07, d=0.07: K=0.1562, k=2, rho lower bound 0.70"):
        c = certificate_from_gaps(5, 0.07, 0.07)
        assert c.K == pytest.approx(0.1562, abs=5e-4)
        assert c.k == 2
        assert c.rho_lower == 0.70


def test_ac04_feasible_gap_table():
    with criterion("AC4  max feasible gap 1/3, 1/6, 1/10 for n=3,4,5"):
        for n, expected in ((3, Fraction(1, 3)), (4, Fraction(1, 6)), (5, Fraction(1, 10))):
            assert abs(Fraction(max_feasible_gap(n)) - expected) <= Fraction(1, 10**15)


def test_ac05_method_coincidence():
    with criterion("AC5  EV == GM within 1e-8 on 1000 consistent + 1000 disturbed 3x3, < 10 s"):
        start = time.perf_counter()
        failures = 0
        for seed in range(1000):
            m = random_consistent(3 + seed % 5, seed)
            failures += not np.allclose(evm(m).weights, gmm(m).weights, rtol=0, atol=1e-8)
        rng = np.random.default_rng(2024)
        for seed in range(1000):
            m = disturb(random_consistent(3, 10_000 + seed), float(rng.uniform(1, 30)), seed)
            failures += not np.allclose(evm(m).weights, gmm(m).weights, rtol=0, atol=1e-8)
        elapsed = time.perf_counter() - start
        assert failures == 0
        assert elapsed < 10.0


def test_ac06_theorem1_soundness(mc_default):
    with criterion("AC6  MD(EV, GM) <= 1/kappa^2 - 1 + 1e-8 over the full 3x3 corpus"):
        result, _ = mc_default
        t = result.trials
        assert result.total_trials >= PAPER_TRIALS and result.config.n == 3
        assert result.failed_trial_count == 0
        assert int(np.sum(t["md"] > 1 / (1 - t["ki"]) ** 2 - 1 + 1e-8)) == 0
        assert result.checks["theorem1_violations"] == 0


def _proposition_violations(result):
    t = result.trials
    untied = ~t["tie_flag"]
    return {
        "prop1": int(np.sum(t["prop1_holds"] & ~t["rankings_identical"])),
        "prop2": int(np.sum(t["prop2_holds"] & ~t["top1_identical"])),
        "tau": int(np.sum(untied & (t["tau"] < t["tau_lower"] - 1e-12))),
        "rho": int(np.sum(untied & (t["rho"] < t["rho_lower"] - 1e-12))),
        "unbounded": int(np.sum(untied & (np.isnan(t["tau_lower"]) | np.isnan(t["rho_lower"])))),
    }


def test_ac07_proposition_soundness(mc_default):
    with criterion("AC7  zero counterexamples to the rank-agreement and tau/rho bound claims"):
        result, _ = mc_default
        assert _proposition_violations(result) == dict(prop1=0, prop2=0, tau=0, rho=0, unbounded=0)


def test_ac08_scale(mc_default):
    with criterion("AC8  default 3x3 run executes exactly 362,750 trials in under 5 minutes"):
        result, elapsed = mc_default
        assert result.total_trials == PAPER_TRIALS
        assert result.trials["trial_id"].size == PAPER_TRIALS
        assert elapsed < 300.0


def test_ac09_magnitude(mc_default, mc_4x4):
    with criterion("AC9  3x3 fraction in [1%, 10%], 4x4 >= 10x smaller, met-count falls with KI"):
        r3, _ = mc_default
        assert 0.01 <= r3.fraction_meeting <= 0.10
        assert mc_4x4.total_trials == PAPER_TRIALS
        assert mc_4x4.fraction_meeting * 10 <= r3.fraction_meeting
        met = r3.histograms["ki"].met
        mode = int(np.argmax(met))
        assert all(a >= b for a, b in zip(met[mode:], met[mode + 1:]))
        assert _proposition_violations(mc_4x4)["prop1"] == 0


def _tau_oracle(x, y):
    n = len(x)
    nc = nd = 0
    for i, j in itertools.combinations(range(n), 2):
        if (x[i] > x[j] and y[i] > y[j]) or (x[i] < x[j] and y[i] < y[j]):
            nc += 1
        else:
            nd += 1
    return Fraction(nc - nd, comb(n, 2))


def _rho_oracle(x, y):
    n = len(x)
    return 1 - Fraction(6 * sum((a - b) ** 2 for a, b in zip(x, y)), n * (n * n - 1))


def test_ac10_rank_correlation_oracle():
    with criterion("AC10 tau and rho equal brute force on every permutation pair, n <= 5, < 5 s"):
        start = time.perf_counter()
        pairs = 0
        for n in range(2, 6):
            perms = [OrdinalRanking.from_order(p) for p in itertools.permutations(range(n))]
            for x, y in itertools.product(perms, repeat=2):
                assert kendall_tau(x, y) == float(_tau_oracle(x.rank_of, y.rank_of))
                assert spearman_rho(x, y) == float(_rho_oracle(x.rank_of, y.rank_of))
                pairs += 1
        assert pairs == 4 + 36 + 576 + 14_400
        assert time.perf_counter() - start < 5.0


def _ki_oracle(a):
    n = len(a)
    worst = 0.0
    for i, j, k in itertools.product(range(n), repeat=3):
        q = a[i][j] / (a[i][k] * a[k][j])
        worst = max(worst, 1.0 - min(q, 1.0 / q))
    return worst


def test_ac11_ki_oracle():
    with criterion("AC11 KI equals a brute-force triad scan; one-entry perturbation gives 1 - 1/f"):
        rng = np.random.default_rng(11)
        for i in range(1000):
            n = 2 + i % 5
            a = random_pc(rng, n, spread=float(rng.uniform(1.01, 30)))
            assert abs(koczkodaj_ki(PCMatrix(a)) - _ki_oracle(a.tolist())) <= 1e-12
        for i in range(200):
            f = float(rng.uniform(1.0, 50.0))
            base = np.array(random_consistent(3, i).entries)
            r, c = [(0, 1), (0, 2), (1, 2)][i % 3]
            base[r, c] *= f
            base[c, r] = 1 / base[r, c]
            assert abs(koczkodaj_ki(PCMatrix(base)) - (1 - 1 / f)) <= 1e-10


def test_ac12_determinism(mc_default, tmp_path):
    with criterion("AC12 identical config and seed give byte-identical files across worker counts"):
        first, _ = mc_default
        second = run_experiment(McConfig(), workers=2)
        a = write_outputs(first, tmp_path / "serial")
        b = write_outputs(second, tmp_path / "parallel")
        for key in a:
            with open(a[key], "rb") as fa, open(b[key], "rb") as fb:
                assert fa.read() == fb.read(), key
