"""Desk-scale acceptance scenarios.

Each test prints one ``[acceptance N] PASS|FAIL`` line with the observed
numbers and its wall time, then asserts the stated tolerance and time limit.
Run with ``pytest tests/test_acceptance.py -v`` (lines show even without -s).
"""

import math
import random
import time

import pytest

from urnlab.cli import run_cli
from urnlab.dp import race_prob_cap_sweep, race_prob_exact
from urnlab.explosion import (
    BirthProcessSpec,
    InitialCurveSpec,
    explosion_moments,
    initial_y,
    monopoly_prob_normal,
    sample_explosion_times,
)
from urnlab.feedback import BinState, FeedbackParams, RaceSpec, monopoly_prob_mc
from urnlab.reflected import (
    BoundarySpec,
    k1_from_ladder,
    k2_from_ladder,
    predict_regime,
    run_many,
)
from urnlab.stats import ks_statistic, normal_cdf

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def _report(number, title, checks, started, limit):
        elapsed = time.perf_counter() - started
        ok = all(passed for _, passed in checks) and elapsed < limit
        detail = "; ".join(f"{'ok' if passed else 'MISS'} {text}" for text, passed in checks)
        with capsys.disabled():
            print(f"\n[acceptance {number:>2}] {'PASS' if ok else 'FAIL'} {title}: {detail} "
                  f"[{elapsed:.1f}s of {limit}s]")
        for text, passed in checks:
            assert passed, text
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"

    return _report


def test_symmetric_race_baseline(report):
    t0 = time.perf_counter()
    params, start = FeedbackParams(2, 2), BinState(5, 5)
    spec = RaceSpec.from_multiplier(start, 50)
    exact = race_prob_exact(params, start, spec.cap1, spec.cap2)
    est = monopoly_prob_mc(params, start, spec, 100_000, seed=1)
    report(1, "symmetric race at 50x caps", [
        (f"dp={exact!r} vs 0.5 +/- 1e-12", abs(exact - 0.5) <= 1e-12),
        (f"mc={est.estimate:.4f} se={est.std_error:.4f} within 4 se of 0.5",
         abs(est.estimate - 0.5) <= 4 * est.std_error),
    ], t0, 10)


def test_hand_enumerable_race(report):
    t0 = time.perf_counter()
    params, start, spec = FeedbackParams(1, 1), BinState(1, 1), RaceSpec(3, 2)
    exact = race_prob_exact(params, start, 3, 2)
    est = monopoly_prob_mc(params, start, spec, 100_000, seed=2)
    report(2, "linear race to caps (3, 2)", [
        (f"dp={exact!r} vs 1/3 +/- 1e-12", abs(exact - 1 / 3) <= 1e-12),
        (f"mc={est.estimate:.4f} se={est.std_error:.4f} within 4 se of 1/3",
         abs(est.estimate - 1 / 3) <= 4 * est.std_error),
    ], t0, 5)


def test_subcritical_start_favours_bin1(report):
    t0 = time.perf_counter()
    params = FeedbackParams(2, 3)
    values = []
    for x in (200, 800, 3200):
        start = BinState(x, round(x**0.4))
        values.append(race_prob_exact(params, start, 50 * start.x, 50 * start.y))
    report(3, "starts (x, x^0.4) for x in 200, 800, 3200", [
        (f"dp={[round(v, 6) for v in values]} increasing", values[0] < values[1] < values[2]),
        (f"dp(3200)={values[2]:.6f} >= 0.95", values[2] >= 0.95),
    ], t0, 300)


def test_offset_start_normal_limit(report):
    t0 = time.perf_counter()
    params, start = FeedbackParams(2, 2), BinState(400, 388)
    # the 50x grid has 3.7e8 cells, above the default streaming budget
    rows = race_prob_cap_sweep(params, start, [10, 25, 50], budget=400_000_000)
    final = rows[-1].probability
    target = normal_cdf(1.0)
    normal = monopoly_prob_normal(params, start)
    sweep = ", ".join(f"{r.multiplier}x={r.probability:.4f}" for r in rows)
    report(4, "symmetric start (400, 388)", [
        (f"dp sweep [{sweep}] final within 0.05 of Phi(1)={target:.4f}", abs(final - target) <= 0.05),
        (f"normal approximation {normal:.4f} within 0.03 of dp {final:.4f}", abs(normal - final) <= 0.03),
    ], t0, 300)


def test_critical_curve_offset_gives_half(report):
    t0 = time.perf_counter()
    params = FeedbackParams(2, 3)
    y, _ = initial_y(10**6, InitialCurveSpec.on_critical_curve(params, mu=3.0, delta=0.0))
    start = BinState(10**6, y)
    normal = monopoly_prob_normal(params, start)
    est = monopoly_prob_mc(params, start, RaceSpec.from_multiplier(start, 50), 10_000, seed=5)
    tol = max(4 * est.std_error, 0.05)
    report(5, f"critical curve plus 3 at x=1e6 (y={y})", [
        (f"normal approximation {normal:.4f} within 0.05 of 0.5", abs(normal - 0.5) <= 0.05),
        (f"mc at 50x caps ({est.method}) {est.estimate:.4f} se={est.std_error:.4f} within {tol:.3f} of 0.5",
         abs(est.estimate - 0.5) <= tol),
    ], t0, 600)


def test_explosion_moments_and_sampled_mean(report):
    t0 = time.perf_counter()
    m2 = explosion_moments(BirthProcessSpec(2, 1))
    m3 = explosion_moments(BirthProcessSpec(3, 1))
    draws = sample_explosion_times(BirthProcessSpec(2, 1), 100_000, seed=6, truncation_K=10**6,
                                   exact_terms=1_000)
    mean = draws.samples.mean()
    se = draws.samples.std(ddof=1) / math.sqrt(draws.samples.size)
    report(6, "explosion-time moments", [
        (f"mean(beta=2)={m2.mean!r} vs pi^2/6 +/- 1e-8", abs(m2.mean - math.pi**2 / 6) <= 1e-8),
        (f"var(beta=3)={m3.variance!r} vs pi^6/945 +/- 1e-8", abs(m3.variance - math.pi**6 / 945) <= 1e-8),
        (f"sampled mean {mean:.5f} se={se:.5f} within 4 se of pi^2/6",
         abs(mean - math.pi**2 / 6) <= 4 * se),
    ], t0, 60)


def test_standardized_explosion_times_are_normal(report):
    t0 = time.perf_counter()
    spec = BirthProcessSpec(2, 10**4)
    draws = sample_explosion_times(spec, 10_000, seed=7, truncation_K=10**7, exact_terms=10_000)
    m = explosion_moments(spec)
    stat = ks_statistic((draws.samples - m.mean) / m.std)
    report(7, "KS distance, beta=2, k=1e4, n=1e4, K=1e7", [
        (f"statistic {stat:.4f} <= 0.05", stat <= 0.05),
    ], t0, 120)


def _count(runs, predicate):
    return sum(1 for s in runs if predicate(s))


def test_symmetric_strip_widths(report):
    t0 = time.perf_counter()
    params = FeedbackParams(2, 2)
    boundary = BoundarySpec.power_law(0.5, 2.0)
    pred = predict_regime(params, 0.5, 2.0)
    lower = run_many(params, boundary, boundary.lower_start(10_000), 10**6, 20, seed=8)
    upper = run_many(params, boundary, boundary.upper_start(10_000), 10**6, 20, seed=8)
    n_lower = _count(lower, lambda s: s.lower_gap_min <= 0.2 and 1 < s.lower_gap_max <= 2.2)
    n_upper = _count(upper, lambda s: s.upper_gap_min <= 0.2 and 1 < s.upper_gap_max <= 2.2)
    lower_max = sorted(round(s.lower_gap_max, 3) for s in lower)
    upper_max = sorted(round(s.upper_gap_max, 3) for s in upper)
    report(8, "symmetric wedge sqrt(x) .. x^2", [
        (f"predicted k1={pred.lower_width_k1}, k2={pred.upper_width_k2}",
         (pred.lower_width_k1, pred.upper_width_k2) == (2, 2)),
        (f"lower run {n_lower}/20 seeds with gap min <= 0.2, max in (1, 2.2] (maxima {lower_max})", n_lower >= 18),
        (f"upper run {n_upper}/20 seeds with gap min <= 0.2, max in (1, 2.2] (maxima {upper_max})", n_upper >= 18),
    ], t0, 600)


def test_sublinear_upper_edge_hug(report):
    t0 = time.perf_counter()
    params = FeedbackParams(2, 3)
    boundary = BoundarySpec.power_law(0.25, 0.75)
    runs = run_many(params, boundary, boundary.upper_start(10_000), 10**6, 20, seed=9)
    n = _count(runs, lambda s: -0.2 <= s.upper_gap_min and s.upper_gap_max <= 1.2)
    lo = min(s.upper_gap_min for s in runs)
    hi = max(s.upper_gap_max for s in runs)
    report(9, "upper edge x^0.75 with beta=(2, 3)", [
        (f"{n}/20 seeds with x^0.75 - y in [-0.2, 1.2] (overall [{lo:.3f}, {hi:.3f}])", n >= 18),
    ], t0, 600)


def test_bisector_zigzag_and_width(report):
    t0 = time.perf_counter()
    boundary = BoundarySpec.power_law(0.25, 1.0)
    start = BinState(10_000, 10_000)
    zig = run_many(FeedbackParams(2, 3.5), boundary, start, 10**5, 100, seed=10)
    n_zig = _count(zig, lambda s: s.upper_gap_min >= 0 and s.upper_gap_max <= 1)
    wide = run_many(FeedbackParams(2, 3), boundary, start, 10**5, 20, seed=10)
    n_two = _count(wide, lambda s: s.upper_gap_max == 2)
    n_le_two = _count(wide, lambda s: s.upper_gap_max <= 2)
    pred = predict_regime(FeedbackParams(2, 3), 0.25, 1.0)
    report(10, "bisector upper edge", [
        (f"beta=(2, 3.5): {n_zig}/100 runs with x - y in {{0, 1}}", n_zig >= 99),
        (f"beta=(2, 3): predicted k2={pred.upper_width_k2}", pred.upper_width_k2 == 2),
        (f"beta=(2, 3): {n_two}/20 runs reach max 2", n_two >= 15),
        (f"beta=(2, 3): {n_le_two}/20 runs stay <= 2", n_le_two == 20),
    ], t0, 300)


def _admissible(rng):
    b1 = rng.uniform(1.05, 4.0)
    b2 = b1 if rng.random() < 0.2 else rng.uniform(b1, b1 + 3.0)
    params = FeedbackParams(b1, b2)
    alpha_cr = (b1 - 1) / (b2 - 1)
    alpha = rng.uniform(0.0, alpha_cr)
    gamma = rng.uniform(max(1.0, alpha_cr), max(1.0, alpha_cr) + 3.0)
    if alpha == 0.0 or gamma == 1.0:
        return _admissible(rng)
    return params, alpha, gamma


def test_width_predictor_matches_ladders(report):
    t0 = time.perf_counter()
    rng = random.Random(11)
    mismatches = 0
    for _ in range(10_000):
        params, alpha, gamma = _admissible(rng)
        pred = predict_regime(params, alpha, gamma)
        if (pred.lower_width_k1 != k1_from_ladder(params, alpha)
                or pred.upper_width_k2 != k2_from_ladder(params, gamma)):
            mismatches += 1
    report(11, "closed-form widths vs ladder membership", [
        (f"{mismatches} mismatches in 10000 draws", mismatches == 0),
    ], t0, 5)


def test_reruns_are_byte_identical(report, tmp_path):
    t0 = time.perf_counter()
    argv = ["monopoly", "--beta1", "2", "--beta2", "2", "--x0", "5", "--y0", "5", "--cap-mult", "50",
            "--replicas", "100000", "--seed", "12"]
    same = []
    for mode_argv in (argv, ["verify", "--preset", "bisector-zigzag"]):
        outs = []
        for rep in ("a", "b"):
            out = tmp_path / f"{mode_argv[0]}-{rep}"
            assert run_cli(mode_argv + ["--out-dir", str(out)]) in (0, 3)
            outs.append(((out / "results.csv").read_bytes(), (out / "summary.json").read_bytes()))
        same.append(outs[0] == outs[1])
    report(12, "same seed, same bytes", [
        (f"monopoly campaign identical={same[0]}", same[0]),
        (f"reflect verify campaign identical={same[1]}", same[1]),
    ], t0, 60)
