import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urnlab.dp import race_prob_exact
from urnlab.feedback import (
    BinState,
    FeedbackParams,
    RaceSpec,
    Winner,
    jump_right_prob,
    jump_up_prob,
    monopoly_prob_mc,
    race_to_caps,
    race_winners,
    step,
)
from urnlab.rng import derive_replica_stream


class FixedDraw:
    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


@pytest.mark.parametrize("b1,b2,x,y,expected", [
    (2, 3, 2, 2, 4 / 12),
    (2, 3, 1, 1, 0.5),
    (2, 2, 10, 1, 100 / 101),
])
def test_jump_right_prob_examples(b1, b2, x, y, expected):
    assert jump_right_prob(FeedbackParams(b1, b2), BinState(x, y)) == pytest.approx(expected, rel=1e-15)


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.integers(1, 10**6), st.integers(1, 10**6))
def test_jump_prob_matches_direct_ratio(b1, b2, x, y):
    params, s = FeedbackParams(b1, b2), BinState(x, y)
    direct = x**b1 / (x**b1 + y**b2)
    assert jump_right_prob(params, s) == pytest.approx(direct, rel=1e-12, abs=1e-300)
    assert jump_right_prob(params, s) + jump_up_prob(params, s) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(0.1, 50), st.floats(0.1, 50), st.integers(1, 10**15), st.integers(1, 10**15))
def test_jump_prob_stays_finite_for_huge_powers(b1, b2, x, y):
    p = jump_right_prob(FeedbackParams(b1, b2), BinState(x, y))
    assert 0.0 <= p <= 1.0 and not math.isnan(p)


def test_threshold_rule():
    params, s = FeedbackParams(2, 3), BinState(1, 1)
    assert step(params, s, FixedDraw(0.49)) == BinState(2, 1)
    assert step(params, s, FixedDraw(0.5)) == BinState(1, 2)


@given(st.floats(0.5, 4), st.floats(0.5, 4), st.integers(1, 1000), st.integers(1, 1000),
       st.floats(0, 0.999999))
def test_step_adds_exactly_one_ball(b1, b2, x, y, u):
    nxt = step(FeedbackParams(b1, b2), BinState(x, y), FixedDraw(u))
    assert nxt.total == x + y + 1
    assert (nxt.x - x, nxt.y - y) in {(1, 0), (0, 1)}


def test_one_step_race():
    for seed in range(20):
        rng = derive_replica_stream(seed, 0)
        u = derive_replica_stream(seed, 0).random()
        out = race_to_caps(FeedbackParams(2, 3), BinState(1, 1), RaceSpec(2, 2), rng)
        assert out.steps == 1
        assert out.winner == (Winner.BIN1 if u < 0.5 else Winner.BIN2)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_params_validated(bad):
    with pytest.raises(ValueError):
        FeedbackParams(bad, 2.0)


def test_state_and_caps_validated():
    with pytest.raises(ValueError):
        BinState(0, 1)
    with pytest.raises(ValueError):
        RaceSpec(5, 5).validate(BinState(5, 1))


def test_symmetric_chain_estimate():
    est = monopoly_prob_mc(FeedbackParams(2, 2), BinState(5, 5), RaceSpec(255, 255), 100_000, seed=1)
    assert est.method == "chain"
    assert abs(est.estimate - 0.5) <= 4 * est.std_error


def test_hand_race_estimate():
    est = monopoly_prob_mc(FeedbackParams(1, 1), BinState(1, 1), RaceSpec(3, 2), 100_000, seed=2)
    assert abs(est.estimate - 1 / 3) <= 4 * est.std_error


def test_asymmetric_estimate_matches_dp():
    params, start, spec = FeedbackParams(2, 3), BinState(200, 8), RaceSpec(10_000, 10_000)
    exact = race_prob_exact(params, start, spec.cap1, spec.cap2)
    est = monopoly_prob_mc(params, start, spec, 20_000, seed=3)
    assert abs(est.estimate - exact) <= 4 * est.std_error


@pytest.mark.parametrize("params,start,caps", [
    (FeedbackParams(2, 3), BinState(30, 4), (1500, 200)),
    (FeedbackParams(2, 2), BinState(40, 38), (2000, 1900)),
])
def test_embedded_race_agrees_with_chain(params, start, caps):
    spec = RaceSpec(*caps)
    exact = race_prob_exact(params, start, *caps)
    emb = monopoly_prob_mc(params, start, spec, 40_000, seed=4, method="embedded")
    assert emb.method == "embedded"
    assert abs(emb.estimate - exact) <= 4 * emb.std_error


def test_embedded_blocks_agree_with_exact_holding_times():
    params, start, spec = FeedbackParams(2, 2), BinState(40, 38), RaceSpec(4000, 3800)
    exact = race_prob_exact(params, start, spec.cap1, spec.cap2)
    est = monopoly_prob_mc(params, start, spec, 40_000, seed=5, method="embedded",
                           exact_terms=50, block_frac=0.05)
    assert abs(est.estimate - exact) <= 4 * est.std_error


def test_replica_offsets_reproduce_a_split_campaign():
    params, start, spec = FeedbackParams(2, 3), BinState(10, 3), RaceSpec(200, 60)
    whole, _, _ = race_winners(params, start, spec, 1000, seed=9)
    head, _, _ = race_winners(params, start, spec, 400, seed=9)
    tail, _, _ = race_winners(params, start, spec, 600, seed=9, first_replica=400)
    assert list(whole) == list(head) + list(tail)


def test_unknown_method_rejected():
    with pytest.raises(ValueError):
        monopoly_prob_mc(FeedbackParams(2, 2), BinState(1, 1), RaceSpec(3, 3), 10, 0, method="magic")
