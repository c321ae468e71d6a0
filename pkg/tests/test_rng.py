import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urnlab.feedback import BinState, FeedbackParams, RaceSpec, _race_chain, race_to_caps
from urnlab.rng import Stream, as_u64, derive_replica_stream, normal_samples, philox4x32, uniform

# Random123 known-answer vectors for Philox4x32-10
KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    ((0xFFFFFFFF,) * 4, (0xFFFFFFFF,) * 2, (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
    ((0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344), (0xA4093822, 0x299F31D0),
     (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1)),
]


@pytest.mark.parametrize("ctr,key,expected", KAT)
def test_philox_known_answers(ctr, key, expected):
    out = philox4x32(*(np.uint64(c) for c in ctr), *(np.uint64(k) for k in key))
    assert tuple(int(w) for w in out) == expected


def test_uniform_layout_matches_documented_bit_recipe():
    seed, stream, counter = 0x1234_5678_9ABC_DEF0, 3, 11
    w = philox4x32(np.uint64(counter), np.uint64(0), np.uint64(stream), np.uint64(0),
                   np.uint64(seed & 0xFFFFFFFF), np.uint64(seed >> 32))
    expected = ((int(w[0]) >> 5) * 2**26 + (int(w[1]) >> 6)) / 2**53
    assert uniform(seed, stream, counter) == expected


def test_same_seed_and_index_repeat_draws():
    a = derive_replica_stream(7, 0).draws(100)
    b = derive_replica_stream(7, 0).draws(100)
    assert np.array_equal(a, b)


def test_distinct_indices_give_distinct_streams():
    a = derive_replica_stream(7, 0)
    b = derive_replica_stream(7, 1)
    assert (a.seed, a.index) != (b.seed, b.index)
    assert not np.array_equal(a.draws(16), b.draws(16))


@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1), st.integers(0, 2**40))
@settings(max_examples=200, deadline=None)
def test_uniform_in_unit_interval(seed, stream, counter):
    u = uniform(as_u64(seed), as_u64(stream), counter)
    assert 0.0 <= u < 1.0


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000), st.integers(1, 50))
@settings(max_examples=50, deadline=None)
def test_random_and_draws_agree(seed, index, n):
    s1, s2 = Stream(seed, index), Stream(seed, index)
    one_by_one = [s1.random() for _ in range(n)]
    assert np.array_equal(np.array(one_by_one), s2.draws(n))
    assert s1.counter == s2.counter == n


def test_seed_outside_64_bits_rejected():
    with pytest.raises(ValueError):
        Stream(2**64, 0)
    with pytest.raises(ValueError):
        Stream(-1, 0)


def test_uniforms_look_uniform():
    u = Stream(1, 0).draws(200_000)
    assert abs(u.mean() - 0.5) < 4 * np.sqrt(1 / 12 / u.size)
    counts, _ = np.histogram(u, bins=20, range=(0, 1))
    expected = u.size / 20
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert chi2 < 45  # 19 dof, p ~ 1e-3


def test_normal_samples_moments():
    z = normal_samples(5, 100_000)
    assert abs(z.mean()) < 0.02
    assert abs(z.std() - 1) < 0.02


@given(st.integers(0, 2**32), st.integers(0, 500), st.floats(1.1, 3.0), st.floats(1.1, 3.0),
       st.integers(1, 6), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_compiled_race_matches_python_stepping(seed, replica, b1, b2, x, y):
    params = FeedbackParams(b1, b2)
    spec = RaceSpec(x + 15, y + 12)
    outcome = race_to_caps(params, BinState(x, y), spec, derive_replica_stream(seed, replica))
    fx, fy, steps = _race_chain(b1, b2, x, y, spec.cap1, spec.cap2, as_u64(seed), replica)
    assert (outcome.final.x, outcome.final.y) == (fx, fy)
    assert outcome.steps == steps
