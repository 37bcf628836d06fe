import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from obliq import DegenerateSample
from obliq.stats import Diagnostics, PairedSample, SummaryStats, summarize, validate

from oracles import exact_sums

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
pairs = st.lists(st.tuples(finite, finite), min_size=3, max_size=40)


def test_identity_data():
    s = summarize(([1, 2, 3], [1, 2, 3]))
    assert (s.sxx, s.syy, s.sxy, s.rho) == (2, 2, 2, 1)


def test_reflected_data():
    s = summarize(([1, 2, 3], [3, 2, 1]))
    assert s.sxy == -2 and s.rho == -1


def test_hand_computed_sums():
    s = summarize(([0, 1, 2, 3], [0, 1, 1, 2]))
    assert s.sxx == pytest.approx(5)
    assert s.syy == pytest.approx(2)
    assert s.sxy == pytest.approx(3)
    assert s.rho == pytest.approx(3 / math.sqrt(10), rel=1e-15)


@pytest.mark.parametrize("xs, ys", [
    ([1, 2], [1, 2]),
    ([1, 2, 3], [1, 2]),
    ([1, 2, math.nan], [1, 2, 3]),
    ([1, 2, 3], [1, math.inf, 3]),
])
def test_rejects_bad_samples(xs, ys):
    with pytest.raises(DegenerateSample):
        PairedSample(xs, ys)


def test_exact_oracle_on_random_samples(rng):
    for _ in range(50):
        n = int(rng.integers(3, 60))
        xs = rng.normal(5, 3, n)
        ys = 2 * xs + rng.normal(0, 1, n)
        s, ref = summarize((xs, ys)), exact_sums(xs, ys)
        for key, want in ref.items():
            assert getattr(s, key) == pytest.approx(float(want), rel=1e-12, abs=1e-12)


def test_large_offset_is_stable():
    # Raw-moment subtraction would lose every digit here.
    xs = 1e9 + np.array([0.0, 1.0, 2.0, 3.0])
    ys = -1e9 + np.array([0.0, 1.0, 1.0, 2.0])
    s = summarize((xs, ys))
    assert (s.sxx, s.syy, s.sxy) == (5.0, 2.0, 3.0)


@settings(max_examples=60, deadline=None)
@given(pairs, st.randoms(use_true_random=False))
def test_permutation_invariance(data, rnd):
    shuffled = list(data)
    rnd.shuffle(shuffled)
    a = summarize(tuple(zip(*data)))
    b = summarize(tuple(zip(*shuffled)))
    for key in ("sxx", "syy", "sxy", "sxxxy", "sxyyy"):
        scale = max(1.0, abs(getattr(a, key)))
        assert abs(getattr(a, key) - getattr(b, key)) <= 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(-50, 50), st.floats(-50, 50),
       st.integers(0, 2 ** 32 - 1))
def test_affine_maps(c, d, a, b, seed):
    r = np.random.default_rng(seed)
    xs = r.normal(0, 2, 25)
    ys = xs + r.normal(0, 1, 25)
    s = summarize((xs, ys))
    t = summarize((c * xs + a, d * ys + b))
    assert t.sxx == pytest.approx(c * c * s.sxx, rel=1e-12)
    assert t.syy == pytest.approx(d * d * s.syy, rel=1e-12)
    assert t.sxy == pytest.approx(c * d * s.sxy, rel=1e-12)
    assert t.rho == pytest.approx(s.rho, rel=1e-12)
    assert t.sxxxy == pytest.approx(c ** 3 * d * s.sxxxy, rel=1e-11)
    assert t.sxyyy == pytest.approx(c * d ** 3 * s.sxyyy, rel=1e-11)
    scaled = s.scaled(c, d)
    assert scaled.sxxxy == pytest.approx(t.sxxxy, rel=1e-11)


@settings(max_examples=100, deadline=None)
@given(pairs)
def test_invariants_hold(data):
    s = summarize(tuple(zip(*data)))
    assert s.sxx >= 0 and s.syy >= 0
    assert s.sxy ** 2 <= s.sxx * s.syy * (1 + 1e-12) + 1e-300
    if s.sxx * s.syy > 0:
        assert -1 <= s.rho <= 1


def test_from_moments_needs_one_of_sxy_rho():
    with pytest.raises(TypeError):
        SummaryStats.from_moments(1, 1)
    with pytest.raises(TypeError):
        SummaryStats.from_moments(1, 1, 0.5, rho=0.5)
    assert SummaryStats.from_moments(4, 1, 1.0).rho == 0.5


def test_reflected_flips_signs():
    s = SummaryStats.from_moments(1, 2, rho=0.3, sxxxy=4, sxyyy=5).reflected()
    assert s.sxy < 0 and s.rho == -0.3 and s.sxxxy == -4 and s.sxyyy == -5


class TestValidate:
    def test_zero_cross_sum(self):
        assert Diagnostics.HORIZONTAL_UNDEFINED in validate(
            SummaryStats.from_moments(1, 1, 0.0))

    def test_collinear(self):
        assert Diagnostics.COLLINEAR in validate(summarize(([1, 2, 3], [2, 4, 6])))

    def test_no_x_variation(self):
        flags = validate(summarize(([1, 1, 1], [1, 2, 3])))
        assert Diagnostics.NO_X_VARIATION in flags
        assert Diagnostics.HORIZONTAL_UNDEFINED in flags

    def test_clean(self):
        assert validate(summarize(([0, 1, 2, 3], [0, 1, 1, 2]))) == Diagnostics.NONE
