import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize

from lambertw_loss import lambert_exponential as le
from lambertw_loss.lambert_exponential import MomentNotFiniteError, WExpParams
from lambertw_loss.wfun import w0

MC_N = 10_000_000


def skewness_from_raw_moments(g):
    p = WExpParams(1.0, g)
    m1, m2, m3 = (le.kth_moment(p, k) for k in (1, 2, 3))
    var = m2 - m1**2
    return (m3 - 3 * m1 * m2 + 2 * m1**3) / var**1.5


class TestDistribution:
    def test_zero_gamma_is_exponential(self):
        assert le.cdf(WExpParams(1.0, 0.0), 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)

    def test_cdf_closed_form(self):
        expected = 1 - math.exp(-w0(0.2).value / 0.2)
        assert le.cdf(WExpParams(1.0, 0.2), 1.0) == pytest.approx(expected, rel=1e-14)

    def test_cdf_monte_carlo(self):
        x = np.random.default_rng(5).exponential(1.0, MC_N)
        y = x * np.exp(0.2 * x)
        frac = np.mean(y <= 1.0)
        se = math.sqrt(frac * (1 - frac) / MC_N)
        assert abs(le.cdf(WExpParams(1.0, 0.2), 1.0) - frac) <= 3 * se

    def test_cdf_at_upper_bound(self):
        p = WExpParams(1.0, -0.5)
        assert le.upper_bound(p) == pytest.approx(2 / math.e, rel=1e-15)
        assert le.cdf(p, 2 / math.e) == 1.0
        assert le.cdf(p, le.upper_bound(p)) == 1.0

    def test_pdf_vanishes_beyond_bound(self):
        p = WExpParams(1.0, -0.5)
        b = le.upper_bound(p)
        assert le.pdf(p, b + 1e-9) == 0.0 and le.pdf(p, 5.0) == 0.0

    @pytest.mark.parametrize("g", [-0.5, -0.04, 0.0, 0.096, 0.3])
    def test_normalization(self, g):
        p = WExpParams(1.0, g)
        f = lambda t: le.pdf(p, t)  # noqa: E731
        hi = le.upper_bound(p) if g < 0 else math.inf
        mid = 1.0 if g >= 0 else hi / 2
        total = integrate.quad(f, 0, mid, limit=1000)[0] + integrate.quad(f, mid, hi, limit=1000)[0]
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_invalid_rate(self):
        with pytest.raises(ValueError):
            WExpParams(0.0, 0.1)


class TestMoments:
    def test_exponential_mean(self):
        assert le.kth_moment(WExpParams(1.0, 0.0), 1) == 1.0

    def test_closed_form(self):
        assert le.kth_moment(WExpParams(1.0, 0.5), 1) == 4.0
        assert le.kth_moment(WExpParams(2.0, 0.0), 3) == pytest.approx(6 / 8)

    def test_nonexistence(self):
        with pytest.raises(MomentNotFiniteError):
            le.kth_moment(WExpParams(1.0, 0.5), 2)
        with pytest.raises(MomentNotFiniteError):
            le.kth_moment(WExpParams(1.0, 1.0), 1)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            le.kth_moment(WExpParams(), 0)

    def test_mean_half_gamma_monte_carlo(self):
        # variance is infinite at gamma = 0.5, so only check the sample mean is close
        x = np.random.default_rng(2).exponential(1.0, MC_N)
        assert np.mean(x * np.exp(0.5 * x)) == pytest.approx(4.0, rel=0.05)

    @pytest.mark.parametrize("lam,g,k", [(1, 0.2, 1), (1, 0.2, 2), (0.5, -0.3, 1), (2, 0.1, 3)])
    def test_monte_carlo(self, lam, g, k):
        p = WExpParams(lam, g)
        y = p.distribution().sample(MC_N, seed=13)
        yk = y**k
        se = yk.std() / math.sqrt(MC_N)
        assert abs(le.kth_moment(p, k) - yk.mean()) <= 3 * se


class TestSkewness:
    def test_exponential(self):
        assert le.skewness(0.0) == 2.0

    def test_lambda_free(self):
        assert le.skewness(WExpParams(7.0, 0.1)) == le.skewness(0.1)

    def test_minimum(self):
        res = optimize.minimize_scalar(le.skewness, bounds=(-50, -1), method="bounded", options={"xatol": 1e-10})
        assert res.fun == pytest.approx(-9 * math.sqrt(15) / 50, abs=1e-3)
        assert le.skewness(-1.0) == pytest.approx(le.SKEWNESS_MINIMUM, rel=1e-14)

    def test_minimum_by_grid(self):
        g = np.linspace(-50, -1, 49_001)
        s = np.array([le.skewness(x) for x in g])
        assert s.min() == pytest.approx(-0.697137, abs=1e-3)

    @pytest.mark.parametrize("g", [-5.0, -1.0, -0.5, 0.0, 0.1, 0.3])
    def test_matches_raw_moments(self, g):
        assert le.skewness(g) == pytest.approx(skewness_from_raw_moments(g), rel=1e-10)

    def test_monotone_pieces(self):
        left = np.linspace(-50, -1, 2000)
        right = np.linspace(-1, 1 / 3 - 1e-3, 2000)
        assert np.all(np.diff([le.skewness(x) for x in left]) < 0)
        assert np.all(np.diff([le.skewness(x) for x in right]) > 0)

    def test_growth_toward_one_third(self):
        assert le.skewness(0.33) > le.skewness(0.3) > le.skewness(0.2) > 2
        assert le.skewness(0.333) > 100

    def test_nonexistence(self):
        with pytest.raises(MomentNotFiniteError):
            le.skewness(1 / 3)


class TestUpperBound:
    def test_published_value(self):
        assert le.upper_bound(WExpParams(1.176, -0.04)) == pytest.approx(7.82, abs=5e-3)

    def test_formula(self):
        assert le.upper_bound(WExpParams(1.0, -1.0)) == pytest.approx(1 / math.e, rel=1e-15)

    def test_undefined(self):
        with pytest.raises(ValueError):
            le.upper_bound(WExpParams(1.0, 0.0))

    def test_samples_below_bound(self):
        p = WExpParams(1.0, -0.5)
        assert np.all(p.distribution().sample(100_000, seed=1) < le.upper_bound(p))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 100), st.floats(-3, 0.3), st.floats(0.0, 1.0))
def test_rate_is_a_scale(lam, g, y):
    """cdf(y; lam) equals cdf(lam y; 1)."""
    assert le.cdf(WExpParams(lam, g), y / lam) == pytest.approx(le.cdf(WExpParams(1.0, g), y), rel=1e-9, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(st.floats(-20, 0.33))
def test_skewness_formula_property(g):
    assert le.skewness(g) == pytest.approx(skewness_from_raw_moments(g), rel=1e-8)
