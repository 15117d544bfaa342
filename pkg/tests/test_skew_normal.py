import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

import frozen
from snextremes.skew_normal import (
    Regime,
    RegimeError,
    ShapeParameter,
    SurvivalMethod,
    _log_sf_direct,
    _log_sf_tail,
    cdf,
    log_survival,
    mills_bracket,
    pdf,
    sample,
    survival,
    tail_expansion,
    tail_threshold,
)
from snextremes.special import DomainError, normal_cdf, normal_pdf, normal_survival, owen_t

LAMS = (-5.0, -1.0, -0.1, 0.1, 1.0, 5.0)


def test_regimes():
    assert ShapeParameter(-0.2).regime is Regime.NEGATIVE
    assert ShapeParameter(0).regime is Regime.ZERO
    assert ShapeParameter(3).regime is Regime.POSITIVE
    with pytest.raises(DomainError):
        ShapeParameter(math.inf)


class TestDensity:
    @given(st.floats(-30, 30))
    def test_zero_lambda_is_normal(self, x):
        assert pdf(0, x) == pytest.approx(normal_pdf(x), rel=1e-15)

    def test_at_origin(self):
        assert pdf(1, 0.0) == pytest.approx(0.3989422804014327, rel=1e-15)

    @pytest.mark.parametrize("lam", LAMS)
    def test_integrates_to_one(self, lam):
        total, _ = integrate.quad(lambda x: pdf(lam, x), -30, 30, points=[0.0], limit=200,
                                  epsabs=1e-14, epsrel=1e-13)
        assert abs(total - 1.0) <= 1e-10


class TestCdf:
    def test_known_values(self):
        assert cdf(1, 0.0) == pytest.approx(0.25, abs=1e-15)
        assert cdf(-2, 0.0) == pytest.approx(0.5 + math.atan(2) / math.pi, abs=1e-15)

    def test_quadrature_of_density(self):
        for lam in (1.0, -2.0):
            ref, _ = integrate.quad(lambda x: pdf(lam, x), -np.inf, 0.0, epsabs=1e-15)
            assert cdf(lam, 0.0) == pytest.approx(ref, abs=1e-12)

    @given(st.floats(-10, 10))
    def test_zero_lambda(self, x):
        assert cdf(0, x) == pytest.approx(normal_cdf(x), abs=1e-15)

    @given(st.floats(-5, 5), st.floats(-8, 8))
    @settings(max_examples=80)
    def test_owen_identity(self, lam, x):
        assert cdf(lam, x) == pytest.approx(normal_cdf(x) - 2 * owen_t(x, lam), abs=1e-13)

    @given(st.floats(-5, 5), st.floats(-8, 8))
    @settings(max_examples=80)
    def test_reflection(self, lam, x):
        assert abs(cdf(lam, -x) - (1 - cdf(-lam, x))) <= 1e-12

    @pytest.mark.parametrize("lam", (-5.0, -1.0, 0.0, 1.0, 5.0))
    def test_monotone_and_derivative(self, lam):
        xs = np.linspace(-6, 6, 241)
        vals = [cdf(lam, x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        h = 1e-5
        for x in xs:
            fd = (cdf(lam, x + h) - cdf(lam, x - h)) / (2 * h)
            assert abs(fd - pdf(lam, x)) <= 1e-7

    def test_matches_scipy(self):
        for lam in (-3.0, 0.5, 2.0):
            for x in (-2.0, 0.3, 1.7):
                assert cdf(lam, x) == pytest.approx(stats.skewnorm.cdf(x, lam), abs=1e-12)


class TestSurvival:
    def test_against_high_precision_oracle(self):
        worst = 0.0
        for (lam, x), ref in frozen.LOG_SURVIVAL.items():
            got = survival(lam, x).value.log_magnitude
            # relative error of S is the absolute error of log S
            worst = max(worst, abs(math.expm1(got - ref)))
        assert worst <= 1e-10

    def test_zero_lambda_is_normal(self):
        for x in (-2.0, 0.0, 3.0, 12.0, 40.0):
            s = survival(0, x)
            assert s.method is SurvivalMethod.NORMAL
            assert s.value.log_magnitude == normal_survival(x).log_magnitude

    def test_method_tags(self):
        assert survival(1, 2.0).method is SurvivalMethod.DIRECT_OWEN
        assert survival(1, 10.0).method is SurvivalMethod.LOG_TAIL
        assert survival(-1, 8.0).method is SurvivalMethod.LOG_TAIL
        for lam in (-0.1, -1.0, -3.0, 1.0):
            t = tail_threshold(lam)
            assert survival(lam, t).method is SurvivalMethod.LOG_TAIL
            assert survival(lam, t * 0.999).method is SurvivalMethod.DIRECT_OWEN

    def test_value_in_unit_interval(self):
        for lam in LAMS:
            for x in (-40.0, -3.0, 0.0, 3.0, 60.0):
                p = survival(lam, x)
                assert 0.0 < p.value.value <= 1.0 or p.value.log_magnitude < -700

    @pytest.mark.parametrize("lam", (-5.0, -1.0, -0.3, 0.5, 1.0, 4.0))
    def test_routes_agree_near_threshold(self, lam):
        t = tail_threshold(lam)
        xs = np.linspace(0.8 * t, 1.2 * t, 21)
        a = _log_sf_direct(lam, xs)
        b = _log_sf_tail(lam, xs)
        assert np.max(np.abs(np.expm1(a - b))) <= 1e-9

    def test_bracket_positive_lambda(self):
        lo, up = mills_bracket(1, 10.0)
        assert lo < survival(1, 10.0).value < up

    def test_bracket_negative_lambda(self):
        lo, up = mills_bracket(-1, 8.0)
        assert lo < survival(-1, 8.0).value < up
        ref = frozen.LOG_SURVIVAL[(-3.0, 10.0)]
        lo, up = mills_bracket(-3, 10.0)
        assert lo.log_magnitude < ref < up.log_magnitude
        assert mills_bracket(-3, 10.0).contains(survival(-3, 10.0).value)

    def test_bracket_flags_nonpositive_lower(self):
        # (1 + l^2)^2 / l^2 = 4 at l = -1, so the factor 1 - 4/x^2 vanishes at x = 2
        br = mills_bracket(-1, 2.0)
        assert not br.lower_positive
        assert br.lower.sign == 0
        br = mills_bracket(-1, 1.5)
        assert br.lower.sign == -1
        assert br.lower.value == pytest.approx((1 - 4 / 2.25) * br.upper.value, rel=1e-14)

    def test_bracket_errors(self):
        with pytest.raises(RegimeError):
            mills_bracket(0, 1.0)
        with pytest.raises(DomainError):
            mills_bracket(1, 0.0)

    def test_log_survival_vector(self):
        xs = np.array([-1.0, 3.0, 9.0])
        ls, tail = log_survival(-1.0, xs)
        assert tail.tolist() == [False, True, True]
        assert ls[1] == pytest.approx(survival(-1, 3.0).value.log_magnitude, rel=1e-15)


class TestTailExpansion:
    def test_leading_terms(self):
        v = tail_expansion(-1, 20.0, order=0)
        assert v.log_magnitude == pytest.approx(-400 - math.log(math.pi * 2 * 400), rel=1e-15)
        v = tail_expansion(2, 15.0, order=0)
        assert v.value == pytest.approx(2 * normal_pdf(15.0) / 15.0, rel=1e-14)

    @pytest.mark.parametrize("lam", (1.0, -1.0, 2.0, -3.0))
    def test_relative_error_decays_like_x_minus_4(self, lam):
        xs = np.geomspace(10, 40, 25)
        err = [
            abs(math.expm1(tail_expansion(lam, x, 1).log_magnitude - survival(lam, x).value.log_magnitude))
            for x in xs
        ]
        slope = np.polyfit(np.log(xs), np.log(err), 1)[0]
        assert slope <= -3.5

    def test_errors(self):
        with pytest.raises(RegimeError):
            tail_expansion(0, 5.0)
        with pytest.raises(DomainError):
            tail_expansion(1, -1.0)


def _ks(sample_values, cdf_fn):
    z = np.sort(sample_values)
    m = z.size
    f = cdf_fn(z)
    i = np.arange(1, m + 1)
    return max(np.max(i / m - f), np.max(f - (i - 1) / m))


class TestSample:
    def test_deterministic(self):
        assert np.array_equal(sample(1, 100, 5), sample(1, 100, 5))
        assert not np.array_equal(sample(1, 100, 5), sample(1, 100, 6))

    def test_empty(self):
        assert sample(1, 0, 1).size == 0

    def test_normal_within_dkw_band(self):
        m = 10**6
        eps = math.sqrt(math.log(2 / 1e-6) / (2 * m))
        assert _ks(sample(0, m, 20241), stats.norm.cdf) < eps

    def test_skewness_sign(self):
        assert stats.skew(sample(1, 10**6, 3)) > 0
        assert stats.skew(sample(-1, 10**6, 3)) < 0

    def test_reflection(self):
        a = sample(1, 10**6, 11)
        b = -sample(-1, 10**6, 12)
        assert stats.ks_2samp(a, b).statistic < 0.003

    def test_matches_cdf(self):
        m = 10**5
        eps = math.sqrt(math.log(2 / 1e-6) / (2 * m))
        for lam in (-2.0, 0.7):
            assert _ks(sample(lam, m, 8), lambda z: stats.skewnorm.cdf(z, lam)) < eps
