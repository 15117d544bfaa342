import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen
from snextremes.special import (
    BRANCH_POINT,
    DomainError,
    LogScaledValue,
    lambert_w0,
    lambert_w0_from_log,
    normal_cdf,
    normal_mills_bracket,
    normal_pdf,
    normal_pdf_log,
    normal_survival,
    owen_t,
)

finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestLogScaledValue:
    def test_roundtrip(self):
        for v in (3.5, -2.0, 1e-300, 0.0):
            assert LogScaledValue.from_float(v).value == pytest.approx(v, rel=1e-15)

    def test_zero_sign(self):
        z = LogScaledValue.from_float(0.0)
        assert z.sign == 0 and z.log_magnitude == -math.inf

    def test_nonzero_needs_finite_log(self):
        with pytest.raises(ValueError):
            LogScaledValue(math.inf, 1)
        with pytest.raises(ValueError):
            LogScaledValue(0.0, 2)

    def test_ordering_handles_signs_and_underflow(self):
        tiny = LogScaledValue(-2000.0, 1)
        tinier = LogScaledValue(-3000.0, 1)
        neg = LogScaledValue(-1.0, -1)
        assert tinier < tiny
        assert neg < LogScaledValue.from_float(0.0) < tinier
        assert LogScaledValue(5.0, -1) < LogScaledValue(1.0, -1)

    def test_scale(self):
        assert LogScaledValue(1.0).scale(2.0).log_magnitude == 3.0


class TestNormal:
    def test_pdf_at_zero(self):
        assert normal_pdf(0.0) == pytest.approx(0.3989422804014327, rel=1e-16)

    def test_pdf_at_ten(self):
        assert normal_pdf(10.0) == pytest.approx(frozen.NORMAL_PDF_10, rel=1e-14)

    def test_pdf_log_form(self):
        assert normal_pdf_log(40.0).value == pytest.approx(normal_pdf(40.0), rel=1e-14)
        assert normal_pdf_log(60.0).log_magnitude == pytest.approx(-1800 - 0.5 * math.log(2 * math.pi))

    @given(finite)
    def test_pdf_symmetric(self, x):
        assert normal_pdf(x) == normal_pdf(-x)

    def test_cdf_at_zero(self):
        assert normal_cdf(0.0) == 0.5

    def test_cdf_plus_survival(self):
        for x in np.linspace(-8, 8, 161):
            assert abs(normal_cdf(x) + normal_survival(x).value - 1.0) <= 1e-15

    def test_survival_far_tail(self):
        got = normal_survival(40.0).log_magnitude
        assert got == pytest.approx(frozen.NORMAL_LOG_SF_40, rel=1e-12)

    def test_survival_inside_mills_bracket(self):
        for x in np.geomspace(0.5, 50, 400):
            lo, up = normal_mills_bracket(x)
            s = normal_survival(x)
            assert lo < s < up

    def test_mills_bracket_domain(self):
        with pytest.raises(DomainError):
            normal_mills_bracket(0.0)

    def test_cdf_derivative_matches_pdf(self):
        h = 1e-5
        for x in np.linspace(-6, 6, 121):
            fd = (normal_cdf(x + h) - normal_cdf(x - h)) / (2 * h)
            assert abs(fd - normal_pdf(x)) <= 1e-8

    def test_non_finite_rejected(self):
        for f in (normal_pdf, normal_cdf, normal_survival):
            with pytest.raises(DomainError):
                f(math.nan)


class TestOwenT:
    def test_zero_a(self):
        assert owen_t(1.3, 0.0) == 0.0

    def test_zero_h(self):
        for a in (0.3, 1.0, 7.0):
            assert owen_t(0.0, a) == pytest.approx(math.atan(a) / (2 * math.pi), abs=1e-15)

    def test_reference_point(self):
        assert abs(owen_t(1.5, 2.0) - frozen.OWEN_T_1_5_2) <= 1e-12

    def test_grid(self):
        for (h, a), ref in frozen.OWEN_T_GRID.items():
            assert abs(owen_t(h, a) - ref) <= 1e-12, (h, a)

    @given(st.floats(-10, 10), st.floats(-50, 50))
    @settings(max_examples=60)
    def test_symmetries_and_range(self, h, a):
        t = owen_t(h, a)
        assert owen_t(h, -a) == -t
        assert owen_t(-h, a) == t
        assert -0.25 <= t <= 0.25

    def test_decreasing_in_h(self):
        for a in (0.5, 1.0, 4.0):
            vals = [abs(owen_t(h, a)) for h in np.linspace(0, 6, 61)]
            assert all(b < c for b, c in zip(vals[1:], vals))


class TestLambertW:
    def test_fixed_points(self):
        assert lambert_w0(0.0) == 0.0
        assert lambert_w0(math.e) == pytest.approx(1.0, rel=1e-15)
        assert lambert_w0(BRANCH_POINT) == -1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            lambert_w0(-0.5)

    def test_large_argument(self):
        w = lambert_w0(1e12)
        assert abs(w * math.exp(w) - 1e12) <= 1e-12 * 1e12

    def test_residuals_log_spaced(self):
        for x in np.concatenate([-np.geomspace(1e-300, 0.36, 200), np.geomspace(1e-300, 1e300, 800)]):
            w = lambert_w0(x)
            assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))

    def test_inverts_w_exp_w(self):
        for w in np.linspace(-1, 700, 2001)[1:]:
            assert lambert_w0(w * math.exp(w)) == pytest.approx(w, rel=1e-10, abs=1e-12)

    def test_monotone(self):
        xs = np.concatenate([np.linspace(BRANCH_POINT, 1, 500), np.geomspace(1.01, 1e200, 500)])
        ws = [lambert_w0(x) for x in xs]
        assert all(a < b for a, b in zip(ws, ws[1:]))

    def test_from_log_matches(self):
        for lx in np.linspace(-20, 600, 200):
            assert lambert_w0_from_log(lx) == pytest.approx(lambert_w0(math.exp(lx)), rel=1e-14)

    def test_from_log_beyond_double_range(self):
        w = lambert_w0_from_log(2000.0)
        assert w + math.log(w) == pytest.approx(2000.0, rel=1e-15)
