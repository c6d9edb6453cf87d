import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from legapprox.bestapprox import remez_best
from legapprox.bounds import (
    BoundReport,
    cheb_analytic_bound,
    cheb_bv_bound,
    chebyshev_lebesgue_estimate,
    ellipse_max_abs,
    lebesgue_asymptotic,
    lebesgue_constant,
    leg_bound_constant,
    leg_coeff_bound,
    leg_projection_bound,
    projection_vs_best_bound,
    tail_sum_bound,
    total_variation,
)
from legapprox.closedforms import RHO_RECIPROCAL, reciprocal_coeff
from legapprox.errors import DomainError
from legapprox.projections import FunctionSpec, chebyshev_coeffs, legendre_coeffs, max_error
from legapprox.specfun import BernsteinEllipse

# 30-digit adaptive quadrature of ((n+1)/2) int |P_n^(1,0)| with mpmath
LEBESGUE = {
    1: 5.0 / 3.0,
    2: 2.17575507653592548713,
    5: 3.32253978860494331775,
    10: 4.70717384757146124398,
    50: 10.8115243925338140659,
}


def recip(x):
    return 1.0 / (x - 2.0)


def runge(x):
    return 1.0 / (1.0 + 4.0 * x * x)


class TestBoundReport:
    def test_margin_and_tolerance(self):
        r = BoundReport("b", 1.0).against(1.05, tolerance=0.1)
        assert r.margin == pytest.approx(-0.05)
        assert r.satisfied
        assert not BoundReport("b", 1.0).against(1.05).satisfied
        assert BoundReport("b", 1.0).satisfied is None

    def test_rejects_negative_or_nan(self):
        with pytest.raises(DomainError):
            BoundReport("b", -1.0)
        with pytest.raises(DomainError):
            BoundReport("b", math.nan)


class TestAnalyticBounds:
    def test_constant_values(self):
        assert leg_bound_constant(2.0, 1.0) == pytest.approx(2.34562868113177188, rel=1e-13)
        assert leg_projection_bound(2.0, 1.0, 0) == pytest.approx(4.69125736226354376, rel=1e-13)
        assert leg_coeff_bound(2.0, 1.0, 0) == pytest.approx(0.5 * 2.34562868113177188, rel=1e-13)
        assert cheb_analytic_bound(3.0, 2.0, 4) == pytest.approx(6.0 / 16.0, rel=1e-15)

    def test_ellipse_maximum(self):
        # |1/(z - 2)| peaks where the ellipse meets the real axis nearest the pole
        e = BernsteinEllipse(2.0)
        assert ellipse_max_abs(recip, e) == pytest.approx(1 / (2 - e.semi_major), rel=1e-12)

    def test_legendre_coefficients_dominated(self):
        rho = 0.99 * RHO_RECIPROCAL
        m = ellipse_max_abs(recip, rho)
        for k in range(0, 80):
            assert abs(reciprocal_coeff(k)) <= leg_coeff_bound(rho, m, k)

    @pytest.mark.parametrize("n", [0, 3, 8, 15])
    def test_projection_errors_dominated(self, n):
        rho = 0.95 * RHO_RECIPROCAL
        m = ellipse_max_abs(recip, rho)
        err_p = max_error(recip, legendre_coeffs(recip, n))
        err_t = max_error(recip, chebyshev_coeffs(recip, n))
        assert err_p <= leg_projection_bound(rho, m, n)
        assert err_t <= cheb_analytic_bound(m, rho, n)

    @given(st.floats(1.01, 1.6), st.integers(0, 40))
    def test_runge_chebyshev_bound(self, rho, n):
        m = ellipse_max_abs(runge, rho)
        assert max_error(runge, chebyshev_coeffs(runge, n)) <= cheb_analytic_bound(m, rho, n)

    def test_reciprocal_chebyshev_errors_dominated(self):
        m = ellipse_max_abs(recip, 3.7)
        c = chebyshev_coeffs(recip, 30)
        for n in range(31):
            assert max_error(recip, c.truncate(n)) <= cheb_analytic_bound(m, 3.7, n)

    def test_optimal_rate_has_no_extra_power_of_n(self):
        full = legendre_coeffs(recip, 60)
        scaled = [max_error(recip, full.truncate(n)) * RHO_RECIPROCAL**n / math.sqrt(n + 1) for n in range(10, 21)]
        assert max(scaled) / min(scaled) < 1.1

    @given(st.floats(0.1, 10), st.floats(1.01, 5), st.integers(0, 30), st.floats(1.01, 3))
    def test_monotone_in_size(self, m, rho, n, scale):
        assert cheb_analytic_bound(m * scale, rho, n) > cheb_analytic_bound(m, rho, n) > 0
        assert leg_projection_bound(rho, m * scale, n) > leg_projection_bound(rho, m, n) > 0
        assert cheb_bv_bound(m * scale, 1, n + 2) > cheb_bv_bound(m, 1, n + 2) > 0

    @pytest.mark.parametrize("rho", [1.0, 0.5])
    def test_rho_must_exceed_one(self, rho):
        with pytest.raises(DomainError):
            cheb_analytic_bound(1.0, rho, 3)


class TestVariationBounds:
    def test_abs_chebyshev(self):
        f = FunctionSpec(np.abs, (0.0,))
        for n in (4, 10, 30):
            assert max_error(f, chebyshev_coeffs(f, n)) <= cheb_bv_bound(2.0, 1, n)

    def test_values(self):
        assert cheb_bv_bound(1.0, 1, 3) == pytest.approx(1 / math.pi, rel=1e-15)
        assert cheb_bv_bound(math.pi, 1, 2) == pytest.approx(2.0, rel=1e-15)

    def test_abs_sin_chebyshev(self):
        pi5 = math.pi / 5
        f = FunctionSpec(lambda x: np.abs(np.sin(5 * x)), (-pi5, 0.0, pi5))
        v = total_variation(lambda x: 5 * np.cos(5 * x) * np.sign(np.sin(5 * x)), (-pi5, 0.0, pi5))
        c = chebyshev_coeffs(f, 100)
        for n in range(2, 101):
            assert max_error(f, c.truncate(n)) <= cheb_bv_bound(v, 1, n)

    def test_domain(self):
        with pytest.raises(DomainError):
            cheb_bv_bound(1.0, 0, 5)
        with pytest.raises(DomainError):
            cheb_bv_bound(1.0, 3, 3)

    def test_total_variation_of_known_functions(self):
        assert total_variation(np.sign, (0.0,)) == pytest.approx(2.0, abs=1e-9)
        assert total_variation(np.sin) == pytest.approx(2 * math.sin(1.0), rel=1e-9)

    def test_variation_of_derivative_of_abs_sin(self):
        # 5 cos(5x) sgn(sin 5x): three jumps of 10 plus smooth variation 10 (1 + cos 5) + 20
        pi5 = math.pi / 5

        def deriv(x):
            return 5 * np.cos(5 * x) * np.sign(np.sin(5 * x))

        expected = 10 * (3 + math.cos(5.0)) + 30
        assert total_variation(deriv, (-pi5, 0.0, pi5)) == pytest.approx(expected, rel=1e-6)

    def test_tail_sum(self):
        c = np.array([1.0, -0.5, 0.25, -0.125])
        assert tail_sum_bound(c, 1) == pytest.approx(0.375)
        assert tail_sum_bound(c, 3) == 0.0


class TestLebesgueConstant:
    def test_degree_zero(self):
        assert lebesgue_constant(0) == 1.0

    @pytest.mark.parametrize("n", sorted(LEBESGUE))
    def test_values(self, n):
        assert lebesgue_constant(n) == pytest.approx(LEBESGUE[n], rel=1e-12)

    def test_square_root_growth(self):
        ratios = [lebesgue_constant(n) / lebesgue_asymptotic(n) for n in (100, 200, 400)]
        assert all(0.95 < r < 1.0 for r in ratios)
        assert ratios == sorted(ratios)

    def test_increasing(self):
        vals = [lebesgue_constant(n) for n in range(0, 60)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_exceeds_chebyshev_estimate_eventually(self):
        assert lebesgue_constant(100) > chebyshev_lebesgue_estimate(100)

    def test_range(self):
        with pytest.raises(DomainError):
            lebesgue_constant(501)

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_projection_within_lebesgue_factor_of_best(self, n):
        f = FunctionSpec(np.abs, (0.0,))
        best = remez_best(f, n).levelled_error
        assert max_error(f, legendre_coeffs(f, n)) <= projection_vs_best_bound(best, n)

    def test_log_projection_within_lebesgue_factor_of_best(self):
        def f(x):
            return np.log(1.2 + x)

        best = remez_best(f, 20).levelled_error
        assert max_error(f, legendre_coeffs(f, 20)) <= projection_vs_best_bound(best, 20)
        assert projection_vs_best_bound(best, 0) == 2 * best
        assert projection_vs_best_bound(0.0, 20) == 0.0

    def test_projection_vs_best_rejects_negative(self):
        with pytest.raises(DomainError):
            projection_vs_best_bound(-1.0, 3)
