"""Acceptance criteria, one test (or a few) per criterion at its stated tolerance.

A summary with one line per criterion is printed at the end of the run. Criteria
that cannot be met in double precision are strict xfails and are reported as FAIL.
"""

import math
import time

import numpy as np
import pytest

from legapprox.bestapprox import equioscillation_check, remez_best
from legapprox.bounds import ellipse_max_abs, lebesgue_constant, leg_projection_bound
from legapprox.closedforms import (
    RHO_RECIPROCAL,
    endpoint_fractional_coeff,
    interior_fractional_coeff,
    leg_cheb_coeff_ratio,
    reciprocal_coeff,
)
from legapprox.errors import ConvergenceError
from legapprox.harness import catalog, get_entry, sweep
from legapprox.peano import error_representation, peano_properties_report
from legapprox.polybasis import LEGENDRE, dirichlet_kernel_cd, dirichlet_kernel_sum, legendre_batch
from legapprox.projections import (
    FractionalEndpoint,
    FractionalInterior,
    FunctionSpec,
    SeriesCoeffs,
    assessment_grid,
    chebyshev_coeffs,
    eval_series,
    legendre_coeffs,
    max_error,
    tail_max_error,
)
from legapprox.quadrature import gauss_legendre_rule

criterion = pytest.mark.criterion


class Timer:
    def __init__(self):
        self.elapsed = 0.0

    def __enter__(self):
        self._t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed += time.perf_counter() - self._t


_SWEEPS = {}


def cached_sweep(key, n_min, n_max, stride, window):
    """Sweeps shared between criteria, with the time each one took."""
    k = (key, n_min, n_max, stride, window)
    if k not in _SWEEPS:
        with Timer() as t:
            rep = sweep(key, n_min, n_max, stride, window)
        _SWEEPS[k] = (rep, t.elapsed)
    return _SWEEPS[k]


# --- 1 ----------------------------------------------------------------------------


@criterion(1, "Legendre orthogonality to 1e-12 for n, m <= 50")
def test_orthogonality(note):
    with Timer() as t:
        rule = gauss_legendre_rule(52)
        p = legendre_batch(50, rule.nodes)
        gram = (p * rule.weights) @ p.T
        exact = np.diag(2.0 / (2 * np.arange(51) + 1))
        worst = float(np.max(np.abs(gram - exact)))
    note(f"max deviation {worst:.2e}, {t.elapsed:.2f} s")
    assert worst < 1e-12
    assert t.elapsed < 5


# --- 2 ----------------------------------------------------------------------------


@criterion(2, "Dirichlet kernel: sum vs Christoffel-Darboux to 1e-9, |D_n| <= (n+1)^2/2")
def test_dirichlet_kernel(note):
    rng = np.random.default_rng(0)
    worst_diff, worst_ratio = 0.0, 0.0
    with Timer() as t:
        for n in range(101):
            x, y = rng.uniform(-1, 1, (2, 10_000))
            s = dirichlet_kernel_sum(n, x, y)
            c = dirichlet_kernel_cd(n, x, y)
            worst_diff = max(worst_diff, float(np.max(np.abs(s - c))))
            worst_ratio = max(worst_ratio, float(np.max(np.abs(s))) / ((n + 1) ** 2 / 2))
    note(f"max |sum - cd| {worst_diff:.2e}, max |D_n| / bound {worst_ratio:.3f}, {t.elapsed:.1f} s")
    assert worst_diff < 1e-9
    assert worst_ratio <= 1 + 1e-12
    assert t.elapsed < 10


# --- 3 ----------------------------------------------------------------------------

K3 = np.arange(51)


@pytest.fixture(scope="module")
def quadrature_coeffs():
    with Timer() as t:
        out = {
            "reciprocal": legendre_coeffs(lambda x: 1.0 / (x - 2.0), 50).coeffs,
            "interior": legendre_coeffs(
                FunctionSpec(lambda x: np.abs(x - 0.5) ** 2.5, (0.5,), FractionalInterior(2.5, 0.5)), 50
            ).coeffs,
        }
        for alpha in (1.5, 2.5):
            f = FunctionSpec(lambda x, a=alpha: (1.0 + x) ** a, (), FractionalEndpoint(alpha, "plus"))
            out[alpha] = legendre_coeffs(f, 50).coeffs
    return out, t.elapsed


def worst_relative(computed, exact):
    exact = np.asarray(exact)
    nz = exact != 0
    return float(np.max(np.abs(computed[nz] - exact[nz]) / np.abs(exact[nz])))


@criterion(3, "closed-form coefficients match quadrature for k <= 50")
def test_interior_fractional_closed_form(quadrature_coeffs, note):
    coeffs, elapsed = quadrature_coeffs
    exact = [interior_fractional_coeff(2.5, 0.5, k) for k in K3]
    rel = worst_relative(coeffs["interior"], exact)
    note(f"|x-1/2|^(5/2): max relative difference {rel:.1e} (tol 1e-9), quadrature {elapsed:.1f} s")
    assert rel < 1e-9
    assert elapsed < 30


@criterion(3, "closed-form coefficients match quadrature for k <= 50")
def test_endpoint_three_halves_closed_form(quadrature_coeffs, note):
    exact = [endpoint_fractional_coeff(1.5, "plus", k) for k in K3]
    rel = worst_relative(quadrature_coeffs[0][1.5], exact)
    note(f"(1+x)^(3/2): max relative difference {rel:.1e} (tol 1e-8)")
    assert rel < 1e-8


@criterion(3, "closed-form coefficients match quadrature for k <= 50")
@pytest.mark.xfail(
    strict=True,
    reason="(1+x)^(5/2): a_k falls to ~2e-9 by k = 50 while quadrature in double precision "
    "leaves an absolute floor of 1e-16 to 1e-15 on each coefficient, so 1e-8 relative fails from k ~ 36",
)
def test_endpoint_five_halves_closed_form(quadrature_coeffs, note):
    coeffs = quadrature_coeffs[0][2.5]
    exact = [endpoint_fractional_coeff(2.5, "plus", k) for k in K3]
    note(f"(1+x)^(5/2): max relative difference {worst_relative(coeffs, exact):.1e} (tol 1e-8)")
    assert worst_relative(coeffs, exact) < 1e-8


@criterion(3, "closed-form coefficients match quadrature for k <= 50")
@pytest.mark.xfail(
    strict=True,
    reason="1/(x-2): a_k ~ (2+sqrt 3)^-k reaches 1.6e-11 at k = 20 and 1.8e-28 at k = 50, "
    "below the ~1e-17 absolute rounding floor of quadrature, so 1e-11 relative fails from k ~ 12",
)
def test_reciprocal_closed_form(quadrature_coeffs, note):
    coeffs = quadrature_coeffs[0]["reciprocal"]
    exact = [reciprocal_coeff(k) for k in K3]
    note(f"1/(x-2): max relative difference {worst_relative(coeffs, exact):.1e} (tol 1e-11)")
    assert worst_relative(coeffs, exact) < 1e-11


@criterion(3, "closed-form coefficients match quadrature for k <= 50")
def test_closed_forms_agree_where_quadrature_resolves_them(quadrature_coeffs, note):
    """The two shortfalls above are rounding in the quadrature, not errors in the closed forms.

    Each closed form matches 30-digit reference values at large k, and the quadrature
    agrees with it to the double-precision floor on the absolute scale.
    """
    coeffs = quadrature_coeffs[0]
    assert reciprocal_coeff(50) == pytest.approx(-1.765494453364094e-28, rel=1e-12)
    assert endpoint_fractional_coeff(2.5, "plus", 50) == pytest.approx(-2.411274577478712e-9, rel=1e-12)
    recip_abs = float(np.max(np.abs(coeffs["reciprocal"] - [reciprocal_coeff(k) for k in K3])))
    endp_abs = float(np.max(np.abs(coeffs[2.5] - [endpoint_fractional_coeff(2.5, "plus", k) for k in K3])))
    recip_rel_low = worst_relative(coeffs["reciprocal"][:12], [reciprocal_coeff(k) for k in range(12)])
    note(f"absolute differences: 1/(x-2) {recip_abs:.1e}, (1+x)^(5/2) {endp_abs:.1e}; "
         f"1/(x-2) relative for k < 12 {recip_rel_low:.1e}")
    floor = 16 * np.finfo(float).eps
    assert recip_abs < floor * np.max(np.abs(coeffs["reciprocal"]))
    assert endp_abs < floor * np.max(np.abs(coeffs[2.5]))
    assert recip_rel_low < 1e-11


# --- 4 ----------------------------------------------------------------------------

RHO4 = 0.99 * RHO_RECIPROCAL
# pilot values of err * rho_hat^n / sqrt(n + 1) for n in [10, 40] ran 0.3634 to 0.3702
BRACKET4 = (0.36, 0.375)


@criterion(4, "analytic sandwich and sharpness for 1/(x-2), n <= 40")
def test_analytic_sandwich(note):
    with Timer() as t:
        f = lambda x: 1.0 / (x - 2.0)  # noqa: E731
        full = SeriesCoeffs(LEGENDRE, np.array([reciprocal_coeff(k) for k in range(121)]))
        m = ellipse_max_abs(f, RHO4)
        # the tail of the exact expansion keeps full relative accuracy below eps
        measured = np.array([tail_max_error(full, n) for n in range(41)])
        direct = np.array([max_error(f, full.truncate(n)) for n in range(21)])
        lower = np.abs(full.coeffs[1:42])
        upper = np.array([leg_projection_bound(RHO4, m, n) for n in range(41)])
        n = np.arange(10, 41)
        scaled = measured[10:] * RHO_RECIPROCAL**n / np.sqrt(n + 1)
    note(f"lower/measured max {np.max(lower / measured):.3f}, measured/bound max {np.max(measured / upper):.2e}, "
         f"scaled error in [{scaled.min():.4f}, {scaled.max():.4f}], {t.elapsed:.1f} s")
    # direct sampling of f - P_n f bottoms out near 1e-16 absolute
    np.testing.assert_allclose(measured[:21], direct, rtol=1e-9, atol=1e-15)
    assert np.all(lower <= measured)
    assert np.all(measured <= upper)
    assert BRACKET4[0] <= scaled.min() and scaled.max() <= BRACKET4[1]
    assert t.elapsed < 60


# --- 5 ----------------------------------------------------------------------------


@criterion(5, "analytic family: R^T in [0.55, 0.75], sqrt(n) R^P varies < 15%, n in [15, 30]")
@pytest.mark.parametrize("key", ["exp_x5", "ln", "runge"])
def test_analytic_ratios(key, note):
    rep, elapsed = cached_sweep(key, 15, 30, 1, (15, 30))
    rt = np.array(rep.ratio_T)
    scaled = np.array(rep.scaled_ratio_P)
    variation = (scaled.max() - scaled.min()) / scaled.min()
    note(f"R^T in [{rt.min():.3f}, {rt.max():.3f}], sqrt(n) R^P variation {variation:.1%}, {elapsed:.1f} s")
    assert rep.flagged == []
    assert np.all((0.55 <= rt) & (rt <= 0.75))
    assert variation < 0.15
    assert elapsed < 100


# --- 6 ----------------------------------------------------------------------------


@criterion(6, "differentiable family: slope_P and pairwise slope agreement, n in [40, 100]")
@pytest.mark.parametrize("key, target, tol", [("pospart3", -3.0, 0.2), ("abs_sin5x", -1.0, 0.15)])
def test_differentiable_rates(key, target, tol, note):
    rep, elapsed = cached_sweep(key, 40, 100, 2, (40, 100))
    slopes = {name: getattr(rep, f"slope_{name}")[0] for name in "PTB"}
    note(", ".join(f"slope_{k} {v:.3f}" for k, v in slopes.items()) + f", {elapsed:.1f} s")
    assert rep.flagged == []
    assert slopes["P"] == pytest.approx(target, abs=tol)
    for a in "PTB":
        for b in "PTB":
            assert abs(slopes[a] - slopes[b]) <= 0.2
    assert elapsed < 300


# --- 7 ----------------------------------------------------------------------------

FRACTIONAL = ["interior_5_2", "interior_5_4", "interior_2_3", "endpoint_5_2", "cap_3_2", "arccos"]
SLOPE_TARGETS = {
    "interior_5_2": (-2.5, 0.15),
    "interior_5_4": (-1.25, 0.15),
    "interior_2_3": (-2.0 / 3.0, 0.15),
    "endpoint_5_2": (-5.0, 0.3),
}


@criterion(7, "fractional families: slope_P and ratio windows, n in [60, 100]")
@pytest.mark.parametrize("key", FRACTIONAL)
def test_fractional_families(key, note):
    entry = get_entry(key)
    rep, elapsed = cached_sweep(key, 60, 100, 2, (60, 100))
    slope = rep.slope_P[0]
    windows = entry.expected_ratio_window
    rp, rt = np.array(rep.ratio_P), np.array(rep.ratio_T)
    note(f"slope_P {slope:.3f}, R^P in [{rp.min():.3f}, {rp.max():.3f}] vs {windows['P']}, "
         f"R^T in [{rt.min():.3f}, {rt.max():.3f}] vs {windows['T']}, {elapsed:.1f} s")
    assert rep.flagged == []
    if key in SLOPE_TARGETS:
        target, tol = SLOPE_TARGETS[key]
        assert slope == pytest.approx(target, abs=tol)
    for ratios, name in ((rp, "P"), (rt, "T")):
        lo, hi = windows[name]
        assert np.all((lo <= ratios) & (ratios <= hi))
    assert elapsed < 100


# --- 8 ----------------------------------------------------------------------------


@criterion(8, "Lebesgue constant: Lambda_200 / sqrt(200) = 1.5958 +- 0.15, Lambda_0 = 1")
def test_lebesgue_constant(note):
    lebesgue_constant.cache_clear()
    with Timer() as t:
        lam0 = lebesgue_constant(0)
        ratio = lebesgue_constant(200) / math.sqrt(200)
    note(f"Lambda_200 / sqrt(200) = {ratio:.4f}, {t.elapsed:.2f} s")
    assert lam0 == pytest.approx(1.0, abs=1e-12)
    assert ratio == pytest.approx(2**1.5 / math.sqrt(math.pi), abs=0.15)
    assert t.elapsed < 30


# --- 9 ----------------------------------------------------------------------------

CERTIFICATE_DEGREES = {
    "Fig1": range(15, 31),
    "Fig2": range(40, 101, 2),
    "Fig3": (50, 100),
    "Fig4": range(60, 101, 2),
    "Fig5": range(60, 101, 2),
}


@criterion(9, "Remez certificates")
def test_known_minimax_errors(note):
    abs_fn = FunctionSpec(np.abs, (0.0,))
    r1 = remez_best(abs_fn, 1)
    r2 = remez_best(lambda x: x**3, 2)
    note(f"B_1(|x|) level {r1.levelled_error:.16g}, B_2(x^3) level {r2.levelled_error:.16g}")
    assert r1.levelled_error == pytest.approx(0.5, abs=1e-8)
    np.testing.assert_allclose(r1.reference, [-1.0, 0.0, 1.0], atol=1e-8)
    assert r2.levelled_error == pytest.approx(0.25, abs=1e-10)


@criterion(9, "Remez certificates")
def test_equioscillation_over_catalog(note):
    converged, limited, failed = 0, 0, []
    with Timer() as t:
        for entry in catalog():
            f = entry.spec
            grid = assessment_grid(f.breakpoints)
            for n in CERTIFICATE_DEGREES[entry.figure_tag]:
                try:
                    r = remez_best(f, n, grid)
                except ConvergenceError:
                    failed.append((entry.key, n, "no convergence"))
                    continue
                rep = equioscillation_check(f, r)
                if r.converged:
                    converged += 1
                    if not rep.passed:
                        failed.append((entry.key, n, rep.level_spread))
                else:
                    # level agreement is beyond double precision here, alternation is not
                    limited += 1
                    if rep.alternation != rep.required:
                        failed.append((entry.key, n, rep.signs))
    note(f"{converged} converged runs certified, {limited} rounding-limited runs alternate fully, {t.elapsed:.0f} s")
    assert failed == []
    assert t.elapsed < 120


# --- 10 ---------------------------------------------------------------------------


@criterion(10, "Peano kernel properties, decay slope and error representation")
@pytest.mark.parametrize("m, n", [(2, 20), (3, 30)])
def test_peano_properties(m, n, note):
    with Timer() as t:
        rep = peano_properties_report(m, n)
    note(f"endpoint {rep.endpoint_max:.1e}, orthogonality {rep.orthogonality_max:.1e}, "
         f"derivative {rep.derivative_residual_max:.1e}, {t.elapsed:.1f} s")
    assert rep.endpoint_max < 1e-8
    assert rep.orthogonality_max < 1e-8
    assert rep.derivative_residual_max < 1e-8


@criterion(10, "Peano kernel properties, decay slope and error representation")
def test_peano_decay_slope(note):
    rep = peano_properties_report(2, 20, sweep=range(16, 97, 8))
    note(f"sup|K_2| slope {rep.decay_slope:.3f} over n in [16, 96]")
    assert rep.decay_slope == pytest.approx(-1.0, abs=0.2)


@criterion(10, "Peano kernel properties, decay slope and error representation")
def test_error_representation(note):
    xs = np.array([-0.83, -0.31, 0.05, 0.42, 0.97])
    worst = 0.0
    with Timer() as t:
        for n in range(1, 41):
            proj = legendre_coeffs(lambda x: np.sin(2 * x), n)
            direct = np.sin(2 * xs) - eval_series(proj, xs)
            rep = error_representation(lambda s: -4.0 * np.sin(2 * s), 2, n, xs)
            worst = max(worst, float(np.max(np.abs(rep - direct))))
    note(f"max |representation - (f - P_n f)| {worst:.1e} over n <= 40, {t.elapsed:.1f} s")
    assert worst < 1e-8
    assert t.elapsed < 300


# --- 11 ---------------------------------------------------------------------------


@criterion(11, "a_200 / c_200 for (1+x)^(5/2) within 2% of 15 pi / 16")
def test_legendre_chebyshev_coefficient_ratio(note):
    f = FunctionSpec(lambda x: (1.0 + x) ** 2.5, (), FractionalEndpoint(2.5, "plus"))
    with Timer() as t:
        a = legendre_coeffs(f, 200).coeffs[200]
        c = chebyshev_coeffs(f, 200).coeffs[200]
    limit = leg_cheb_coeff_ratio(2.5)
    note(f"a_200 / c_200 = {a / c:.5f}, {a / c / limit:.4f} of the limit, {t.elapsed:.2f} s")
    assert limit == pytest.approx(15 * math.pi / 16, rel=1e-14)
    assert a / c == pytest.approx(limit, rel=0.02)
    assert t.elapsed < 30
