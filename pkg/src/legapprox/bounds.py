"""Computable error and coefficient bounds, and the Lebesgue constant of P_n."""

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .polybasis import jacobi_eval
from .quadrature import gauss_legendre_rule
from .specfun import BernsteinEllipse, ellipse_circumference

ELLIPSE_SAMPLES = 4096
LEBESGUE_MAX_DEGREE = 500


@dataclass(frozen=True)
class BoundReport:
    """A bound value, the parameters it was evaluated at, and optionally a measurement."""

    name: str
    value: float
    params: dict = field(default_factory=dict)
    measured: float | None = None
    tolerance: float = 0.0

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"bound {self.name} evaluated to {self.value}")

    @property
    def margin(self):
        return None if self.measured is None else self.value - self.measured

    @property
    def satisfied(self):
        return None if self.measured is None else self.margin >= -self.tolerance

    def against(self, measured, tolerance=0.0):
        return replace(self, measured=float(measured), tolerance=float(tolerance))


def _ellipse(e):
    return e if isinstance(e, BernsteinEllipse) else BernsteinEllipse(float(e))


def _check_rho(rho):
    if not rho > 1.0:
        raise DomainError(f"rho must exceed 1, got {rho}")


def ellipse_max_abs(f, e, samples=ELLIPSE_SAMPLES):
    """max |f| over sampled boundary points of a Bernstein ellipse (f must accept complex)."""
    z = _ellipse(e).boundary(samples)
    return float(np.max(np.abs(f(z))))


def cheb_analytic_bound(M, rho, n):
    """2M / (rho^n (rho - 1)): Chebyshev projection error for f analytic in E_rho, |f| <= M."""
    _check_rho(rho)
    return 2.0 * M / (rho**n * (rho - 1.0))


def cheb_bv_bound(V, m, n):
    """2V / (pi m (n - m)^m): Chebyshev projection error when f^(m) has variation V."""
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    if n <= m:
        raise DomainError(f"need n > m, got n={n}, m={m}")
    return 2.0 * V / (math.pi * m * (n - m) ** m)


def leg_bound_constant(e, M):
    """D(rho) = 2 L(E_rho) M / (pi sqrt(rho^2 - 1)), L the ellipse perimeter."""
    e = _ellipse(e)
    _check_rho(e.rho)
    return 2.0 * ellipse_circumference(e) * M / (math.pi * math.sqrt(e.rho**2 - 1.0))


def leg_coeff_bound(e, M, k):
    """Bound on |a_k|: D/2 for k = 0, D sqrt(k) rho^-k otherwise."""
    e = _ellipse(e)
    d = leg_bound_constant(e, M)
    if k == 0:
        return 0.5 * d
    return d * math.sqrt(k) * e.rho**-k


def leg_projection_bound(e, M, n):
    """(D / rho^n) [sqrt(n+1)/(rho-1) + 1/(sqrt(n+1) (rho-1)^2)] on the Legendre projection error."""
    e = _ellipse(e)
    d = leg_bound_constant(e, M)
    r = e.rho
    s = math.sqrt(n + 1.0)
    return d * r**-n * (s / (r - 1.0) + 1.0 / (s * (r - 1.0) ** 2))


def tail_sum_bound(coeffs, n):
    """sum_{k > n} |coeffs[k]|, the max-norm bound that follows from |P_k| <= 1."""
    c = np.asarray(getattr(coeffs, "coeffs", coeffs), dtype=float)
    return float(np.sum(np.abs(c[n + 1 :])))


def chebyshev_lebesgue_estimate(n):
    """(4/pi^2) log n + 4, the classical upper estimate for the Chebyshev projection."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return 4.0 / math.pi**2 * math.log(n) + 4.0


def _jacobi10_roots(n):
    """Zeros of P_n^(1,0) by Newton's method from asymptotic starting points.

    The derivative is (n + 2)/2 P_{n-1}^(2,1). Raises ConvergenceError unless the
    iteration settles on n strictly increasing roots inside (-1, 1).
    """
    j = np.arange(1, n + 1)
    theta = (j + 0.25) * np.pi / (n + 1.0)  # alpha = 1, beta = 0
    x = np.sort(np.cos(theta))
    for _ in range(100):
        p = jacobi_eval(1.0, 0.0, n, x)
        dp = 0.5 * (n + 2.0) * jacobi_eval(2.0, 1.0, n - 1, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        raise ConvergenceError(f"roots of P_{n}^(1,0) did not converge", last=x)
    if not (np.all(np.diff(x) > 0) and x[0] > -1.0 and x[-1] < 1.0):
        raise ConvergenceError(f"root isolation for P_{n}^(1,0) failed", last=x)
    return x


@lru_cache(maxsize=512)
def lebesgue_constant(n):
    """Lebesgue constant of the degree-n Legendre projection, ((n+1)/2) int |P_n^(1,0)|.

    The integral is split at the zeros of P_n^(1,0); on each piece the integrand is a
    polynomial of fixed sign, integrated exactly by Gauss-Legendre.
    """
    if not 0 <= n <= LEBESGUE_MAX_DEGREE:
        raise DomainError(f"n must be in [0, {LEBESGUE_MAX_DEGREE}], got {n}")
    if n == 0:
        return 1.0
    edges = np.concatenate([[-1.0], _jacobi10_roots(n), [1.0]])
    rule = gauss_legendre_rule(n // 2 + 2)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    x = a + half * (rule.nodes + 1.0)
    vals = jacobi_eval(1.0, 0.0, n, x)
    pieces = np.abs(np.sum(half * rule.weights * vals, axis=1))
    return 0.5 * (n + 1) * float(np.sum(pieces))


def lebesgue_asymptotic(n):
    """Leading term 2^(3/2) n^(1/2) / sqrt(pi) of the Legendre Lebesgue constant."""
    return 2.0**1.5 / math.sqrt(math.pi) * math.sqrt(n)


def projection_vs_best_bound(best_err, n):
    """(1 + Lambda_n) * best_err: how far the Legendre projection can trail the minimax."""
    if best_err < 0:
        raise DomainError("best_err must be non-negative")
    return (1.0 + lebesgue_constant(n)) * best_err


def total_variation(g, breakpoints=(), samples=200_001):
    """Total variation of g on [-1, 1] from a dense sample that straddles each breakpoint.

    Jumps at breakpoints are captured by sampling 1e-12 either side of them.
    """
    x = np.linspace(-1.0, 1.0, samples)
    extra = [b + s * 1e-12 for b in breakpoints for s in (-1.0, 1.0)]
    x = np.unique(np.concatenate([x, extra]))
    return float(np.sum(np.abs(np.diff(g(x)))))
