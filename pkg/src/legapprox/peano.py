"""Peano kernel of the Legendre projection error and numerical checks of its properties.

For n >= m - 1 and f with m derivatives,

    f(x) - P_n f(x) = int_{-1}^{1} f^(m)(t) K_m(x, t) dt,
    K_m(x, t) = [(x - t)_+^(m-1) - P_n((. - t)_+^(m-1))(x)] / (m - 1)!.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .polybasis import legendre_batch
from .quadrature import chebyshev_points, gauss_legendre_rule
from .rates import rate_fit

FD_STEP = 1e-5
FD_EXCLUSION = 10  # steps kept clear of the kink at t = x


@dataclass(frozen=True)
class PeanoKernelSpec:
    m: int
    n: int
    x: float

    def __post_init__(self):
        if self.m < 1:
            raise DomainError(f"m must be at least 1, got {self.m}")
        if self.n < self.m - 1:
            raise DomainError(f"need n >= m - 1, got n={self.n}, m={self.m}")
        if not -1.0 <= self.x <= 1.0:
            raise DomainError(f"x must lie in [-1, 1], got {self.x}")


def truncated_power(x, t, r):
    """(x - t)_+^r, taken as 0 whenever x - t <= 0 (also for r = 0)."""
    d = np.asarray(x, dtype=float) - np.asarray(t, dtype=float)
    pos = d > 0
    out = np.where(pos, np.where(pos, d, 1.0) ** r, 0.0)
    return float(out) if out.ndim == 0 else out


def spline_coeffs(m, n, ts):
    """Legendre coefficients (rows indexed by t) of x -> (x - t)_+^(m-1).

    Gauss on [t, 1] with (n + m)//2 + 1 nodes integrates the polynomial integrand exactly.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    rule = gauss_legendre_rule((n + m) // 2 + 1)
    half = 0.5 * (1.0 - ts)[:, None]
    s = ts[:, None] + half * (rule.nodes + 1.0)
    w = half * rule.weights * (s - ts[:, None]) ** (m - 1)
    p = legendre_batch(n, s)
    return (np.arange(n + 1) + 0.5) * np.einsum("ktq,tq->tk", p, w)


def kernel_matrix(m, n, xs, ts):
    """K_m(x_i, t_j) for all pairs, shape (len(xs), len(ts))."""
    PeanoKernelSpec(m, n, 0.0)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    proj = legendre_batch(n, xs).T @ spline_coeffs(m, n, ts).T
    spline = truncated_power(xs[:, None], ts[None, :], m - 1)
    return (spline - proj) / math.factorial(m - 1)


def peano_kernel_eval(s, t):
    """K_m(x, t) for the kernel described by ``s``; vectorised over t."""
    vals = kernel_matrix(s.m, s.n, [s.x], t)[0]
    return float(vals[0]) if np.ndim(t) == 0 else vals


def _split_rule(x, order):
    """Gauss nodes/weights on [-1, x] and [x, 1] (empty pieces dropped)."""
    rule = gauss_legendre_rule(order)
    xs, ws = [], []
    for a, b in ((-1.0, x), (x, 1.0)):
        if b > a:
            t, w = rule.mapped(a, b)
            xs.append(t)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def error_representation(deriv, m, n, xs, order=None):
    """int f^(m)(t) K_m(x, t) dt at each x, with the t-integral split at the kink t = x.

    ``deriv`` evaluates f^(m) on arrays.
    """
    order = order or (n + 40)
    out = []
    for x in np.atleast_1d(np.asarray(xs, dtype=float)):
        t, w = _split_rule(x, order)
        out.append(float(kernel_matrix(m, n, [x], t)[0] @ (w * deriv(t))))
    return np.array(out)


def kernel_sup_norm(m, n, samples=257):
    """max |K_m| over a Chebyshev-point grid in x and t (a lower estimate of the sup)."""
    pts = chebyshev_points(samples - 1)
    return float(np.max(np.abs(kernel_matrix(m, n, pts, pts))))


def variation_bound(m, n, variation, samples=257):
    """sup|K_{m+1}| * V(f^(m)), the bound on ||f - P_n f|| for f^(m) of bounded variation."""
    return kernel_sup_norm(m + 1, n, samples) * variation


def _richardson_dt(m, n, x, ts, h=FD_STEP):
    def central(step):
        return (kernel_matrix(m, n, [x], ts + step)[0] - kernel_matrix(m, n, [x], ts - step)[0]) / (2 * step)

    return (4.0 * central(h) - central(2 * h)) / 3.0


@dataclass(frozen=True)
class PeanoReport:
    m: int
    n: int
    endpoint_max: float
    orthogonality_max: float
    derivative_residual_max: float
    sweep_degrees: tuple
    sweep_sup: tuple
    decay_slope: float
    decay_residual: float
    sample_x: tuple = field(default=())

    @property
    def claimed_slope(self):
        return 1.0 - self.m


def peano_properties_report(m, n, sweep=None, sample_x=None, sup_samples=257):
    """Numerical checks of the kernel's properties at (m, n).

    * endpoint_max: max |K_m(x, +-1)| over 101 sample x.
    * orthogonality_max: max |int t^j K_m(x, t) dt| for j <= n - m over ``sample_x``.
    * derivative_residual_max: max |dK_m/dt + K_{m-1}| by Richardson-extrapolated
      central differences (step 1e-5), at t at least ten steps away from x.
    * sweep: sup |K_m| over an (x, t) grid for each degree, with the log-log decay slope.
    """
    if not 2 <= m <= 4 or not m <= n <= 120:
        raise DomainError(f"report needs 2 <= m <= 4 and m <= n <= 120, got m={m}, n={n}")
    if sample_x is None:
        sample_x = (-0.9, -0.5, -0.1, 0.2, 0.45, 0.7, 0.95)
    sweep = tuple(sweep) if sweep is not None else tuple(range(16, 97, 8))

    xs = np.linspace(-1.0, 1.0, 101)
    endpoint = float(np.max(np.abs(kernel_matrix(m, n, xs, [-1.0, 1.0]))))

    ortho = 0.0
    powers = np.arange(n - m + 1)
    for x in sample_x:
        t, w = _split_rule(x, n + 2)
        k = kernel_matrix(m, n, [x], t)[0]
        moments = (t[None, :] ** powers[:, None]) @ (w * k)
        ortho = max(ortho, float(np.max(np.abs(moments))))

    deriv = 0.0
    gap = (FD_EXCLUSION + 2) * FD_STEP
    ts_all = np.linspace(-1.0 + 3 * FD_STEP, 1.0 - 3 * FD_STEP, 61)
    for x in sample_x:
        ts = ts_all[np.abs(ts_all - x) > gap]
        resid = _richardson_dt(m, n, x, ts) + kernel_matrix(m - 1, n, [x], ts)[0]
        deriv = max(deriv, float(np.max(np.abs(resid))))

    sups = tuple(kernel_sup_norm(m, d, sup_samples) for d in sweep)
    slope, resid = rate_fit(sweep, sups)
    return PeanoReport(m, n, endpoint, ortho, deriv, sweep, sups, slope, resid, tuple(sample_x))
