"""Legendre and Chebyshev projections of functions on [-1, 1] and their errors."""

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DomainError
from .polybasis import CHEBYSHEV, LEGENDRE, BasisKind
from .quadrature import (
    chebyshev_points,
    chebyshev_transform,
    composite_rule,
    legendre_panel_rule,
    panel_edges,
)

MAX_DEGREE = 2000
STABILIZE_DOUBLINGS = 4
COEFF_RTOL = 1e-12
COEFF_ATOL = 1e-14

GRID_BASE = 8192
GRID_CLUSTER = 256  # points on each side of a breakpoint
GRID_CLUSTER_MIN_EXP = 40


# --- smoothness classes -------------------------------------------------------


@dataclass(frozen=True)
class Analytic:
    rho_est: float


@dataclass(frozen=True)
class Cm:
    """f^(m) has bounded variation; ``m`` may be ``math.inf``."""

    m: float


@dataclass(frozen=True)
class PiecewiseAnalytic:
    pass


@dataclass(frozen=True)
class FractionalInterior:
    alpha: float
    x0: float


@dataclass(frozen=True)
class FractionalEndpoint:
    """``side`` follows the (1 +- x)^alpha sign: 'plus' is singular at -1, 'minus' at +1."""

    alpha: float
    side: str

    def __post_init__(self):
        if self.side not in ("plus", "minus", "both"):
            raise DomainError(f"side must be plus, minus or both, got {self.side!r}")


@dataclass(frozen=True)
class FunctionSpec:
    evaluator: Callable
    breakpoints: tuple = ()
    smoothness: object = field(default_factory=PiecewiseAnalytic)
    label: str = ""

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        if any(not -1.0 < b < 1.0 for b in bp):
            raise DomainError(f"breakpoints must lie in (-1, 1): {bp}")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise DomainError(f"breakpoints must be strictly increasing: {bp}")
        object.__setattr__(self, "breakpoints", bp)

    def __call__(self, x):
        x = np.asarray(x)
        # complex points are passed through so bounds can sample f on an ellipse
        return self.evaluator(x if np.iscomplexobj(x) else x.astype(float))

    @property
    def singular_points(self):
        """Points near which quadrature panels are geometrically graded."""
        s = self.smoothness
        if isinstance(s, FractionalInterior):
            return (s.x0,)
        if isinstance(s, FractionalEndpoint):
            return {"plus": (-1.0,), "minus": (1.0,), "both": (-1.0, 1.0)}[s.side]
        return ()

    @property
    def is_smooth(self):
        return not self.breakpoints and not self.singular_points


@dataclass(frozen=True)
class SeriesCoeffs:
    basis: BasisKind
    coeffs: np.ndarray
    converged: bool = True

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def truncate(self, n):
        return replace(self, coeffs=self.coeffs[: n + 1])


# --- coefficients ---------------------------------------------------------------


def _legendre_moments(x, fw, n):
    out = np.empty(n + 1)
    p_prev, p = np.ones_like(x), x
    out[0] = 0.5 * fw.sum()
    if n >= 1:
        out[1] = 1.5 * (fw @ x)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        out[k + 1] = (k + 1.5) * (fw @ p)
    return out


def _chebyshev_moments(theta, fw, n):
    out = np.array([fw @ np.cos(k * theta) for k in range(n + 1)])
    out[0] *= 0.5
    return out


def _refined(moments, basis, x, w, fx, n):
    """Moments plus one correction pass on the residual f - S_n.

    By orthogonality the residual's coefficients are exactly the error of the first
    pass, and rounding in the second pass scales with the (small) residual rather than
    with f. This is what keeps high-degree coefficients of singular functions accurate.
    """
    c = moments(w * fx, n)
    resid = fx - eval_series(SeriesCoeffs(basis, c), x)
    return c + moments(w * resid, n)


def _legendre_pass(f, n, order):
    x, w = legendre_panel_rule(f.breakpoints, f.singular_points, order)
    return _refined(lambda fw, m: _legendre_moments(x, fw, m), LEGENDRE, x, w, f(x), n)


def _theta_rule(f, order):
    thetas = sorted(math.acos(b) for b in f.breakpoints)
    graded = [math.acos(max(-1.0, min(1.0, g))) for g in f.singular_points]
    edges = panel_edges(thetas, graded, lo=0.0, hi=math.pi)
    return composite_rule(edges, order)


def _chebyshev_pass(f, n, order):
    theta, w = _theta_rule(f, order)
    x = np.cos(theta)
    w = (2.0 / math.pi) * w
    return _refined(lambda fw, m: _chebyshev_moments(theta, fw, m), CHEBYSHEV, x, w, f(x), n)


def _chebyshev_sampled(f, n, order):
    big = max(order, n)
    return chebyshev_transform(f(chebyshev_points(big)), big)[: n + 1]


def _stabilized(compute, n, order):
    prev = compute(n, order)
    for _ in range(STABILIZE_DOUBLINGS):
        order *= 2
        cur = compute(n, order)
        scale = max(np.max(np.abs(cur)), np.finfo(float).tiny)
        diff = np.abs(cur - prev)
        if np.all((diff <= COEFF_RTOL * np.abs(cur)) | (diff <= COEFF_ATOL * scale)):
            return cur, True
        prev = cur
    return prev, False


def _check_degree(n):
    if not 0 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be in [0, {MAX_DEGREE}], got {n}")


def legendre_coeffs(f, n, order=None):
    """a_k = (k + 1/2) int f P_k for k = 0..n.

    Composite Gauss quadrature split at f's breakpoints and graded toward its singular
    points. The node budget is doubled until no coefficient moves by more than 1e-12
    relative (1e-14 absolute, scaled by the largest coefficient); after four doublings
    without agreement the result is returned with ``converged=False`` and a warning.
    """
    _check_degree(n)
    f = as_function(f)
    order = order or (n // 2 + 32)
    coeffs, ok = _stabilized(lambda m, o: _legendre_pass(f, m, o), n, order)
    if not ok:
        warnings.warn(f"Legendre coefficients of {f.label or 'f'} did not stabilise", RuntimeWarning)
    return SeriesCoeffs(LEGENDRE, coeffs, ok)


def chebyshev_coeffs(f, n, order=None):
    """Chebyshev projection coefficients with the constant term already halved.

    Smooth functions go through the oversampled Chebyshev transform (starting at
    4n + 64 samples, doubling until stable). Functions with breakpoints or singular
    points use graded Gauss quadrature of (2/pi) int_0^pi f(cos t) cos(kt) dt.
    """
    _check_degree(n)
    f = as_function(f)
    if f.is_smooth:
        compute = lambda m, o: _chebyshev_sampled(f, m, o)  # noqa: E731
        order = order or (4 * n + 64)
    else:
        compute = lambda m, o: _chebyshev_pass(f, m, o)  # noqa: E731
        order = order or (n + 32)
    coeffs, ok = _stabilized(compute, n, order)
    if not ok:
        warnings.warn(f"Chebyshev coefficients of {f.label or 'f'} did not stabilise", RuntimeWarning)
    return SeriesCoeffs(CHEBYSHEV, coeffs, ok)


def as_function(f):
    if isinstance(f, FunctionSpec):
        return f
    if callable(f):
        return FunctionSpec(f)
    raise DomainError(f"cannot interpret {f!r} as a function")


# --- evaluation -------------------------------------------------------------------


def eval_series(s, x):
    """Sum of coeffs[k] * basis_k(x) by backward (Clenshaw) recurrence."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("series evaluation is restricted to [-1, 1]")
    c = np.asarray(s.coeffs, dtype=float)
    n = len(c) - 1
    tag = s.basis.tag
    if n < 0:
        out = np.zeros_like(x)
    elif tag == "legendre":
        b1 = np.zeros_like(x)
        b2 = np.zeros_like(x)
        for k in range(n, 0, -1):
            b1, b2 = c[k] + (2 * k + 1) / (k + 1) * x * b1 - (k + 1) / (k + 2) * b2, b1
        out = c[0] + x * b1 - 0.5 * b2
    elif tag == "chebyshev1":
        b1 = np.zeros_like(x)
        b2 = np.zeros_like(x)
        for k in range(n, 0, -1):
            b1, b2 = c[k] + 2.0 * x * b1 - b2, b1
        out = c[0] + x * b1 - b2
    elif tag == "monomial":
        out = np.zeros_like(x)
        for ck in c[::-1]:
            out = out * x + ck
    else:
        raise DomainError(f"cannot evaluate a series in basis {tag!r}")
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=64)
def _grid(breakpoints, base):
    pts = [chebyshev_points(base)]
    d = 2.0 ** -np.linspace(1, GRID_CLUSTER_MIN_EXP, GRID_CLUSTER)
    for b in breakpoints:
        pts.append(np.clip(np.concatenate([b - d, [b], b + d]), -1.0, 1.0))
    g = np.unique(np.concatenate(pts))
    g.setflags(write=False)
    return g


def assessment_grid(breakpoints=(), base=GRID_BASE):
    """Chebyshev-Lobatto grid plus 2*256+1 points clustered at each breakpoint."""
    return _grid(tuple(float(b) for b in breakpoints), int(base))


def pointwise_error(f, s, grid):
    f = as_function(f)
    grid = np.asarray(grid, dtype=float)
    return np.abs(f(grid) - eval_series(s, grid))


def _refine_max(err_fn, grid, err, candidates=8, points=33):
    best = int(np.argmax(err))
    best_val, best_x = float(err[best]), float(grid[best])
    # interior local maxima, largest first
    idx = np.argsort(err)[::-1][:candidates]
    for i in idx:
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        if hi <= lo:
            continue
        xs = np.linspace(lo, hi, points)
        e = err_fn(xs)
        j = int(np.argmax(e))
        if e[j] > best_val:
            best_val, best_x = float(e[j]), float(xs[j])
    return best_val, best_x


def locate_max_error(f, s, grid=None, refine=True):
    """(max |f - s|, argmax) over the assessment grid, optionally polished locally."""
    f = as_function(f)
    if grid is None:
        grid = assessment_grid(f.breakpoints)
    err = pointwise_error(f, s, grid)
    if not refine:
        i = int(np.argmax(err))
        return float(err[i]), float(grid[i])
    return _refine_max(lambda xs: pointwise_error(f, s, xs), grid, err)


def max_error(f, s, grid=None, refine=True):
    """Max |f - s| on the assessment grid (a lower bound on the sup norm)."""
    return locate_max_error(f, s, grid, refine)[0]


def tail_max_error(s, n, grid=None):
    """max_x |sum_{k > n} coeffs[k] basis_k(x)|.

    Equals the projection error of degree n when ``s`` holds enough of the expansion;
    unlike f - P_n f it keeps full relative accuracy when the error is far below the
    size of f itself.
    """
    if grid is None:
        grid = assessment_grid()
    tail = np.array(s.coeffs, dtype=float)
    tail[: n + 1] = 0.0
    vals = np.abs(eval_series(replace(s, coeffs=tail), grid))
    return float(np.max(vals))
