"""Minimax polynomial approximation by a discrete Remez exchange on the assessment grid."""

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, DomainError
from .polybasis import CHEBYSHEV
from .projections import SeriesCoeffs, as_function, assessment_grid, eval_series

MAX_DEGREE = 200
MAX_ITERATIONS = 100
FLATNESS_RTOL = 1e-10
# below this multiple of eps * max|f| the error curve is rounding noise
NOISE_FACTOR = 1e3
# flatness this close to eps * max|f| cannot improve further
FLATNESS_ATOL_FACTOR = 16.0
POLISH_ROUNDS = 6
GOLDEN_STEPS = 64
LEVEL_SPREAD_RTOL = 1e-6
# reference points sit at |err| = level only up to rounding
LEVEL_SLACK = 1e-9
# the levelled error rises strictly in exact arithmetic; when it stops, rounding rules
STALL_RTOL = 1e-12
STALL_ITERATIONS = 5
# a level is certified only when rounding in f - p is this small relative to it
RESOLVE_RTOL = 1e-7


@dataclass(frozen=True)
class RemezResult:
    poly: SeriesCoeffs
    levelled_error: float
    reference: np.ndarray
    iterations: int
    residual_flatness: float
    status: str = "converged"

    @property
    def degree(self):
        return self.poly.degree

    @property
    def max_error(self):
        return self.levelled_error + self.residual_flatness

    @property
    def converged(self):
        return self.status == "converged"


@dataclass(frozen=True)
class EquioscillationReport:
    alternation: int
    signs: tuple
    min_error: float
    max_error: float
    level_spread: float
    required: int

    @property
    def passed(self):
        return self.alternation == self.required and self.level_spread < LEVEL_SPREAD_RTOL


def _chebyshev_matrix(x, n):
    t = np.empty((len(x), n + 1))
    t[:, 0] = 1.0
    if n >= 1:
        t[:, 1] = x
    for k in range(1, n):
        t[:, k + 1] = 2.0 * x * t[:, k] - t[:, k - 1]
    return t


def _levelled_solve(x, fx, n):
    """Coefficients c and level E with sum c_k T_k(x_i) + (-1)^i E = f(x_i)."""
    a = np.empty((n + 2, n + 2))
    a[:, : n + 1] = _chebyshev_matrix(x, n)
    a[:, n + 1] = (-1.0) ** np.arange(n + 2)
    sol = np.linalg.solve(a, fx)
    return sol[: n + 1], sol[n + 1]


def _initial_reference(grid, n):
    target = np.cos(np.pi * np.arange(n + 1, -1, -1) / (n + 1))
    idx = np.searchsorted(grid, target).clip(1, len(grid) - 1)
    left_closer = np.abs(grid[idx - 1] - target) <= np.abs(grid[idx] - target)
    idx = np.where(left_closer, idx - 1, idx)
    if len(np.unique(idx)) != n + 2:
        raise DomainError(f"assessment grid too coarse for degree {n}")
    return idx


def _run_extrema(err):
    """Index of the largest |err| within each maximal run of constant sign."""
    sign = np.where(err >= 0.0, 1, -1)
    starts = np.concatenate([[0], np.flatnonzero(np.diff(sign)) + 1])
    ends = np.concatenate([starts[1:], [len(err)]])
    mag = np.abs(err)
    return np.array([s + int(np.argmax(mag[s:e])) for s, e in zip(starts, ends)])


def _merge_same_sign(idx, err):
    """Collapse neighbours of equal sign to the one with larger |err|."""
    out = []
    for i in idx:
        if out and np.sign(err[out[-1]]) == np.sign(err[i]):
            if abs(err[i]) > abs(err[out[-1]]):
                out[-1] = i
        else:
            out.append(i)
    return out


def _select(cands, err, need, level):
    """Choose ``need`` alternating candidates that include the global maximum.

    Points whose |err| falls below the current level are discarded first (their
    neighbours then merge), as the exchange theorem requires |err| >= level on the new
    reference. Surplus points are then shed one end point or one adjacent pair at a
    time, whichever has the smaller error, so signs keep alternating.
    """
    mag = np.abs(err)
    keep = [i for i in cands if mag[i] >= level * (1.0 - LEVEL_SLACK)]
    idx = _merge_same_sign(keep, err)
    if len(idx) < need:
        return None
    top = max(idx, key=lambda i: (mag[i], -i))
    while len(idx) > need:
        options = []
        if idx[0] != top:
            options.append((mag[idx[0]], 0, 1))
        if idx[-1] != top:
            options.append((mag[idx[-1]], len(idx) - 1, 1))
        if len(idx) - need >= 2:
            for j in range(len(idx) - 1):
                if top not in (idx[j], idx[j + 1]):
                    options.append((max(mag[idx[j]], mag[idx[j + 1]]), j, 2))
        _, j, width = min(options)
        idx = idx[:j] + idx[j + width :]
    return np.array(idx)


def _single_exchange(ref, err, i_max):
    """Swap the worst grid point into the reference, preserving sign alternation."""
    ref = list(ref)
    s = np.sign(err[i_max])
    pos = int(np.searchsorted(ref, i_max))
    if pos == 0:
        if np.sign(err[ref[0]]) == s:
            ref[0] = i_max
        else:
            ref = [i_max] + ref[:-1]
    elif pos == len(ref):
        if np.sign(err[ref[-1]]) == s:
            ref[-1] = i_max
        else:
            ref = ref[1:] + [i_max]
    elif np.sign(err[ref[pos - 1]]) == s:
        ref[pos - 1] = i_max
    else:
        ref[pos] = i_max
    return np.array(ref)


def _exchange(ref, err, n, level):
    # the reference attains the level only up to the accuracy of the solve
    floor = min(level, float(np.min(np.abs(err[ref]))))
    new = _select(_run_extrema(err), err, n + 2, floor)
    if new is not None:
        return new
    return _single_exchange(ref, err, int(np.argmax(np.abs(err))))


def _golden_max(g, a, b, steps=GOLDEN_STEPS):
    """Vectorised golden-section search for the maximiser of g on each [a_i, b_i]."""
    ratio = 0.5 * (np.sqrt(5.0) - 1.0)
    for _ in range(steps):
        c = b - ratio * (b - a)
        d = a + ratio * (b - a)
        left = g(c) > g(d)
        a, b = np.where(left, a, c), np.where(left, d, b)
    return 0.5 * (a + b)


def _polish(f, grid, ref, n, fx_grid):
    """Move each reference point to the nearby continuous extremum of the error.

    Starts from a grid-converged reference; each round re-solves the levelled system on
    the moved points. Returns None when the points stop being strictly increasing.
    """
    lo = grid[np.maximum(ref - 1, 0)]
    hi = grid[np.minimum(ref + 1, len(grid) - 1)]
    x = grid[ref].copy()
    fx = fx_grid[ref].copy()
    for _ in range(POLISH_ROUNDS):
        c, level = _levelled_solve(x, fx, n)
        poly = SeriesCoeffs(CHEBYSHEV, c)
        sign = np.sign(fx - eval_series(poly, x))
        if np.any(sign == 0):
            break

        def g(t):
            return sign * (f(t) - eval_series(poly, t))

        cands = np.stack([x, lo, hi, _golden_max(g, lo.copy(), hi.copy())])
        vals = np.stack([g(row) for row in cands])
        x_new = cands[np.argmax(vals, axis=0), np.arange(len(x))]
        if np.any(np.diff(x_new) <= 0):
            return None
        if np.array_equal(x_new, x):
            break
        x = x_new
        fx = f(x)
    c, level = _levelled_solve(x, fx, n)
    return SeriesCoeffs(CHEBYSHEV, c), abs(float(level)), x


def remez_best(f, n, grid=None, max_iterations=MAX_ITERATIONS, polish=True):
    """Best uniform approximation of degree ``n`` to ``f`` over the assessment grid.

    Iteration stops once the grid maximum of |f - p| exceeds the levelled error by less
    than 1e-10 relative or by less than 16 eps max|f|, or when the levelled error,
    which rises strictly in exact arithmetic, has stalled for five exchanges. The status
    is ``"converged"`` when the curve is flat to that tolerance and 16 eps max|f| is
    below 1e-7 of the error, so the level is resolved well above rounding. Otherwise it
    is ``"rounding_limited"``: rounding in f - p keeps the curve from levelling further
    and the level is known only to about eps max|f|. ``"noise_floor"`` means the whole error is
    rounding noise and no meaningful equioscillation exists. With ``polish`` the
    grid-converged reference points are then moved to the continuous extrema of the
    error, so extrema that fall between grid points are not missed.

    Raises ConvergenceError (carrying the last RemezResult) after ``max_iterations``.
    """
    if not 0 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be in [0, {MAX_DEGREE}], got {n}")
    f = as_function(f)
    if grid is None:
        grid = assessment_grid(f.breakpoints)
    grid = np.asarray(grid, dtype=float)
    fx = f(grid)
    if not np.all(np.isfinite(fx)):
        raise DomainError("f is not finite on the assessment grid")
    scale = max(float(np.max(np.abs(fx))), np.finfo(float).tiny)
    noise = NOISE_FACTOR * np.finfo(float).eps * scale
    flat_atol = FLATNESS_ATOL_FACTOR * np.finfo(float).eps * scale

    ref = _initial_reference(grid, n)
    result = None
    best_level, stalled = 0.0, 0
    for it in range(1, max_iterations + 1):
        c, level = _levelled_solve(grid[ref], fx[ref], n)
        poly = SeriesCoeffs(CHEBYSHEV, c)
        err = fx - eval_series(poly, grid)
        max_err = float(np.max(np.abs(err)))
        level = abs(float(level))
        result = RemezResult(poly, level, grid[ref].copy(), it, max_err - level)
        if max_err <= noise:
            return RemezResult(poly, level, grid[ref].copy(), it, max_err - level, "noise_floor")
        new = _exchange(ref, err, n, level)
        stalled = stalled + 1 if level <= best_level * (1.0 + STALL_RTOL) else 0
        best_level = max(best_level, level)
        # an unchanged reference means no admissible exchange is left: grid minimax
        done = max_err - level <= max(FLATNESS_RTOL * max_err, flat_atol)
        if done or np.array_equal(new, ref) or stalled >= STALL_ITERATIONS:
            if polish:
                result = _polished(f, grid, ref, n, fx, result, flat_atol)
            return replace(result, status=_status(result, flat_atol))
        ref = new
    raise ConvergenceError(
        f"Remez for {f.label or 'f'} at degree {n} did not converge in {max_iterations} iterations",
        last=result,
    )


def _status(r, flat_atol):
    flat = r.residual_flatness <= max(FLATNESS_RTOL * r.max_error, flat_atol)
    if flat and flat_atol <= RESOLVE_RTOL * r.max_error:
        return "converged"
    return "rounding_limited"


def _polished(f, grid, ref, n, fx, result, flat_atol):
    out = _polish(f, grid, ref, n, fx)
    if out is None:
        return result
    poly, level, x = out
    pts = np.concatenate([grid, x])
    max_err = float(np.max(np.abs(np.concatenate([fx, f(x)]) - eval_series(poly, pts))))
    polished = RemezResult(poly, level, x, result.iterations, max_err - level)
    # the grid-only flatness is blind between grid points, so it is no yardstick here
    if polished.residual_flatness <= max(FLATNESS_RTOL * max_err, flat_atol):
        return polished
    return result


def equioscillation_check(f, r):
    """Alternation certificate for a Remez result.

    Passes when the error alternates in sign across all n + 2 reference points and the
    reference error magnitudes agree to 1e-6 relative.
    """
    f = as_function(f)
    x = np.asarray(r.reference, dtype=float)
    e = f(x) - eval_series(r.poly, x)
    signs = tuple(int(s) for s in np.sign(e))
    alternation = 1
    for a, b in zip(signs, signs[1:]):
        if a == 0 or b == 0 or a == b:
            break
        alternation += 1
    mag = np.abs(e)
    hi, lo = float(np.max(mag)), float(np.min(mag))
    spread = (hi - lo) / hi if hi > 0 else np.inf
    return EquioscillationReport(alternation, signs, lo, hi, spread, r.degree + 2)
