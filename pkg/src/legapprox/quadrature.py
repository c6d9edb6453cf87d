"""Gauss-Legendre rules, composite/graded integration and the Chebyshev transform."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .errors import ConvergenceError, DomainError

MAX_ORDER = 4096
# panels below this many nodes are not worth having
MIN_PANEL_ORDER = 16
GRADING_RATIO = 0.5
# the innermost panel, 2^-40 of its piece, still spans dozens of ulps
GRADING_LEVELS = 40


@dataclass(frozen=True)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def mapped(self, a, b):
        """Nodes and weights transplanted to [a, b]."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights


def _legendre_and_derivative(n, x):
    p_prev, p = np.ones_like(x), x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=256)
def gauss_legendre_rule(order):
    """Gauss-Legendre rule with ``order`` nodes on [-1, 1].

    Newton iteration on P_order started from Tricomi's asymptotic guesses. Nodes are
    symmetrised so that x_i = -x_{n-1-i} exactly.
    """
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"order must be in [1, {MAX_ORDER}], got {order}")
    n = order
    if n == 1:
        nodes = np.array([0.0])
        weights = np.array([2.0])
        return _frozen_rule(nodes, weights, n)
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    theta = np.pi * (4 * i - 1) / (4 * n + 2)
    x = (1.0 - (n - 1) / (8.0 * n**3) - 1.0 / (384.0 * n**4) * (39.0 - 28.0 / np.sin(theta) ** 2)) * np.cos(theta)
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        raise ConvergenceError(f"Gauss-Legendre nodes for order {n} did not converge")
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # x holds the positive half, largest first
    if n % 2:
        x[-1] = 0.0
        nodes = np.concatenate([-x, x[-2::-1]])
        weights = np.concatenate([w, w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return _frozen_rule(nodes, weights, n)


def _frozen_rule(nodes, weights, n):
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(nodes, weights, n)


def _edges_graded(lo, hi, grade_lo, grade_hi, levels=GRADING_LEVELS):
    """Panel edges on [lo, hi], geometrically refined toward flagged ends."""
    if grade_lo and grade_hi:
        mid = 0.5 * (lo + hi)
        left = _edges_graded(lo, mid, True, False, levels)
        right = _edges_graded(mid, hi, False, True, levels)
        return np.concatenate([left, right[1:]])
    length = hi - lo
    steps = GRADING_RATIO ** np.arange(1, levels + 1)
    if grade_lo:
        inner = lo + length * steps[::-1]
        return np.concatenate([[lo], inner, [hi]])
    if grade_hi:
        inner = hi - length * steps
        return np.concatenate([[lo], inner, [hi]])
    return np.array([lo, hi])


def panel_edges(breakpoints=(), graded=(), lo=-1.0, hi=1.0, levels=GRADING_LEVELS):
    """Edges of the composite partition of [lo, hi].

    ``breakpoints`` split the interval; any edge listed in ``graded`` gets geometric
    refinement on both sides.
    """
    cuts = [lo] + sorted(float(b) for b in breakpoints if lo < b < hi) + [hi]
    graded = [float(g) for g in graded]

    def flagged(p):
        return any(abs(p - g) <= 1e-15 * max(1.0, abs(g)) for g in graded)

    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        e = _edges_graded(a, b, flagged(a), flagged(b), levels)
        pieces.append(e if not pieces else e[1:])
    return np.concatenate(pieces)


def composite_rule(edges, order, budget=None):
    """Nodes/weights of a composite Gauss rule on consecutive panels.

    ``order`` is the node budget spread over the whole partition: panel i gets
    ``MIN_PANEL_ORDER + ceil(order * budget_i / sum(budget))`` nodes, where the budget
    defaults to the panel length.
    """
    edges = np.asarray(edges, dtype=float)
    budget = np.diff(edges) if budget is None else np.asarray(budget, dtype=float)
    total = budget.sum()
    xs, ws = [], []
    for a, b, share in zip(edges[:-1], edges[1:], budget):
        if b <= a:
            continue
        q = min(MAX_ORDER, MIN_PANEL_ORDER + int(math.ceil(order * share / total)))
        x, w = gauss_legendre_rule(q).mapped(a, b)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def legendre_panel_rule(breakpoints=(), graded=(), order=64):
    """Composite rule on [-1, 1] with node budgets proportional to arc angle.

    Budgeting by arccos-length keeps the node density matched to how fast P_k
    oscillates, which is uniform in the angle variable.
    """
    edges = panel_edges(breakpoints, graded)
    angle = np.abs(np.diff(np.arccos(np.clip(edges, -1.0, 1.0))))
    return composite_rule(edges, order, budget=angle)


def integrate_composite(f, breakpoints=(), order=64, graded=()):
    """Integral of ``f`` over [-1, 1] by mapped Gauss rules on each sub-interval.

    ``f`` must accept a numpy array. Breakpoints are panel edges, so ``f`` is never
    evaluated exactly at one.
    """
    for b in breakpoints:
        if not -1.0 < b < 1.0:
            raise DomainError(f"breakpoint {b} is not inside (-1, 1)")
    x, w = legendre_panel_rule(breakpoints, graded, order)
    return float(np.dot(w, f(x)))


def chebyshev_points(n):
    """The n + 1 Chebyshev-Lobatto points cos(j pi / n), j = 0..n (descending)."""
    if n == 0:
        return np.array([1.0])
    j = np.arange(n + 1)
    # sin form keeps the points exactly antisymmetric
    return np.sin(np.pi * (n - 2 * j) / (2 * n))


def chebyshev_transform(samples, n):
    """Interpolation coefficients from values at the n + 1 Chebyshev-Lobatto points.

    ``samples[j] = f(cos(j pi / n))``. The returned vector holds the actual weights of
    T_0..T_n, i.e. the constant term is already halved.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (n + 1,):
        raise DomainError(f"expected {n + 1} samples, got {samples.shape}")
    if n == 0:
        return samples.copy()
    c = scipy.fft.dct(samples, type=1) / n
    c[0] *= 0.5
    c[-1] *= 0.5
    return c
