"""Legendre, Chebyshev and Jacobi polynomials by three-term recurrence.

All evaluators accept scalars or numpy arrays for ``x`` and return the same shape.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class BasisKind:
    """Tag for a polynomial basis. ``alpha``/``beta`` only matter for Jacobi."""

    tag: str
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        if self.tag not in ("legendre", "chebyshev1", "jacobi", "monomial"):
            raise DomainError(f"unknown basis {self.tag!r}")
        if self.tag == "jacobi" and not (self.alpha > -1 and self.beta > -1):
            raise DomainError("Jacobi basis needs alpha, beta > -1")


LEGENDRE = BasisKind("legendre")
CHEBYSHEV = BasisKind("chebyshev1")


def _check_interval(x, name="x"):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError(f"{name} must lie in [-1, 1]")
    return x


def _out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def legendre_eval(n, x):
    """P_n(x), normalised so that P_n(1) = 1."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = _check_interval(x)
    p_prev, p = np.ones_like(x), x.copy()
    if n == 0:
        return _out(p_prev, x)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return _out(p, x)


def legendre_batch(n, x):
    """P_0(x), ..., P_n(x) in one pass; leading axis indexes the degree."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = _check_interval(x)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = x
    for k in range(1, n):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def chebyshev_eval(n, x):
    """T_n(x) = cos(n arccos x) by recurrence."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = _check_interval(x)
    t_prev, t = np.ones_like(x), x.copy()
    if n == 0:
        return _out(t_prev, x)
    for _ in range(1, n):
        t_prev, t = t, 2.0 * x * t - t_prev
    return _out(t, x)


def jacobi_eval(alpha, beta, n, x):
    """Jacobi polynomial P_n^(alpha, beta)(x).

    The recurrence is run with the general coefficients, so parameter pairs outside
    the classical range (e.g. (a+1, -a-1)) are allowed; P_0 and P_1 are seeded
    explicitly because the n = 1 recurrence denominator vanishes when alpha + beta = 0.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    ab = alpha + beta
    p_prev = np.ones_like(x)
    if n == 0:
        return _out(p_prev, x)
    p = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        c = 2 * k + ab
        denom = 2.0 * k * (k + ab) * (c - 2.0)
        if denom == 0.0:
            raise DomainError(
                f"Jacobi recurrence degenerates at degree {k} for (alpha, beta) = ({alpha}, {beta})"
            )
        a1 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta)
        a2 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
        p_prev, p = p, (a1 * p - a2 * p_prev) / denom
    return _out(p, x)


def bernstein_envelope(n, x):
    """min{(1 - x^2)^(-1/4), sqrt(pi/2) (n + 1/2)^(1/2)}; finite at x = +-1."""
    x = np.asarray(x, dtype=float)
    cap = math.sqrt(0.5 * math.pi * (n + 0.5))
    with np.errstate(divide="ignore"):
        inner = np.where(np.abs(x) < 1.0, (1.0 - x * x) ** -0.25, np.inf)
    return _out(np.minimum(inner, cap), x)


def legendre_pointwise_bound(n, x):
    """Upper bound sqrt(2/pi) (n + 1/2)^(-1/2) * envelope for |P_n(x)|."""
    return math.sqrt(2.0 / math.pi) / math.sqrt(n + 0.5) * bernstein_envelope(n, x)


def dirichlet_kernel_sum(n, x, y):
    """D_n(x, y) = sum_{k<=n} (k + 1/2) P_k(x) P_k(y), summed directly."""
    x = _check_interval(x)
    y = _check_interval(y, "y")
    x, y = np.broadcast_arrays(x, y)
    px_prev, px = np.ones_like(x), x.astype(float)
    py_prev, py = np.ones_like(y), y.astype(float)
    total = 0.5 * px_prev * py_prev
    if n >= 1:
        total = total + 1.5 * px * py
    for k in range(1, n):
        px_prev, px = px, ((2 * k + 1) * x * px - k * px_prev) / (k + 1)
        py_prev, py = py, ((2 * k + 1) * y * py - k * py_prev) / (k + 1)
        total = total + (k + 1.5) * px * py
    return _out(total, x)


def dirichlet_kernel_cd(n, x, y):
    """D_n(x, y) through the Christoffel-Darboux quotient.

    Where |x - y| < 1e-6 (1 + |x|) the quotient loses too many digits and the direct
    sum is used instead.
    """
    x = _check_interval(x)
    y = _check_interval(y, "y")
    x, y = np.broadcast_arrays(x, y)
    x = x.astype(float)
    y = y.astype(float)
    diag = np.abs(x - y) < 1e-6 * (1.0 + np.abs(x))
    pn_x, pn1_x = legendre_batch(n + 1, x)[n:]
    pn_y, pn1_y = legendre_batch(n + 1, y)[n:]
    with np.errstate(divide="ignore", invalid="ignore"):
        quotient = 0.5 * (n + 1) * (pn1_x * pn_y - pn1_y * pn_x) / (x - y)
    if np.any(diag):
        quotient = np.where(diag, dirichlet_kernel_sum(n, x, y), quotient)
    return _out(quotient, x)
