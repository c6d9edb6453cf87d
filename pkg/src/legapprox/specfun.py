"""Special-function primitives: gamma ratios, 2F1 series, elliptic E, Bernstein ellipses."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError

SQRT_PI = math.sqrt(math.pi)

_2F1_MAX_TERMS = 10_000


@dataclass(frozen=True)
class BernsteinEllipse:
    """Ellipse with foci at +-1 whose semi-axes sum to ``rho``."""

    rho: float
    semi_major: float = field(init=False)
    semi_minor: float = field(init=False)

    def __post_init__(self):
        if not self.rho >= 1.0:
            raise DomainError(f"Bernstein ellipse needs rho >= 1, got {self.rho}")
        inv = 1.0 / self.rho
        object.__setattr__(self, "semi_major", 0.5 * (self.rho + inv))
        object.__setattr__(self, "semi_minor", 0.5 * (self.rho - inv))

    def boundary(self, samples=4096):
        """Points z = (u + 1/u)/2 with |u| = rho, equally spaced in angle."""
        theta = 2.0 * np.pi * np.arange(samples) / samples
        return self.semi_major * np.cos(theta) + 1j * self.semi_minor * np.sin(theta)


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gamma_ratio(a, b):
    """Gamma(a) / Gamma(b), formed in log space so large arguments do not overflow."""
    if not (a > 0 and b > 0):
        raise DomainError(f"gamma_ratio requires positive arguments, got ({a}, {b})")
    return math.exp(log_gamma(a) - log_gamma(b))


def psi_seq(k):
    """Gamma(k+1) Gamma(1/2) / Gamma(k+1/2) * k**-0.5.

    Strictly decreasing from psi(1) = 2 towards sqrt(pi).
    """
    if k < 1:
        raise DomainError(f"psi_seq requires k >= 1, got {k}")
    return SQRT_PI * gamma_ratio(k + 1.0, k + 0.5) / math.sqrt(k)


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric 2F1(a, b; c; z) by direct summation, |z| < 1.

    Stops once a term drops below 1e-16 of the partial sum. Polynomial cases
    (a or b a non-positive integer) terminate naturally.
    """
    if not abs(z) < 1.0:
        raise DomainError(f"gauss_2f1 series needs |z| < 1, got z={z}")
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"gauss_2f1 undefined for c = {c}")
    total = 1.0
    term = 1.0
    for k in range(_2F1_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) < 1e-16 * abs(total):
            return total
        if term == 0.0:
            return total
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not converge in {_2F1_MAX_TERMS} terms", last=total
    )


def elliptic_e(k):
    """Complete elliptic integral of the second kind in the *modulus* convention.

    E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt, computed by the arithmetic-geometric
    mean. With this convention an ellipse of semi-major axis a and eccentricity k has
    perimeter 4 a E(k).
    """
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"elliptic_e modulus must lie in [0, 1], got {k}")
    if k == 1.0:
        return 1.0
    a = 1.0
    g = math.sqrt((1.0 - k) * (1.0 + k))
    c = k
    acc = 0.5 * c * c
    power = 0.5
    for _ in range(64):
        if power * c * c <= 1e-18:
            break
        a, g = 0.5 * (a + g), math.sqrt(a * g)
        # c_{j+1} = (a_j - g_j)/2 rewritten to avoid cancellation
        c = c * c / (4.0 * a)
        power *= 2.0
        acc += power * c * c
    return 0.5 * math.pi / a * (1.0 - acc)


def ellipse_circumference(e):
    """Perimeter of a Bernstein ellipse, 4 E(eps) / eps with eps = 2/(rho + 1/rho).

    Accepts a :class:`BernsteinEllipse` or a bare rho.
    """
    if not isinstance(e, BernsteinEllipse):
        e = BernsteinEllipse(float(e))
    eps = 1.0 / e.semi_major
    return 4.0 * elliptic_e(min(eps, 1.0)) / eps


def ellipse_circumference_upper(rho):
    """Upper bound 2(rho + 1/rho) + 2(pi/2 - 1)(rho - 1/rho), tight at rho = 1."""
    if rho < 1:
        raise DomainError(f"rho must be >= 1, got {rho}")
    return 2.0 * (rho + 1.0 / rho) + 2.0 * (0.5 * math.pi - 1.0) * (rho - 1.0 / rho)
