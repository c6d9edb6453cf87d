"""Explicit Legendre (and a few Chebyshev) coefficients of model functions.

These are independent of the quadrature pipeline and serve as oracles for it.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .polybasis import jacobi_eval
from .specfun import SQRT_PI, gamma_ratio, gauss_2f1

RHO_RECIPROCAL = 2.0 + math.sqrt(3.0)  # the pole of 1/(x - 2) lies on this ellipse

FAMILIES = ("AbsBound", "ReciprocalPole", "InteriorFractional", "EndpointFractional")


@dataclass(frozen=True)
class CoeffFormulaResult:
    """A closed-form coefficient with the algebraic decay exponent of its family.

    For ``ReciprocalPole`` the decay is geometric; ``asymptotic_order`` then records
    the algebraic prefactor k^(1/2) that multiplies rho^-k.
    """

    k: int
    value: float
    family: str
    asymptotic_order: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown coefficient family {self.family!r}")
        if not math.isfinite(self.value):
            raise DomainError(f"coefficient {self.k} is not finite")


def _check_k(k):
    if k < 0 or int(k) != k:
        raise DomainError(f"coefficient index must be a non-negative integer, got {k}")
    return int(k)


def _check_fractional(alpha):
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if float(alpha).is_integer():
        raise DomainError(f"alpha = {alpha} is an integer; the closed form degenerates")


def abs_coeff_bound(k):
    """Upper bound 4 / sqrt(pi (2k - 3)) / (k - 1/2) on |a_k| for f = |x|, k even.

    Odd-index coefficients of |x| vanish, so the bound is only defined for even k.
    """
    if k < 2 or k % 2:
        raise DomainError(f"abs_coeff_bound needs an even k >= 2, got {k}")
    return 4.0 / math.sqrt(math.pi * (2 * k - 3)) / (k - 0.5)


def reciprocal_coeff(k):
    """Legendre coefficient a_k of 1/(x - 2); every a_k is negative."""
    k = _check_k(k)
    rho = RHO_RECIPROCAL
    lead = SQRT_PI * gamma_ratio(k + 1.0, k + 0.5)
    hyper = gauss_2f1(k + 1.0, 0.5, k + 1.5, rho**-2)
    return -2.0 * lead * hyper * math.exp(-(k + 1) * math.log(rho))


def reciprocal_cheb_coeff(k):
    """Chebyshev coefficient of 1/(x - 2) (halved constant term), from its generating function."""
    k = _check_k(k)
    c = -(2.0 / math.sqrt(3.0)) * (2.0 - math.sqrt(3.0)) ** k
    return 0.5 * c if k == 0 else c


def interior_fractional_coeff(alpha, x0, k):
    """Legendre coefficient a_k of |x - x0|^alpha.

    Each side of the singularity contributes a Jacobi polynomial with parameters
    (alpha + 1, -alpha - 1), evaluated at x0 and -x0 respectively.
    """
    _check_fractional(alpha)
    if not -1.0 < x0 < 1.0:
        raise DomainError(f"x0 must lie in (-1, 1), got {x0}")
    k = _check_k(k)
    a, b = alpha + 1.0, -alpha - 1.0
    right = (1.0 - x0) ** a * jacobi_eval(a, b, k, x0)
    left = (-1.0) ** k * (1.0 + x0) ** a * jacobi_eval(a, b, k, -x0)
    return (k + 0.5) * math.gamma(alpha + 1.0) * gamma_ratio(k + 1.0, k + alpha + 2.0) * (right + left)


def _side_sign(side):
    if side == "plus":
        return 1.0
    if side == "minus":
        return -1.0
    raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")


def endpoint_fractional_coeff(alpha, side, k):
    """Legendre coefficient a_k of (1 + x)^alpha (side 'plus') or (1 - x)^alpha ('minus').

    Beyond k = alpha + 1 the factor 1/Gamma(alpha + 1 - k) is replaced through the
    reflection formula, and the remaining gamma quotient is formed in log space.
    """
    _check_fractional(alpha)
    k = _check_k(k)
    s = _side_sign(side)
    lg1 = math.lgamma(alpha + 1.0)
    if k <= alpha + 1.0:
        mag = math.exp(alpha * math.log(2.0) + 2.0 * lg1 - math.lgamma(alpha + 1.0 - k) - math.lgamma(alpha + 2.0 + k))
        return s**k * (2 * k + 1) * mag
    mag = math.exp(alpha * math.log(2.0) + 2.0 * lg1 + math.lgamma(k - alpha) - math.lgamma(k + alpha + 2.0))
    return -((-s) ** k) * math.sin(alpha * math.pi) * (2 * k + 1) * mag / math.pi


def endpoint_fractional_cheb_coeff(alpha, side, k):
    """Chebyshev coefficient (halved constant term) of (1 +- x)^alpha."""
    _check_fractional(alpha)
    k = _check_k(k)
    s = _side_sign(side)
    lg = math.lgamma(2.0 * alpha + 1.0) - math.lgamma(alpha + k + 1.0) + (1.0 - alpha) * math.log(2.0)
    if k <= alpha:
        val = math.exp(lg - math.lgamma(alpha + 1.0 - k))
    else:
        # 1/Gamma(alpha + 1 - k) by reflection
        val = -((-1.0) ** k) * math.sin(alpha * math.pi) / math.pi * math.exp(lg + math.lgamma(k - alpha))
    val *= s**k
    return 0.5 * val if k == 0 else val


def leg_cheb_coeff_ratio(alpha):
    """Limit of a_k / c_k for (1 +- x)^alpha: sqrt(pi) Gamma(alpha + 1) / Gamma(alpha + 1/2)."""
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")
    return SQRT_PI * gamma_ratio(alpha + 1.0, alpha + 0.5)


def coeff_formula(family, k, **params):
    """Evaluate a closed form by family name and wrap it with its decay exponent."""
    if family == "AbsBound":
        return CoeffFormulaResult(k, abs_coeff_bound(k), family, -1.5)
    if family == "ReciprocalPole":
        return CoeffFormulaResult(k, reciprocal_coeff(k), family, 0.5)
    if family == "InteriorFractional":
        alpha = params["alpha"]
        value = interior_fractional_coeff(alpha, params["x0"], k)
        return CoeffFormulaResult(k, value, family, -alpha - 0.5)
    if family == "EndpointFractional":
        alpha = params["alpha"]
        value = endpoint_fractional_coeff(alpha, params.get("side", "plus"), k)
        return CoeffFormulaResult(k, value, family, -2.0 * alpha - 1.0)
    raise DomainError(f"unknown coefficient family {family!r}")
