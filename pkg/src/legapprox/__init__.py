"""Legendre and Chebyshev projections against minimax approximation on [-1, 1]."""

from .bestapprox import EquioscillationReport, RemezResult, equioscillation_check, remez_best
from .bounds import (
    BoundReport,
    cheb_analytic_bound,
    cheb_bv_bound,
    ellipse_max_abs,
    leg_bound_constant,
    leg_coeff_bound,
    leg_projection_bound,
    lebesgue_asymptotic,
    lebesgue_constant,
    projection_vs_best_bound,
    tail_sum_bound,
    total_variation,
)
from .closedforms import (
    CoeffFormulaResult,
    abs_coeff_bound,
    coeff_formula,
    endpoint_fractional_cheb_coeff,
    endpoint_fractional_coeff,
    interior_fractional_coeff,
    leg_cheb_coeff_ratio,
    reciprocal_cheb_coeff,
    reciprocal_coeff,
)
from .errors import ConvergenceError, DomainError, OutputError
from .harness import (
    FunctionCatalogEntry,
    PointwiseTable,
    RateReport,
    catalog,
    emit,
    figure,
    get_entry,
    load_report,
    pointwise_figure,
    sweep,
)
from .peano import (
    PeanoKernelSpec,
    PeanoReport,
    error_representation,
    kernel_sup_norm,
    peano_kernel_eval,
    peano_properties_report,
    variation_bound,
)
from .polybasis import (
    CHEBYSHEV,
    LEGENDRE,
    BasisKind,
    bernstein_envelope,
    chebyshev_eval,
    dirichlet_kernel_cd,
    dirichlet_kernel_sum,
    jacobi_eval,
    legendre_eval,
    legendre_pointwise_bound,
)
from .projections import (
    Analytic,
    Cm,
    FractionalEndpoint,
    FractionalInterior,
    FunctionSpec,
    PiecewiseAnalytic,
    SeriesCoeffs,
    assessment_grid,
    chebyshev_coeffs,
    eval_series,
    legendre_coeffs,
    locate_max_error,
    max_error,
    pointwise_error,
    tail_max_error,
)
from .quadrature import QuadRule, composite_rule, gauss_legendre_rule, integrate_composite
from .rates import rate_fit
from .specfun import BernsteinEllipse, ellipse_circumference, elliptic_e, gamma_ratio, gauss_2f1, log_gamma, psi_seq

__version__ = "0.1.0"
