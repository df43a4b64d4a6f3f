"""
Gegenbauer Numerics
===================

The numerical tools every operator is built from: parameter models, the error
hierarchy, quadrature rules and special functions.
"""

from .errors import (
    CalibrationError,
    DivergentNorm,
    DivergentParameters,
    DomainError,
    DominationViolation,
    FixturesError,
    GegenbauerError,
    NonFiniteIntegrand,
    ParameterError,
    QuadratureError,
    QuotientError,
    SeriesNotConverged,
    TailNotCertified,
    ToleranceNotMet,
)
from .params import Degree, GegenbauerParams, PotentialParams
from .quadrature import (
    DEFAULT_SPEC,
    NESTED_INNER_SPEC,
    NESTED_OUTER_SPEC,
    IntegralResult,
    QuadratureSpec,
    TruncationPolicy,
    exponential_tail,
    integrate_finite,
    integrate_semi_infinite,
    integrate_singular,
    mc_oracle,
    panel_rule,
    subdivided_edges,
)
from .special_functions import (
    apply_G,
    corollary2_heat_bound,
    eigenvalue,
    gamma_fn,
    gauss_2f1,
    gauss_2f1_euler,
    heat_kernel,
    heat_kernel_table,
    legendre_p,
    legendre_p_at_one,
    printed_cstar_terms,
    spectral_cutoff,
    spectral_rule,
    spherical_function,
)

__all__ = [
    'GegenbauerParams',
    'Degree',
    'PotentialParams',
    'QuadratureSpec',
    'TruncationPolicy',
    'IntegralResult',
    'DEFAULT_SPEC',
    'NESTED_INNER_SPEC',
    'NESTED_OUTER_SPEC',
    'integrate_finite',
    'integrate_singular',
    'integrate_semi_infinite',
    'exponential_tail',
    'mc_oracle',
    'panel_rule',
    'subdivided_edges',
    'gamma_fn',
    'gauss_2f1',
    'gauss_2f1_euler',
    'legendre_p',
    'legendre_p_at_one',
    'spherical_function',
    'eigenvalue',
    'apply_G',
    'spectral_rule',
    'spectral_cutoff',
    'heat_kernel',
    'heat_kernel_table',
    'corollary2_heat_bound',
    'printed_cstar_terms',
    'GegenbauerError',
    'ParameterError',
    'DomainError',
    'DivergentParameters',
    'QuadratureError',
    'ToleranceNotMet',
    'NonFiniteIntegrand',
    'TailNotCertified',
    'SeriesNotConverged',
    'QuotientError',
    'CalibrationError',
    'DivergentNorm',
    'DominationViolation',
    'FixturesError',
]
