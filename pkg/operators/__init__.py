"""
Gegenbauer Operators
====================

The operators composed from the numerical tools: test functions, weighted
measure geometry, the generalized shift, maximal functions, function-space
norms, the transform pair and the Riesz potentials.
"""

from .function_spaces import NormSpec, bmo_norm, embedding_check, embedding_constant, evaluate_norm, lp_norm, morrey_norm
from .gegenbauer_transform import (
    CStarCalibration,
    ParsevalResult,
    SpectralFunction,
    calibrate_c_lambda,
    calibrate_cstar,
    forward_p,
    forward_p_grid,
    forward_q,
    forward_q_grid,
    g_multiplier_check,
    inverse_p,
    inverse_q,
    legendre_q,
    parseval_check,
    round_trip_error,
    shift_multiplier_check,
    spectral_gamma_max,
)
from .maximal_operators import (
    DistributionProfile,
    RadiusGrid,
    create_radius_grid,
    default_x_grid,
    differentiation_error,
    domination_ratio,
    maximal_G,
    maximal_G_profile,
    maximal_mu,
    maximal_mu_profile,
    strong_type_norm,
    weak_type_profile,
)
from .measure_geometry import (
    EnvelopeResult,
    WeightedInterval,
    ball_measure,
    ball_measure_table,
    doubling_ratio,
    doubling_sweep,
    elementary_sinh_check,
    lemma1_envelope,
    lemma2_bound,
    lemma2_case,
    origin_ball_envelope,
)
from .riesz_potential import (
    BmoCenter,
    ModifiedSplit,
    absolute_convergence,
    bmo_ratio,
    create_potential_params,
    kernel_bound_majorant,
    local_part_envelope,
    modified_riesz,
    modified_riesz_table,
    modified_split,
    riesz_apply,
    riesz_apply_kernel_form,
    riesz_apply_split,
    riesz_heat_form,
    riesz_heat_table,
    riesz_kernel_table,
    riesz_multiplier_check,
    riesz_table,
    sobolev_ratio,
    weak_1q_profile,
)
from .shift_operator import (
    ShiftedFunction,
    inner_profile,
    shift_apply,
    shift_average_integral,
    shift_average_kernel_form,
    shift_modulus,
    shift_power_kernel,
    shift_table,
    shifted_lp_norm,
)
from .test_functions import GridFunction, TestFunction, create_test_function, format_number

__all__ = [
    'TestFunction',
    'GridFunction',
    'create_test_function',
    'format_number',
    'WeightedInterval',
    'EnvelopeResult',
    'ball_measure',
    'ball_measure_table',
    'lemma1_envelope',
    'lemma2_bound',
    'lemma2_case',
    'doubling_ratio',
    'doubling_sweep',
    'elementary_sinh_check',
    'origin_ball_envelope',
    'ShiftedFunction',
    'shift_apply',
    'shift_power_kernel',
    'shift_table',
    'shift_average_integral',
    'shift_average_kernel_form',
    'inner_profile',
    'shift_modulus',
    'shifted_lp_norm',
    'RadiusGrid',
    'DistributionProfile',
    'create_radius_grid',
    'default_x_grid',
    'maximal_G',
    'maximal_G_profile',
    'maximal_mu',
    'maximal_mu_profile',
    'domination_ratio',
    'weak_type_profile',
    'strong_type_norm',
    'differentiation_error',
    'NormSpec',
    'lp_norm',
    'morrey_norm',
    'bmo_norm',
    'embedding_check',
    'embedding_constant',
    'evaluate_norm',
    'SpectralFunction',
    'CStarCalibration',
    'ParsevalResult',
    'forward_p',
    'forward_q',
    'forward_p_grid',
    'forward_q_grid',
    'inverse_p',
    'inverse_q',
    'calibrate_cstar',
    'calibrate_c_lambda',
    'round_trip_error',
    'legendre_q',
    'spectral_gamma_max',
    'parseval_check',
    'shift_multiplier_check',
    'g_multiplier_check',
    'BmoCenter',
    'ModifiedSplit',
    'create_potential_params',
    'riesz_apply',
    'riesz_apply_split',
    'riesz_apply_kernel_form',
    'riesz_table',
    'riesz_kernel_table',
    'riesz_heat_table',
    'riesz_heat_form',
    'riesz_multiplier_check',
    'kernel_bound_majorant',
    'sobolev_ratio',
    'absolute_convergence',
    'weak_1q_profile',
    'modified_riesz',
    'modified_riesz_table',
    'modified_split',
    'local_part_envelope',
    'bmo_ratio',
]
