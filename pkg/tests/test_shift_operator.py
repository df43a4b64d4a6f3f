import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numerics.errors import DivergentNorm, DomainError
from numerics.params import GegenbauerParams
from operators.shift_operator import (
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
from operators.test_functions import Bump, ConstantOne, Identity, PowerKernel

PARAMS = GegenbauerParams(lam=0.25)
NORMALISATION_ERROR = 1e-8


@settings(max_examples=40)
@given(
    lam=st.sampled_from([0.1, 0.25, 0.4]),
    t=st.floats(min_value=0.0, max_value=3.0),
    x=st.floats(min_value=0.0, max_value=3.0),
)
def test_shift_preserves_constants(lam, t, x):
    value = float(shift_table(GegenbauerParams(lam=lam), ConstantOne(), t, x))
    assert value == pytest.approx(1.0, rel=NORMALISATION_ERROR)


@settings(max_examples=40)
@given(
    t=st.floats(min_value=0.0, max_value=3.0),
    x=st.floats(min_value=0.0, max_value=3.0),
)
def test_shift_of_the_identity_is_a_product(t, x):
    value = float(shift_table(PARAMS, Identity(), t, x))
    assert value == pytest.approx(math.cosh(x) * math.cosh(t), rel=NORMALISATION_ERROR)


@settings(max_examples=25)
@given(
    t=st.floats(min_value=0.0, max_value=3.0),
    x=st.floats(min_value=0.0, max_value=3.0),
)
def test_shift_is_symmetric_in_its_two_arguments(t, x):
    f = Bump(a=1.0, b=2.0)
    assert float(shift_table(PARAMS, f, t, x)) == pytest.approx(float(shift_table(PARAMS, f, x, t)), rel=1e-12, abs=1e-15)


def test_zero_shift_is_the_identity_operator(bump):
    xs = np.linspace(0.0, 3.0, 13)
    np.testing.assert_array_equal(shift_table(PARAMS, bump, 0.0, xs), bump.of_x(xs))


@pytest.mark.parametrize("t,x", [(0.3, 1.4), (0.75, 1.5), (1.2, 0.6), (2.0, 1.0)])
def test_fixed_rule_matches_the_angular_integral(t, x, bump):
    assert float(shift_table(PARAMS, bump, t, x)) == pytest.approx(shift_apply(PARAMS, bump, t, x), abs=1e-7)


def test_negative_arguments_are_rejected(bump):
    with pytest.raises(DomainError):
        shift_table(PARAMS, bump, -0.1, 1.0)
    with pytest.raises(DomainError):
        shift_apply(PARAMS, bump, 0.5, -1.0)


def test_table_broadcasts_t_against_x(bump):
    table = shift_table(PARAMS, bump, np.array([[0.5], [1.0]]), np.linspace(0.0, 3.0, 5))
    assert table.shape == (2, 5)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_shift_contracts_the_l2_norm(t, bump):
    shifted, original = shifted_lp_norm(PARAMS, bump, t, 2.0)
    assert shifted <= original * (1.0 + 1e-6)


def test_shift_preserves_the_integral_of_a_positive_function(bump):
    shifted, original = shifted_lp_norm(PARAMS, bump, 0.75, 1.0)
    assert shifted == pytest.approx(original, rel=1e-6)


def test_modulus_shrinks_as_the_shift_vanishes(bump):
    assert shift_modulus(PARAMS, bump, 0.0, 2.0) == 0.0
    assert shift_modulus(PARAMS, bump, 0.01, 2.0) < shift_modulus(PARAMS, bump, 0.25, 2.0)


def test_shifted_function_evaluates_through_the_table(bump):
    shifted = ShiftedFunction(base=bump, params=PARAMS, t=0.5)
    assert shifted.support == (0.5, 2.5)
    assert shifted.of_x(1.5) == pytest.approx(float(shift_table(PARAMS, bump, 0.5, 1.5)), rel=1e-15)
    assert shifted.label == "A_0.5[bump:1,2]"


def test_ball_average_nested_and_kernel_forms_agree(bump):
    nested = shift_average_integral(PARAMS, bump, 1.5, 0.75)
    kernel = shift_average_kernel_form(PARAMS, bump, 1.5, 0.75)
    assert kernel == pytest.approx(nested, rel=1e-5)


def test_inner_profile_is_full_at_the_bottom_of_a_ball_containing_the_origin():
    assert inner_profile(PARAMS, 0.5, 1.0, 1.0) == pytest.approx(PARAMS.full_beta, rel=1e-12)
    zs = np.linspace(math.cosh(0.5), math.cosh(2.5), 9)
    values = inner_profile(PARAMS, 1.5, zs, 1.0)
    assert np.all((values >= 0.0) & (values <= PARAMS.full_beta * (1.0 + 1e-12)))
    with pytest.raises(DomainError):
        inner_profile(PARAMS, 0.0, 1.0, 1.0)


def test_power_kernel_shift_matches_the_generic_angular_integral():
    kernel = PowerKernel(exponent=-1.0)
    assert shift_power_kernel(PARAMS, -1.0, 0.5, 1.5) == pytest.approx(shift_apply(PARAMS, kernel, 0.5, 1.5), rel=1e-6)


def test_power_kernel_shift_blows_up_like_a_power_of_the_distance():
    # lambda = 1/4, exponent -1: A_t k(x) ~ |t - x|^(2 lambda - 1)
    near = shift_power_kernel(PARAMS, -1.0, 1.5 - 1e-6, 1.5, distance=1e-6)
    far = shift_power_kernel(PARAMS, -1.0, 1.5 - 4e-6, 1.5, distance=4e-6)
    assert near / far == pytest.approx(2.0, rel=1e-2)


def test_power_kernel_shift_diverges_on_the_diagonal():
    with pytest.raises(DivergentNorm):
        shift_power_kernel(PARAMS, -1.0, 1.5, 1.5)
