import math

import numpy as np
import pytest
from pydantic import ValidationError

from numerics.errors import DomainError, ParameterError
from numerics.params import PotentialParams
from numerics.special_functions import eigenvalue
from operators.gegenbauer_transform import forward_p
from operators.riesz_potential import (
    BmoCenter,
    absolute_convergence,
    bmo_center,
    create_potential_params,
    kernel_mass,
    local_part_envelope,
    modified_riesz,
    modified_split,
    riesz_apply,
    riesz_apply_kernel_form,
    riesz_apply_split,
    riesz_heat_form,
    riesz_kernel_table,
    riesz_multiplier_check,
    riesz_table,
)
from operators.function_spaces import lp_norm
from operators.test_functions import Zero

SPLIT_REL_ERROR = 1e-4
KERNEL_REL_ERROR = 1e-3
TABLE_REL_ERROR = 1e-4


@pytest.fixture
def sobolev(params):
    return create_potential_params(params, 0.5, 2.0)


@pytest.fixture
def bmo_line(params):
    return create_potential_params(params, 0.5, 3.0)


def test_sobolev_exponent(sobolev, bmo_line):
    assert sobolev.regime == "sobolev"
    assert sobolev.q == pytest.approx(6.0)
    assert bmo_line.regime == "bmo"


def test_near_and_far_parts_add_up(params, sobolev, bump):
    near, far = riesz_apply_split(params, sobolev, bump, 1.5, 1.0)
    assert near + far == pytest.approx(riesz_apply(params, sobolev, bump, 1.5), rel=1e-6)
    assert near > 0.0 and far > 0.0


def test_split_needs_a_positive_radius(params, sobolev, bump):
    with pytest.raises(DomainError):
        riesz_apply_split(params, sobolev, bump, 1.5, 0.0)


@pytest.mark.parametrize("x", [0.5, 1.5, 3.0])
def test_fixed_rule_matches_adaptive_potential(x, params, sobolev, bump):
    tabulated = float(riesz_table(params, sobolev, bump, x)[0])
    assert tabulated == pytest.approx(riesz_apply(params, sobolev, bump, x), rel=TABLE_REL_ERROR)


def test_potential_of_a_positive_function_converges_absolutely(params, sobolev, bump):
    xs = np.array([0.0, 1.0, 2.5])
    np.testing.assert_allclose(absolute_convergence(params, sobolev, bump, xs), riesz_table(params, sobolev, bump, xs), rtol=1e-12)


def test_potential_of_zero_vanishes(params, sobolev):
    assert riesz_apply(params, sobolev, Zero(), 1.0) == 0.0
    np.testing.assert_array_equal(riesz_table(params, sobolev, Zero(), [0.5, 1.0]), np.zeros(2))


def test_potential_rejects_mismatched_order_and_negative_x(params, bump):
    with pytest.raises(ParameterError):
        riesz_apply(params, PotentialParams(lam=0.4, alpha=0.5, p=2.0), bump, 1.0)
    with pytest.raises(DomainError):
        riesz_apply(params, create_potential_params(params, 0.5, 2.0), bump, -1.0)


@pytest.mark.parametrize("x", [0.5, 1.0])
def test_heat_and_spectral_kernels_agree(x, params):
    heat = float(riesz_kernel_table(params, 0.5, x, method="heat")[0])
    spectral = float(riesz_kernel_table(params, 0.5, x, method="spectral")[0])
    assert heat == pytest.approx(spectral, rel=KERNEL_REL_ERROR)


def test_kernel_mass_is_oriented(params, sobolev, bump):
    forward = kernel_mass(params, sobolev, bump, 1.2, 1.8)
    assert forward > 0.0
    assert kernel_mass(params, sobolev, bump, 1.8, 1.2) == -forward
    assert kernel_mass(params, sobolev, bump, 3.0, 4.0) == 0.0


def test_modified_potential_lives_on_the_bmo_line(params, sobolev, bump):
    with pytest.raises(ParameterError):
        modified_riesz(params, sobolev, bump, 1.0)
    with pytest.raises(ParameterError):
        modified_split(params, sobolev, bump, 1.0, 1.0)


@pytest.mark.parametrize("r", [0.5, 6.0])
def test_modified_split_reassembles_the_modified_potential(r, params, bmo_line, bump):
    split = modified_split(params, bmo_line, bump, 1.5, r)
    assert split.total == pytest.approx(modified_riesz(params, bmo_line, bump, 1.5), rel=SPLIT_REL_ERROR)
    assert split.center.a_f == pytest.approx(split.center.a1 + split.center.a2, rel=1e-12)


def test_centring_constants_vanish_when_the_quarter_radius_is_the_threshold(params, bmo_line, bump):
    center = bmo_center(params, bmo_line, bump, 1.0)
    assert center.a1 == 0.0
    assert center.a2 == 0.0


def test_centring_constants_must_add_up():
    with pytest.raises(ValidationError):
        BmoCenter(a1=1.0, a2=2.0, a_f=4.0)


def test_heat_form_of_a_positive_function_is_positive(params, sobolev, bump):
    assert riesz_heat_form(params, sobolev, bump, 1.5) > 0.0
    with pytest.raises(DomainError):
        riesz_heat_form(params, sobolev, bump, -0.5)


@pytest.mark.parametrize("x", [1.5, 2.5])
def test_literal_kernel_form_matches_the_dual_form(x, params, sobolev, bump):
    # x = 1.5 sits inside the support, where the shifted kernel is singular at t = x
    literal = riesz_apply_kernel_form(params, sobolev, bump, x)
    assert literal == pytest.approx(riesz_apply(params, sobolev, bump, x), rel=KERNEL_REL_ERROR)


@pytest.mark.parametrize("r", [6.0, 8.0])
def test_local_part_sees_the_function_once_the_quarter_radius_reaches_its_support(r, params, bmo_line, bump, grid):
    lhs, maximal, norm = local_part_envelope(params, bmo_line, bump, 1.5, r, grid)
    assert lhs > 1e-8
    assert maximal > 0.0
    assert norm == pytest.approx(lp_norm(params, bump, 3.0), rel=1e-12)


def test_local_part_vanishes_while_the_quarter_radius_misses_the_support(params, bmo_line, bump, grid):
    lhs, _, _ = local_part_envelope(params, bmo_line, bump, 1.5, 2.0, grid)
    assert lhs == pytest.approx(0.0, abs=1e-12)


def test_multiplier_check_of_zero_is_zero(params, sobolev):
    assert riesz_multiplier_check(params, sobolev, Zero(), 2.0) == (0.0, 0.0)


def test_multiplier_check_pairs_the_potential_with_the_scaled_transform(params, sobolev, bump):
    lhs, rhs = riesz_multiplier_check(params, sobolev, bump, 1.5)
    assert math.isfinite(lhs)
    expected = float(eigenvalue(params, 1.5)) ** (-0.5 * sobolev.alpha) * forward_p(params, bump, 1.5)
    assert rhs == pytest.approx(expected, rel=1e-12)
