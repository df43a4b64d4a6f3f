import math

import numpy as np
import pytest
from hypothesis import assume, example, given, settings
from hypothesis import strategies as st

from numerics.errors import DivergentParameters, DomainError
from numerics.params import GegenbauerParams
from numerics.quadrature import QuadratureSpec, integrate_singular
from numerics.special_functions import (
    apply_G,
    eigenvalue,
    gamma_fn,
    gauss_2f1,
    gauss_2f1_euler,
    heat_kernel,
    heat_kernel_table,
    legendre_p,
    legendre_p_at_one,
    spectral_rule,
    spherical_function,
)

EIGEN_REL_ERROR = 1e-4
HEAT_REL_ERROR = 1e-4
PARAMS = GegenbauerParams(lam=0.25)


@given(st.floats(min_value=-0.9, max_value=0.9))
@example(0.5)
def test_logarithm_series(z):
    """F(1, 1; 2; z) = -log(1 - z) / z"""
    assume(abs(z) > 1e-3)
    assert gauss_2f1(1.0, 1.0, 2.0, z) == pytest.approx(-math.log1p(-z) / z, rel=1e-12)


def test_gauss_summation_at_one():
    assert gauss_2f1(1.0, 1.0, 3.0, 1.0) == pytest.approx(2.0, rel=1e-12)


@settings(max_examples=30)
@given(
    a=st.floats(min_value=-2.0, max_value=2.0),
    b=st.floats(min_value=-2.0, max_value=2.0),
    c=st.floats(min_value=0.5, max_value=3.0),
    z=st.floats(min_value=-0.5, max_value=0.5),
)
def test_euler_transformation_matches_the_series(a, b, c, z):
    direct = gauss_2f1(a, b, c, z)
    assume(abs(direct) > 1e-3)
    assert gauss_2f1_euler(a, b, c, z) == pytest.approx(direct, rel=1e-9)


def test_divergent_arguments_raise():
    with pytest.raises(DivergentParameters):
        gauss_2f1(1.0, 1.0, 2.0, 1.5)
    with pytest.raises(DivergentParameters):
        gauss_2f1(1.0, 1.0, 1.5, 1.0)
    with pytest.raises(DivergentParameters):
        gauss_2f1(1.0, 1.0, -2.0, 0.5)


def test_gamma_needs_a_positive_argument():
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)
    with pytest.raises(DomainError):
        gamma_fn(0.0)


@given(st.floats(min_value=1.0, max_value=10.0))
def test_spherical_function_is_one_at_the_origin(gamma):
    assert spherical_function(PARAMS, gamma, 0.0) == pytest.approx(1.0, rel=1e-14)


@settings(max_examples=40)
@given(
    gamma=st.floats(min_value=1.0, max_value=8.0),
    x=st.floats(min_value=0.05, max_value=4.0),
)
def test_decaying_eigenfunction_is_bounded_by_its_value_at_one(gamma, x):
    scaled = abs(float(legendre_p(PARAMS, gamma, x))) * math.cosh(x) ** (gamma + 2.0 * PARAMS.lam)
    assert scaled <= float(legendre_p_at_one(PARAMS, gamma)) * (1.0 + 1e-9)


def test_degrees_below_one_are_rejected(params):
    with pytest.raises(DomainError):
        legendre_p(params, 0.5, 1.0)
    with pytest.raises(DomainError):
        legendre_p(params, 2.0, -1.0)


def test_array_inputs_broadcast(params):
    values = legendre_p(params, np.array([[1.5], [2.5]]), np.array([0.5, 1.0, 2.0]))
    assert values.shape == (2, 3)
    assert isinstance(legendre_p(params, 1.5, 1.0), float)


@pytest.mark.parametrize("gamma", [1.5, 2.5])
@pytest.mark.parametrize("x", [1.0, 2.0])
def test_both_eigenfunctions_solve_the_gegenbauer_equation(gamma, x, params):
    y = math.cosh(x)
    expected_factor = float(eigenvalue(params, gamma))
    for eigenfunction in (
        lambda v: legendre_p(params, gamma, np.arccosh(v)),
        lambda v: spherical_function(params, gamma, np.arccosh(v)),
    ):
        applied = float(apply_G(params, eigenfunction, y))
        assert applied == pytest.approx(expected_factor * float(eigenfunction(y)), rel=EIGEN_REL_ERROR)


def test_difference_stencil_must_stay_above_one(params):
    with pytest.raises(DomainError):
        apply_G(params, lambda v: v, 1.0005)


def test_spectral_rule_integrates_the_weight(params):
    """integral over [1, 3] of (g^2 - 1)^(-1/4), checked against adaptive quadrature"""
    _, weights = spectral_rule(params, gamma_max=3.0)
    spec = QuadratureSpec().with_exponents(params.lam - 0.5, 0.0)
    expected = integrate_singular(lambda g: (g + 1.0) ** (params.lam - 0.5), 1.0, 3.0, spec).value
    assert float(np.sum(weights)) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("r", [0.5, 1.0])
@pytest.mark.parametrize("x", [0.5, 1.0])
def test_heat_kernel_table_matches_adaptive_integral(r, x, params):
    tabulated = float(heat_kernel_table(params, r, x)[0, 0])
    assert tabulated == pytest.approx(heat_kernel(params, r, x), rel=HEAT_REL_ERROR)


def test_heat_kernel_table_shape(params):
    table = heat_kernel_table(params, [0.5, 1.0, 2.0], [0.0, 1.0])
    assert table.shape == (3, 2)


def test_heat_kernel_needs_positive_time(params):
    with pytest.raises(DomainError):
        heat_kernel(params, 0.0, 1.0)
