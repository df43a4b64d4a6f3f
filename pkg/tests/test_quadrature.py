import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from numerics.errors import DomainError, NonFiniteIntegrand, TailNotCertified
from numerics.quadrature import (
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

REL_ERROR = 1e-8


def test_sine_over_half_period():
    assert integrate_finite(math.sin, 0.0, math.pi).value == pytest.approx(2.0, rel=REL_ERROR)


def test_empty_interval_is_zero():
    assert integrate_finite(math.exp, 1.0, 1.0).value == 0.0


def test_reversed_limits_raise():
    with pytest.raises(DomainError):
        integrate_finite(math.exp, 1.0, 0.0)


def test_non_finite_integrand_raises():
    with pytest.raises(NonFiniteIntegrand):
        integrate_finite(lambda t: math.nan, 0.0, 1.0)


def test_exponents_at_or_below_minus_one_are_rejected():
    with pytest.raises(ValidationError):
        QuadratureSpec(singularity_exponents=(-1.0, 0.0))


@settings(max_examples=40)
@given(
    degree=st.integers(min_value=0, max_value=6),
    b=st.floats(min_value=0.1, max_value=5.0),
)
def test_monomials_integrate_exactly(degree, b):
    value = integrate_finite(lambda t: t**degree, 0.0, b).value
    assert value == pytest.approx(b ** (degree + 1) / (degree + 1), rel=REL_ERROR)


@settings(max_examples=40)
@given(
    left=st.floats(min_value=-0.9, max_value=1.0),
    right=st.floats(min_value=-0.9, max_value=1.0),
)
def test_algebraic_weight_gives_the_beta_function(left, right):
    """integral over [0, 1] of t^bl (1 - t)^br is B(bl + 1, br + 1)"""
    spec = QuadratureSpec().with_exponents(left, right)
    value = integrate_singular(lambda t: 1.0, 0.0, 1.0, spec).value
    expected = math.exp(math.lgamma(left + 1.0) + math.lgamma(right + 1.0) - math.lgamma(left + right + 2.0))
    assert value == pytest.approx(expected, rel=1e-7)


def test_inverse_square_root_singularity():
    spec = QuadratureSpec().with_exponents(-0.5, 0.0)
    assert integrate_singular(lambda t: 1.0, 0.0, 1.0, spec).value == pytest.approx(2.0, rel=REL_ERROR)


def test_exponential_on_the_half_line():
    spec = QuadratureSpec()
    result = integrate_semi_infinite(lambda t: math.exp(-t), 0.0, spec, tail=exponential_tail(1.0, 1.0))
    assert result.value == pytest.approx(1.0, rel=REL_ERROR)
    # body within the requested tolerance, tail within the certified bound
    assert result.error_estimate <= spec.tolerance_for(result.value) + spec.truncation.tail_tol


def test_tail_that_never_certifies_raises():
    spec = QuadratureSpec(truncation=TruncationPolicy(max_cutoff=64.0))
    with pytest.raises(TailNotCertified):
        integrate_semi_infinite(lambda t: 1.0 / (1.0 + t * t), 0.0, spec)


def test_exponential_tail_needs_positive_rate():
    with pytest.raises(DomainError):
        exponential_tail(1.0, 0.0)


def test_monte_carlo_agrees_within_five_standard_errors():
    estimate, error = mc_oracle(lambda t: t * t, (0.0, 1.0), 20_000, seed=7)
    assert abs(estimate - 1.0 / 3.0) <= 5.0 * error


def test_monte_carlo_is_reproducible_from_its_seed():
    first = mc_oracle(lambda t: np.sin(t), (0.0, 2.0), 1_000, seed=11)
    second = mc_oracle(lambda t: np.sin(t), (0.0, 2.0), 1_000, seed=11)
    assert first == second


def test_monte_carlo_importance_sampling_of_a_weight():
    estimate, error = mc_oracle(lambda t: np.ones_like(t), (0.0, 1.0), 10_000, seed=3, weight_exponents=(-0.5, 0.0))
    assert estimate == pytest.approx(2.0, rel=1e-12)
    assert error == pytest.approx(0.0, abs=1e-12)


def test_panel_rule_with_jacobi_origin_panel():
    """integral over [0, 2] of t^(1/2) against a rule that folds the weight in"""
    edges = subdivided_edges(0.0, 2.0, max_width=0.5)
    nodes, weights = panel_rule(edges, 12, weight=np.sqrt, origin=0.0, origin_exponent=0.5)
    assert float(np.sum(weights)) == pytest.approx(2.0**1.5 / 1.5, rel=1e-12)
    assert nodes.shape == weights.shape == (4, 12)


def test_subdivided_edges_keep_breakpoints():
    edges = subdivided_edges(0.0, 1.0, breaks=(0.3, 2.0), max_width=0.5)
    assert 0.3 in edges
    assert edges[0] == 0.0 and edges[-1] == 1.0
    assert np.all(np.diff(edges) > 0.0)
