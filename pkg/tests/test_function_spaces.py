import math

import pytest

from numerics.errors import DomainError, ParameterError
from operators.function_spaces import (
    NormSpec,
    bmo_norm,
    embedding_check,
    embedding_constant,
    evaluate_norm,
    lp_norm,
    morrey_norm,
)
from operators.measure_geometry import origin_ball_constant
from operators.test_functions import ConstantOne, Zero, create_test_function

MORREY_REL_ERROR = 1e-3


def test_lp_norms_in_closed_form_at_the_edge_order(edge):
    """with weight sh t: integral of e^(-2t) sh t is 1/3, and of sh t over [1, 2] is ch 2 - ch 1"""
    assert lp_norm(edge, create_test_function("exp_decay:2"), 1.0) == pytest.approx(1.0 / 3.0, rel=1e-8)
    expected = math.sqrt(math.cosh(2.0) - math.cosh(1.0))
    assert lp_norm(edge, create_test_function("indicator:1,2"), 2.0) == pytest.approx(expected, rel=1e-8)


def test_sup_norm_of_the_bump(params, bump):
    assert lp_norm(params, bump, math.inf) == pytest.approx(1.0, rel=1e-12)


def test_lp_norm_needs_p_at_least_one(params, bump):
    with pytest.raises(DomainError):
        lp_norm(params, bump, 0.5)
    assert lp_norm(params, Zero(), 2.0) == 0.0


def test_norms_are_homogeneous(params, grid, bump):
    assert lp_norm(params, -2.0 * bump, 2.0) == pytest.approx(2.0 * lp_norm(params, bump, 2.0), rel=1e-8)
    single = morrey_norm(params, bump, 2.0, 0.5, grid=grid)
    assert morrey_norm(params, 2.0 * bump, 2.0, 0.5, grid=grid) == pytest.approx(2.0 * single, rel=1e-10)


def test_modified_morrey_norm_dominates_the_plain_one(params, grid, bump):
    plain = morrey_norm(params, bump, 2.0, 0.5, grid=grid)
    modified = morrey_norm(params, bump, 2.0, 0.5, modified=True, grid=grid)
    assert modified >= plain


def test_morrey_norm_without_decay_exponent_is_the_lp_norm(params, grid, bump):
    """for gamma = 0 the largest ball swallows the whole shifted function"""
    assert morrey_norm(params, bump, 1.0, 0.0, grid=grid) == pytest.approx(lp_norm(params, bump, 1.0), rel=MORREY_REL_ERROR)


def test_morrey_exponent_is_capped_by_the_dimension(params, bump):
    with pytest.raises(ParameterError):
        NormSpec(p=2.0, morrey_gamma=2.0).check(params)
    with pytest.raises(ParameterError):
        morrey_norm(params, bump, 2.0, 2.0)
    with pytest.raises(DomainError):
        morrey_norm(params, bump, math.inf, 0.5)


def test_norm_dispatch(params, bump):
    assert evaluate_norm(params, bump, NormSpec(p=2.0)) == lp_norm(params, bump, 2.0)


def test_bmo_norm_of_a_constant_vanishes(params, grid):
    assert bmo_norm(params, ConstantOne(), grid=grid) == 0.0


def test_bmo_norm_of_a_bump_is_positive_and_bounded_by_twice_its_sup(params, grid, bump):
    value = bmo_norm(params, bump, grid=grid)
    assert 0.0 < value <= 2.0


def test_embedding_constant_follows_the_origin_ball_constant(params):
    assert embedding_constant(params, 1.0) == 1.0
    assert embedding_constant(params, 2.0) == pytest.approx(math.sqrt(origin_ball_constant(params)))


def test_embedding_exponents_must_balance(params, bump):
    with pytest.raises(ParameterError):
        embedding_check(params, bump, 2.0, 0.5, alpha=0.3)
    assert embedding_check(params, Zero(), 2.0, 0.5) == (0.0, 0.0)
