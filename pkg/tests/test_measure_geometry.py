import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from numerics.errors import DomainError
from numerics.params import GegenbauerParams
from operators.measure_geometry import (
    WeightedInterval,
    ball_measure,
    ball_measure_table,
    doubling_ratio,
    doubling_sweep,
    elementary_sinh_check,
    lemma1_envelope,
    lemma2_bound,
    lemma2_case,
    origin_ball_constant,
    origin_ball_envelope,
)

EDGE = GegenbauerParams.edge()
REL_ERROR = 1e-8


def test_interval_is_cut_at_the_origin():
    iv = WeightedInterval(center=0.5, radius=2.0)
    assert iv.endpoints == (0.0, 2.5)
    assert iv.touches_origin


def test_non_positive_radius_is_rejected():
    with pytest.raises(ValidationError):
        WeightedInterval(center=1.0, radius=0.0)


@settings(max_examples=30)
@given(r=st.floats(min_value=0.1, max_value=5.0))
def test_origin_ball_in_closed_form_at_the_edge_order(r):
    """at lambda = 1/2 the weight is sh t and |H(0, r)| = ch r - 1"""
    expected = math.cosh(r) - 1.0
    assert ball_measure(EDGE, WeightedInterval(center=0.0, radius=r)) == pytest.approx(expected, rel=REL_ERROR)
    assert float(ball_measure_table(EDGE, 0.0, r)) == pytest.approx(expected, rel=REL_ERROR)


@settings(max_examples=30)
@given(
    x=st.floats(min_value=0.0, max_value=4.0),
    r=st.floats(min_value=0.05, max_value=4.0),
)
def test_off_centre_ball_in_closed_form_at_the_edge_order(x, r):
    lo, hi = max(x - r, 0.0), x + r
    expected = math.cosh(hi) - math.cosh(lo)
    assert float(ball_measure_table(EDGE, x, r)) == pytest.approx(expected, rel=REL_ERROR)


def test_measure_table_broadcasts(params):
    table = ball_measure_table(params, np.array([[0.0], [1.0]]), np.array([0.5, 1.0, 2.0]))
    assert table.shape == (2, 3)
    assert np.all(np.diff(table, axis=1) > 0.0)


@pytest.mark.parametrize("lam", [0.1, 0.25, 0.4])
@pytest.mark.parametrize("r", [0.05, 0.3, 1.0, 2.0, 5.0, 10.0])
def test_origin_ball_is_bracketed_by_the_envelope(lam, r):
    envelope = lemma1_envelope(GegenbauerParams(lam=lam), r)
    assert envelope.regime == ("small_radius" if r <= 1.0 else "large_radius")
    assert envelope.brackets


def test_envelope_needs_positive_radius(params):
    with pytest.raises(DomainError):
        lemma1_envelope(params, 0.0)


def test_single_power_envelope_covers_every_radius(params):
    for r in np.geomspace(0.01, 10.0, 12):
        envelope = origin_ball_envelope(params, float(r))
        assert envelope.measured <= envelope.upper
    assert origin_ball_constant(params) > 0.0


def test_four_cases_of_the_off_centre_comparison(params):
    assert lemma2_case(params, 0.1, 0.5) == "a.near"
    assert lemma2_case(params, 2.0, 0.5) == "a.far"
    assert lemma2_case(params, 3.0, 2.0) == "b.near"
    assert lemma2_case(params, 5.0, 2.0) == "b.far"
    assert lemma2_bound(params, 0.1, 0.5) == pytest.approx(0.5**1.5)
    assert lemma2_bound(params, 5.0, 2.0) == pytest.approx(math.cosh(5.0) ** 0.5 * math.cosh(2.0) ** 0.5)


def test_small_origin_balls_double_like_the_homogeneous_dimension(params):
    assert doubling_ratio(params, 0.0, 1e-3) == pytest.approx(2.0 ** (2.0 * params.lam + 1.0), rel=1e-3)


def test_doubling_sweep_is_finite_and_above_one(params):
    ratio = doubling_sweep(params, [0.0, 1.0, 3.0], [0.1, 1.0, 5.0])
    assert 1.0 < ratio < math.inf


def test_elementary_sinh_sandwich():
    ok, worst = elementary_sinh_check(1.0)
    assert ok
    assert worst == pytest.approx(0.0, abs=1e-15)
