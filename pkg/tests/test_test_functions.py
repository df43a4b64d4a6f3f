import math

import numpy as np
import pytest
from pydantic import ValidationError

from numerics.errors import DivergentNorm, ParameterError
from operators.test_functions import (
    Bump,
    ConstantOne,
    GridFunction,
    Restricted,
    Zero,
    create_test_function,
    csv_text,
    format_number,
    sample_grid,
    truncation_window,
)


@pytest.mark.parametrize("key", ["bump:1,2", "exp_decay:2", "indicator:1,2", "identity", "constant_one", "zero", "power:-1"])
def test_registry_keys_round_trip_through_the_label(key):
    assert create_test_function(key).label == key


def test_unknown_function_and_wrong_arity_raise():
    with pytest.raises(ParameterError):
        create_test_function("gaussian:1")
    with pytest.raises(ParameterError):
        create_test_function("bump:1")


def test_bump_with_empty_support_is_rejected():
    with pytest.raises(ValidationError):
        Bump(a=2.0, b=1.0)


def test_bump_peaks_at_the_midpoint_and_vanishes_outside():
    f = Bump(a=1.0, b=2.0)
    assert f.of_x(1.5) == pytest.approx(1.0, rel=1e-15)
    assert f.of_x(np.array([0.5, 1.0, 2.0, 3.0])).tolist() == [0.0, 0.0, 0.0, 0.0]


def test_evaluation_in_y_and_in_x_agree():
    f = create_test_function("exp_decay:2")
    xs = np.linspace(0.0, 3.0, 7)
    np.testing.assert_allclose(f.evaluate(np.cosh(xs)), f.of_x(xs), rtol=1e-12)


def test_restriction_cuts_support_and_labels_the_window():
    f = Restricted(base=create_test_function("exp_decay:2"), hi=6.0)
    assert f.support == (0.0, 6.0)
    assert f.label == "exp_decay:2|(0,6)"
    assert f.of_x(7.0) == 0.0


def test_restriction_outside_the_support_is_zero():
    assert Restricted(base=Bump(a=1.0, b=2.0), hi=0.5).is_zero


def test_linear_combination_arithmetic():
    f = Bump(a=1.0, b=2.0)
    combined = 2.0 * f - f
    xs = np.linspace(0.0, 3.0, 13)
    np.testing.assert_allclose(combined.of_x(xs), f.of_x(xs), rtol=1e-15, atol=0.0)
    assert (f - f).of_x(1.5) == 0.0


def test_truncation_window_of_decaying_and_compact_functions():
    assert truncation_window(Bump(a=1.0, b=2.0)) == (1.0, 2.0)
    _, hi = truncation_window(create_test_function("exp_decay:2"), growth=0.5)
    assert math.exp(-1.5 * hi) < 1e-10


def test_truncation_window_needs_decay_faster_than_growth():
    with pytest.raises(DivergentNorm):
        truncation_window(ConstantOne())
    with pytest.raises(DivergentNorm):
        truncation_window(create_test_function("exp_decay:2"), growth=2.0)


def test_zero_is_zero():
    assert Zero().is_zero
    assert not ConstantOne().is_zero


def test_sample_grid_merges_breakpoints():
    grid = sample_grid(0.0, 3.0, 4, breaks=(1.5, 5.0))
    assert grid.tolist() == [0.0, 1.0, 1.5, 2.0, 3.0]


def test_grid_function_rejects_unsorted_or_non_finite_samples():
    with pytest.raises(ValidationError):
        GridFunction(x_grid=(1.0, 0.5), values=(0.0, 0.0))
    with pytest.raises(ValidationError):
        GridFunction(x_grid=(0.0, 0.5), values=(0.0, math.inf))


def test_numbers_survive_a_text_round_trip():
    value = 0.1 + 0.2
    assert float(format_number(value)) == value


def test_csv_has_header_and_one_row_per_sample():
    text = csv_text(("x", "value"), [0.0, 1.0], [2.0, 3.5])
    assert text == "x,value\n0,2\n1,3.5\n"
