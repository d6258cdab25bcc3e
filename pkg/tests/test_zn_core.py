"""网格集合、盒子与边缘密度"""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.exceptions import InvalidInputError, ShapeMismatchError, SupportViolationError
from cornerlab.models import Box, ComplexField, GridSet, LineSet
from cornerlab.services.zn_core import (
    GENERIC_SCALE,
    balanced_box_function,
    balanced_function,
    make_grid_set,
    marginal_profile,
    marginal_uniformity_check,
)


def test_duplicates_are_merged():
    A = make_grid_set(4, [(0, 0), (0, 0), (1, 2)])
    assert len(A) == 2
    assert A.points() == [(0, 0), (1, 2)]


def test_out_of_range_point_is_reported():
    with pytest.raises(InvalidInputError) as exc:
        make_grid_set(3, [(0, 0), (3, 1)])
    assert "(3, 1)" in exc.value.detail


def test_storage_switches_with_density():
    assert GridSet.from_points(16, [(0, 0)]).storage == "sparse"
    assert GridSet.full(16).storage == "dense"
    sparse = GridSet.from_points(16, [(2, 3), (5, 5)])
    dense = GridSet(16, sparse.indicator())
    assert sparse == dense
    assert (5, 5) in sparse and (5, 4) not in sparse


def test_line_set_canonicalises_members():
    line = LineSet(modulus=5, members=[4, 1, 1, 0])
    assert line.members == (0, 1, 4)
    assert 4 in line and 2 not in line
    with pytest.raises(InvalidInputError):
        LineSet(modulus=5, members=[5])


def test_box_rejects_mixed_moduli():
    with pytest.raises(ShapeMismatchError):
        Box(e1=LineSet.full(3), e2=LineSet.full(4))


def test_full_grid_profile():
    profile = marginal_profile(GridSet.full(5))
    assert profile.delta == 1
    assert profile.row_deviation == 0 and profile.col_deviation == 0
    assert set(profile.row_density.values()) == {Fraction(1)}


def test_profile_requires_support():
    box = Box(e1=LineSet.interval(4, 0, 2), e2=LineSet.full(4))
    with pytest.raises(SupportViolationError) as exc:
        marginal_profile(GridSet.from_points(4, [(3, 0)]), box)
    assert exc.value.point == (3, 0)


def test_box_balanced_function_on_single_point():
    # N=2，A={(0,0)}：δ_0 = 1/2，f(0,0)=1/2，f(1,0)=−1/2，第二行全为 0
    f = balanced_box_function(GridSet.from_points(2, [(0, 0)]))
    assert f.values[0, 0] == pytest.approx(0.5)
    assert f.values[1, 0] == pytest.approx(-0.5)
    assert f.values[0, 1] == pytest.approx(0.0)
    assert f.values[1, 1] == pytest.approx(0.0)


def test_rows_of_box_balanced_function_sum_to_exactly_zero(rng):
    A = GridSet(9, rng.random((9, 9)) < 0.4)
    f = balanced_box_function(A)
    assert np.all(f.values.sum(axis=0) == 0.0)
    assert all(math.fsum(column) == 0.0 for column in f.values.real.T)


@pytest.mark.parametrize("n", [3, 7, 37, 101])
def test_box_balanced_function_on_odd_boxes(rng, n):
    mask = rng.random((n, n)) < 0.3
    mask[1::2] = False
    A = GridSet(n, mask)
    box = Box(e1=LineSet(modulus=n, members=range(0, n, 2)), e2=LineSet.full(n))
    f = balanced_box_function(A, box).values.real
    rows = list(range(0, n, 2))
    chi = A.indicator()[rows].astype(float)
    expected = chi - chi.mean(axis=0)
    assert np.max(np.abs(f[rows] - expected)) < 1e-12
    assert np.all(f[rows][::-1].sum(axis=0) == 0.0)
    assert np.all(f[1::2] == 0.0)


def test_grid_balanced_function_sums_to_zero(rng):
    A = GridSet(7, rng.random((7, 7)) < 0.3)
    assert abs(balanced_function(A).values.sum()) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=30))
def test_marginal_sums_are_exact(points):
    A = make_grid_set(6, points)
    profile = marginal_profile(A)
    assert sum(profile.row_density.values()) * 6 == len(A)
    assert sum(profile.col_density.values()) * 6 == len(A)
    assert profile.delta == Fraction(len(A), 36)


def test_generic_scale_is_weaker_than_standard():
    A = GridSet.from_points(4, [(k, 0) for k in range(4)])
    profile = marginal_profile(A)
    # Σ(δ_m−δ)² = 3/4
    alpha1 = Fraction(1, 4)
    assert profile.row_deviation == Fraction(3, 4)
    assert not marginal_uniformity_check(profile, alpha1).rows_balanced
    assert marginal_uniformity_check(profile, alpha1, scale=GENERIC_SCALE).rows_balanced


def test_unknown_scale():
    with pytest.raises(InvalidInputError):
        marginal_uniformity_check(marginal_profile(GridSet.full(2)), Fraction(1, 2), scale="other")


def test_disk_valued_guard():
    with pytest.raises(InvalidInputError):
        ComplexField.of([2.0, 0.0], bounded=True)
    with pytest.raises(ShapeMismatchError):
        ComplexField.of(np.zeros((2, 3)))
