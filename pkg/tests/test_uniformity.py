"""α-一致性、盒范数与立方体计数"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.exceptions import InvalidInputError, SupportViolationError
from cornerlab.models import Box, ComplexField, CubeMethod, GridSet, LineSet, Normalization
from cornerlab.services.uniformity import (
    alpha_uniformity_1d,
    alpha_uniformity_2d,
    alpha_uniformity_box,
    box_alpha,
    box_inner_product,
    box_norm,
    count_cubes,
    cube_bounds_report,
    grid_alpha,
    progression_discrepancy,
    set_uniformity,
    uniformity_payload,
)
from cornerlab.services.zn_core import balanced_box_function, balanced_function


def test_constant_one_on_the_grid_has_alpha_one():
    report = alpha_uniformity_2d(ComplexField.of(np.ones((6, 6))))
    assert report.minimal_alpha == pytest.approx(1.0)
    assert report.normalization == Normalization.GRID
    assert report.method_agreement


def test_constant_one_on_the_line_has_alpha_one():
    report = alpha_uniformity_1d(ComplexField.of(np.ones(9)))
    assert report.minimal_alpha == pytest.approx(1.0)
    assert report.denominator == 9.0 ** 3


def test_full_set_is_perfectly_uniform():
    assert alpha_uniformity_2d(balanced_function(GridSet.full(5))).minimal_alpha == pytest.approx(0.0)
    assert grid_alpha(GridSet.full(5)) == pytest.approx(0.0)


def test_functional_needs_disk_values():
    with pytest.raises(InvalidInputError):
        alpha_uniformity_1d(ComplexField.of([1.5, 0.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(st.lists(st.booleans(), min_size=2, max_size=24))
def test_one_dimensional_methods_agree(bits):
    chi = np.asarray(bits, dtype=float)
    report = alpha_uniformity_1d(ComplexField.of(chi - chi.mean()))
    assert report.method_agreement
    assert report.functional_value == pytest.approx(report.alternate_value, rel=1e-6, abs=1e-6)


def test_two_dimensional_methods_agree_on_both_paths(rng):
    for n in (7, 40):
        A = GridSet(n, rng.random((n, n)) < 0.3)
        assert alpha_uniformity_2d(balanced_function(A)).method_agreement


def test_box_norm_of_constant_is_n_to_the_fourth():
    n = 5
    value = box_norm(ComplexField.of(np.ones((n, n))), Box.full(n))
    assert value.fourth_power == pytest.approx(n ** 4)
    assert value.dual_formula_fourth_power == pytest.approx(n ** 4)
    assert value.value == pytest.approx(n)


def test_box_norm_primal_matches_dual(rng):
    values = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    values /= np.abs(values).max()
    value = box_norm(ComplexField.of(values), Box.full(6))
    assert value.fourth_power == pytest.approx(value.dual_formula_fourth_power, rel=1e-9)
    assert box_inner_product(values, values, values, values).real == pytest.approx(value.fourth_power, rel=1e-9)


def test_box_norm_requires_support():
    box = Box(e1=LineSet.interval(4, 0, 2), e2=LineSet.full(4))
    values = np.zeros((4, 4))
    values[3, 1] = 1.0
    with pytest.raises(SupportViolationError):
        box_norm(ComplexField.of(values), box)


def test_box_uniformity_of_random_set_is_consistent(rng):
    A = GridSet(10, rng.random((10, 10)) < 0.5)
    box = Box.full(10)
    report = alpha_uniformity_box(balanced_box_function(A, box), box)
    assert report.method_agreement
    assert report.minimal_alpha == pytest.approx(box_alpha(A, box), rel=1e-9, abs=1e-12)


def test_cube_counts():
    assert count_cubes(GridSet.full(4)).count == 4 ** 4
    assert count_cubes(GridSet.from_points(4, [(2, 1)])).count == 1
    single = count_cubes(GridSet.from_points(4, [(2, 1)]), nondegenerate=True)
    assert single.nondegenerate == 0


def test_cube_methods_agree(rng):
    A = GridSet(7, rng.random((7, 7)) < 0.4)
    brute = count_cubes(A, CubeMethod.BRUTE, nondegenerate=True)
    spectral = count_cubes(A, CubeMethod.SPECTRAL, nondegenerate=True)
    assert brute.count == spectral.count
    assert brute.nondegenerate == spectral.nondegenerate


def test_cube_lower_bound(rng):
    A = GridSet(8, rng.random((8, 8)) < 0.35)
    report = cube_bounds_report(A)
    assert report.lower_holds
    assert report.cubes >= report.lower


def test_cube_upper_bound_on_full_grid():
    report = cube_bounds_report(GridSet.full(6))
    assert report.upper_applicable
    assert report.upper_holds


def test_discrepancy_on_intervals(rng):
    A = GridSet(12, rng.random((12, 12)) < 0.4)
    P = Box(e1=LineSet.interval(12, 10, 5), e2=LineSet.interval(12, 3, 4))
    report = progression_discrepancy(A, P)
    assert report.holds
    again = progression_discrepancy(A, P, alpha=report.alpha)
    assert again.discrepancy == report.discrepancy


def test_discrepancy_needs_intervals():
    P = Box(e1=LineSet(modulus=8, members=[0, 2]), e2=LineSet.full(8))
    with pytest.raises(InvalidInputError):
        progression_discrepancy(GridSet.full(8), P)


def test_set_uniformity_picks_normalization():
    line = LineSet(modulus=5, members=[0, 2])
    _, report = set_uniformity(line)
    assert report.normalization == Normalization.LINE
    A = GridSet.from_points(4, [(0, 0), (1, 2), (3, 3)])
    field, report = set_uniformity(A, Normalization.BOX)
    assert report.normalization == Normalization.BOX
    assert np.allclose(field.values, balanced_box_function(A, Box.full(4)).values)
    _, report = set_uniformity(A)
    assert report.normalization == Normalization.GRID
    payload = uniformity_payload(report)
    assert payload["alpha"] == report.minimal_alpha
    assert payload["normalization"] == "grid"
    assert set(payload) == {"functional", "alpha", "denominator", "method_agreement", "normalization"}
