"""角计数、三线性分解、Behrend 构造与无角嵌入"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.core.config import tolerances
from cornerlab.exceptions import InvalidInputError
from cornerlab.models import ComplexField, CornerMode, GridSet, LineSet
from cornerlab.services.corners import (
    ANTIDIAGONAL_RULE,
    behrend_construct,
    corner_existence_check,
    count_corners,
    count_corners_pointwise,
    decompose,
    embed_corner_free,
    three_ap_free,
    trilinear_bound_check,
    verify_witness,
)


def test_single_corner(corner_set):
    result = count_corners(corner_set)
    assert result.count == 1
    assert (result.witness.k, result.witness.m, result.witness.d) == (1, 1, 1)
    assert result.witness.points() == [(1, 1), (2, 1), (1, 2)]
    assert verify_witness(corner_set, result.witness)


def test_empty_set_has_no_corners():
    result = count_corners(GridSet.empty(4))
    assert result.count == 0 and result.witness is None


def test_cyclic_mode_wraps():
    # (2,2), (0,2), (2,0) 是 d = 1 的循环角，网格中不是角
    A = GridSet.from_points(3, [(2, 2), (0, 2), (2, 0)])
    assert count_corners(A, CornerMode.GRID).count == 0
    cyclic = count_corners(A, CornerMode.CYCLIC)
    assert cyclic.count >= 1
    assert verify_witness(A, cyclic.witness, CornerMode.CYCLIC)


def test_full_grid_corner_count():
    n = 5
    expected = sum((n - d) ** 2 for d in range(1, n))
    assert count_corners(GridSet.full(n)).count == expected


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=30))
def test_enumerations_agree(points):
    A = GridSet.from_points(7, points)
    assert count_corners(A).count == count_corners_pointwise(A)


def test_decomposition_is_exact(rng):
    A = GridSet(8, rng.random((8, 8)) < 0.5)
    Q1 = GridSet(8, A.indicator() & (rng.random((8, 8)) < 0.7))
    Q2 = GridSet(8, A.indicator() & (rng.random((8, 8)) < 0.7))
    report = decompose(Q1, Q2, A)
    assert report.residual == pytest.approx(0.0, abs=1e-9)


def test_decomposition_requires_subsets():
    A = GridSet.from_points(4, [(0, 0)])
    with pytest.raises(InvalidInputError):
        decompose(GridSet.full(4), A, A)


def test_trilinear_bound(rng):
    n = 7
    h = ComplexField.of(np.exp(2j * np.pi * rng.random((n, n))))
    g = ComplexField.of(rng.random((n, n)))
    f = ComplexField.of(rng.random((n, n)) * 2 - 1)
    outcome = trilinear_bound_check(h, g, f)
    assert outcome.hypothesis_satisfied
    assert outcome.conclusion_held


def test_trilinear_unit_bound_follows_tolerances(rng):
    n = 5
    h = ComplexField.of(np.full((n, n), 1 + 1e-10))
    g = ComplexField.of(np.ones((n, n)))
    f = ComplexField.of(rng.random((n, n)) * 2 - 1)
    assert not trilinear_bound_check(h, g, f).hypothesis_satisfied
    tolerances.apply_overrides({"unit_bound": 1e-9})
    assert trilinear_bound_check(h, g, f).hypothesis_satisfied


def test_corner_existence_on_full_grid():
    A = GridSet.full(5)
    outcome = corner_existence_check(A, A, A)
    assert outcome.hypothesis_satisfied and outcome.conclusion_held


def test_three_ap_free():
    assert three_ap_free([1, 2, 4, 5])
    assert not three_ap_free([1, 3, 5])
    assert three_ap_free([])


def test_behrend_small_bound():
    result = behrend_construct(2)
    assert result.values == [1, 2]
    assert result.members.modulus == 2


@pytest.mark.parametrize("k", [9, 20, 100])
def test_behrend_sets_are_progression_free(k):
    result = behrend_construct(k)
    assert three_ap_free(result.values)
    assert all(1 <= v <= k for v in result.values)
    assert result.size == len(result.values)


def test_behrend_nine_has_four_elements():
    assert behrend_construct(9).size >= 4


def test_behrend_rejects_nonpositive_bound():
    with pytest.raises(InvalidInputError):
        behrend_construct(0)


def test_embedding_of_pair(behrend_pair):
    embedded = embed_corner_free(behrend_pair, 6)
    assert len(embedded) == 4
    assert count_corners(embedded).count == 0


def test_behrend_embedding_is_corner_free():
    result = behrend_construct(20)
    embedded = embed_corner_free(result.members, 60)
    assert len(embedded) == 20 * result.size
    assert count_corners(embedded).count == 0


def test_antidiagonal_rule_runs(behrend_pair):
    embedded = embed_corner_free(behrend_pair, 6, ANTIDIAGONAL_RULE)
    assert len(embedded) == 12


@pytest.mark.parametrize("n", [7, 0])
def test_embedding_needs_multiple_of_three(behrend_pair, n):
    with pytest.raises(InvalidInputError):
        embed_corner_free(behrend_pair, n)


def test_embedding_checks_modulus():
    with pytest.raises(InvalidInputError):
        embed_corner_free(LineSet(modulus=3, members=[0]), 6)
