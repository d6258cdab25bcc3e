"""密度增量定位"""

from fractions import Fraction

import numpy as np
import pytest

from cornerlab.core.profiles import TOY_PROFILE
from cornerlab.models import Box, GridSet, IncrementKind, LineSet
from cornerlab.services.increment import find_density_increment


def _density(A: GridSet, g1: LineSet, g2: LineSet) -> Fraction:
    chi = A.indicator()
    return Fraction(int(chi[np.ix_(g1.index(), g2.index())].sum()), len(g1) * len(g2))


def test_top_half_rows_give_marginal_increment():
    n = 8
    A = GridSet.from_points(n, [(k, m) for k in range(n) for m in range(n // 2)])
    result = find_density_increment(A, None, 0.5)
    assert result.kind == IncrementKind.INCREMENT
    assert result.route.startswith("marginal-rows")
    assert result.delta == Fraction(1, 2)
    assert result.new_density == 1
    assert result.g2.members == tuple(range(n // 2))
    assert result.floors_met


def test_full_and_empty_sets_are_uniform():
    for A in (GridSet.full(6), GridSet.empty(6)):
        result = find_density_increment(A, None, 0.1)
        assert result.kind == IncrementKind.UNIFORM
        assert result.new_density == result.delta


def test_planted_block_gives_denser_rectangle():
    n = 32
    mask = np.zeros((n, n), dtype=bool)
    mask[8:16, 8:16] = True
    mask[np.arange(0, n, 5), np.arange(0, n, 5)] = True
    A = GridSet(n, mask)
    result = find_density_increment(A, None, 0.1)
    assert result.kind == IncrementKind.INCREMENT
    assert result.new_density > result.delta
    assert _density(A, result.g1, result.g2) == result.new_density
    assert result.new_density >= Fraction(1, 4)
    assert result.density_gain == result.new_density - result.delta


@pytest.mark.parametrize("seed", range(6))
def test_increment_is_sound(seed):
    rng = np.random.default_rng(seed)
    n = 12
    mask = rng.random((n, n)) < rng.uniform(0.2, 0.6)
    # 一整行使边缘偏差失衡
    mask[:, int(rng.integers(n))] = True
    mask[0, 0] = False
    A = GridSet(n, mask)
    result = find_density_increment(A, None, 0.01)
    assert result.kind == IncrementKind.INCREMENT
    assert result.new_density > result.delta
    assert _density(A, result.g1, result.g2) == result.new_density
    assert result.density_gain == result.new_density - result.delta


def test_rectangular_box_is_carved(rng):
    n = 12
    box = Box(e1=LineSet.interval(n, 0, 9), e2=LineSet.interval(n, 0, 4))
    mask = (rng.random((n, n)) < 0.5) & box.indicator()
    mask[box.e1.index(), box.e2.members[-1]] = True
    A = GridSet(n, mask)
    result = find_density_increment(A, box, 0.001, TOY_PROFILE)
    assert result.kind == IncrementKind.INCREMENT
    assert set(result.g1.members) <= set(box.e1.members)
    assert set(result.g2.members) <= set(box.e2.members)
    assert _density(A, result.g1, result.g2) > result.delta


def test_report_names_profile():
    result = find_density_increment(GridSet.full(4), None, 0.5)
    assert result.profile == "toy"
