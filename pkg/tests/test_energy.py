"""能量增量循环、Hölder 步、一致矩形与饱和上界"""

from fractions import Fraction

import numpy as np
import pytest

from cornerlab.core.profiles import TOY_PROFILE, PowerLaw
from cornerlab.exceptions import InvalidInputError
from cornerlab.models import Box, GridSet, LineSet, RightSquare
from cornerlab.services.energy import (
    CONVERGED,
    MAX_ITERS,
    STALLED,
    UNIFORM,
    energy_decomposition,
    energy_increment_run,
    holder_check,
    saturation_bound_check,
    uniform_rectangle_locate,
)

LAW = TOY_PROFILE.power_law


def _quadrants(n: int) -> GridSet:
    half = n // 2
    points = [(k, m) for k in range(half) for m in range(half)]
    points += [(k, m) for k in range(half) for m in range(half, n) if m % 2 == 0]
    points += [(k, m) for k in range(half, n) for m in range(half) if m % 4 == 0]
    return GridSet.from_points(n, points)


def test_full_set_is_uniform_at_once():
    result = energy_increment_run(GridSet.full(16), Fraction(1, 2), LAW)
    assert result.outcome == UNIFORM
    assert len(result.trace) == 1
    assert result.squares == [RightSquare.whole(16)]
    assert len(result.bad) == 0


def test_quadrant_run_refines_at_first_step():
    W = _quadrants(32)
    whole = Fraction(len(W) ** 2, 32 * 32)
    result = energy_increment_run(W, Fraction(1, 16), LAW, max_iters=4)
    first = result.trace[0]
    assert first.nonuniform_cells == 1
    assert first.criterion_hits == 1
    assert first.refined_cells == 1
    assert len(first.squares) > 1
    assert first.energy > whole
    assert first.decomposition is not None and first.decomposition.holds
    assert first.decomposition.fine > first.decomposition.coarse


def test_quadrant_run_accounting():
    W = _quadrants(32)
    result = energy_increment_run(W, Fraction(1, 16), LAW, max_iters=4)
    assert result.outcome in {UNIFORM, CONVERGED, STALLED, MAX_ITERS}
    assert sum(state.refined_cells for state in result.trace) > 0
    previous = Fraction(len(W) ** 2, 32 * 32)
    for state in result.trace:
        assert state.cover_mass + state.bad_mass == len(W)
        assert state.energy >= previous
        if not state.refined_cells:
            assert state.energy == previous
        assert state.holder.conclusion_held
        assert state.criterion_hits == state.nonuniform_cells
        previous = state.energy
    # 存活格与 B 互不相交
    survivors = np.zeros((32, 32), dtype=bool)
    for cell in result.squares:
        assert not np.any(survivors & cell.mask())
        survivors |= cell.mask()
    assert not np.any(survivors & result.bad.indicator())


def test_random_half_density_set_is_uniform(rng):
    W = GridSet(32, rng.random((32, 32)) < 0.5)
    result = energy_increment_run(W, Fraction(1, 64), LAW)
    assert result.outcome == UNIFORM
    assert result.trace[0].refined_cells == 0


@pytest.mark.parametrize("epsilon", [0, Fraction(3, 4)])
def test_epsilon_range(epsilon):
    W = GridSet.from_points(4, [(0, 0), (1, 1), (2, 2), (3, 3)])
    with pytest.raises(InvalidInputError):
        energy_increment_run(W, epsilon, LAW)


def test_energy_decomposition_identity(rng):
    n = 8
    W = GridSet(n, rng.random((n, n)) < 0.5)
    coarse = [RightSquare.whole(n)]
    fine = [RightSquare(modulus=n, a=a, b=b, d=1, t=4) for a in (0, 4) for b in (0, 4)]
    report = energy_decomposition(coarse, fine, W)
    assert report.holds
    assert report.fine >= report.coarse


def test_holder_step():
    cells = [RightSquare(modulus=8, a=0, b=0, d=1, t=4), RightSquare(modulus=8, a=4, b=4, d=1, t=4)]
    outcome = holder_check(cells, [Fraction(1), Fraction(1, 4)], LAW)
    assert outcome.hypothesis_satisfied and outcome.conclusion_held
    assert holder_check([], [], LAW).hypothesis_satisfied is False


def test_power_law_bounds():
    with pytest.raises(InvalidInputError):
        PowerLaw(K=Fraction(2), rho=4)
    assert PowerLaw(K=Fraction(1, 4), rho=4)(Fraction(1, 2)) == Fraction(1, 64)
    assert LAW(Fraction(1, 2)) == Fraction(1, 1024)


def test_rectangle_on_full_box():
    n = 16
    W1, W2 = LineSet.full(n), LineSet.full(n)
    location = uniform_rectangle_locate(W1, W2, GridSet.full(n), Fraction(1, 8), LAW)
    assert location.found
    assert location.density == 1
    assert location.floor_met
    assert location.bad_mass == 0


def test_rectangle_respects_support():
    W1 = LineSet.interval(8, 0, 4)
    with pytest.raises(InvalidInputError):
        uniform_rectangle_locate(W1, LineSet.full(8), GridSet.from_points(8, [(6, 0)]), Fraction(1, 8), LAW)
    with pytest.raises(InvalidInputError):
        uniform_rectangle_locate(W1, LineSet.full(8), GridSet.empty(8), Fraction(1), LAW)


def test_saturation_bound(rng):
    for density in (0.1, 0.5, 0.9):
        A = GridSet(10, rng.random((10, 10)) < density)
        assert saturation_bound_check(A).holds
    box = Box(e1=LineSet.interval(10, 2, 5), e2=LineSet.interval(10, 0, 3))
    A = GridSet(10, (rng.random((10, 10)) < 0.5) & box.indicator())
    assert saturation_bound_check(A, box).holds


def test_toy_profile_is_the_default():
    result = energy_increment_run(GridSet.full(8), Fraction(1, 4), LAW)
    assert result.profile == TOY_PROFILE.name
