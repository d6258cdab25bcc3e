"""等差数列划分与直角正方形细分"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.exceptions import InvalidInputError, NoRefinementDirectionError
from cornerlab.models import GridSet, RightSquare, SquareFamily
from cornerlab.services.energy import energy_of_family
from cornerlab.services.partition import (
    ap_partition,
    check_ap_partition,
    check_square_family,
    circular_diameter,
    right_square_partition,
)


def test_trivial_modulus():
    result = ap_partition(1, 1, 0, 1)
    assert len(result.progressions) == 1
    assert check_ap_partition(result) == []


def test_single_progression_covers_everything():
    result = ap_partition(16, 1, 0, 16)
    assert check_ap_partition(result) == []
    assert result.max_diameter <= 16


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 60).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, n - 1), st.integers(1, n))
    )
)
def test_partition_conclusions_hold(params):
    n, r1, r2, s = params
    if r1 == 0 and r2 == 0:
        r1 = 1
    result = ap_partition(n, r1, r2, s)
    assert check_ap_partition(result) == []


def test_large_modulus_samples_pairs():
    result = ap_partition(10_000, 3, 7, 500, seed=5)
    assert check_ap_partition(result) == []
    assert not result.exhaustive
    assert result.diameter_pairs_checked == 512


@pytest.mark.parametrize(
    "args",
    [(0, 1, 0, 1), (8, 0, 0, 2), (8, 1, 1, 0), (8, 1, 1, 9)],
)
def test_partition_arguments(args):
    with pytest.raises(InvalidInputError):
        ap_partition(*args)


def test_circular_diameter():
    assert circular_diameter([0, 1, 2], 10) == 2
    assert circular_diameter([9, 0, 1], 10) == 2
    assert circular_diameter([4], 10) == 0


def _stripe(n: int) -> GridSet:
    return GridSet.from_points(n, [(k, m) for k in range(n // 2) for m in range(n)])


def test_stripe_refinement():
    report = right_square_partition(_stripe(32), (1, 0))
    assert check_square_family(report.family) == []
    assert report.mean_square_deviation > 0
    assert report.frequency == (1, 0)
    assert not report.threshold_met and report.deviation_holds is None


def test_refinement_raises_energy():
    # 四个象限的密度分别为 1、1/2、1/4、0
    n = 32
    half = n // 2
    points = [(k, m) for k in range(half) for m in range(half)]
    points += [(k, m) for k in range(half) for m in range(half, n) if m % 2 == 0]
    points += [(k, m) for k in range(half, n) for m in range(half) if m % 4 == 0]
    W = GridSet.from_points(n, points)
    report = right_square_partition(W, (1, 0))
    assert check_square_family(report.family) == []
    whole = SquareFamily(modulus=n, squares=[RightSquare.whole(n)], omega=GridSet.empty(n))
    before = energy_of_family(whole, W)
    after = energy_of_family(report.family, W)
    assert before.energy == Fraction(len(W) ** 2, n * n)
    assert after.energy > before.energy
    assert after.cover_mass + after.bad_mass == len(W)


def test_max_cells_limits_family():
    report = right_square_partition(_stripe(32), (1, 0), max_cells=16)
    assert len(report.family.squares) <= 16
    assert check_square_family(report.family) == []


def test_zero_frequency_has_no_direction():
    with pytest.raises(NoRefinementDirectionError):
        right_square_partition(_stripe(8), (0, 0))
    with pytest.raises(NoRefinementDirectionError):
        right_square_partition(_stripe(8), (8, 16))


def test_vanishing_coefficient_has_no_direction():
    # 全集在非零频率处系数为 0
    with pytest.raises(NoRefinementDirectionError):
        right_square_partition(GridSet.full(8), (1, 0))
