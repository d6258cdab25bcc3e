"""密度增量驱动的角搜索"""

from fractions import Fraction

import numpy as np
import pytest

from cornerlab.core.profiles import get_profile
from cornerlab.exceptions import InvalidInputError
from cornerlab.models import Branch, GridSet, HuntOutcome
from cornerlab.services.corners import behrend_construct, embed_corner_free, verify_witness
from cornerlab.services.driver import corner_hunt, replay_trace


def test_full_grid_gives_corner_at_first_step():
    A = GridSet.full(16)
    result = corner_hunt(A)
    assert result.outcome == HuntOutcome.CORNER
    assert (result.witness.k, result.witness.m, result.witness.d) == (0, 0, 1)
    assert [r.branch for r in result.trace] == [Branch.UNIFORM_CORNER_FOUND]
    assert result.trace[0].density == 1
    assert verify_witness(A, result.witness)


def test_corner_free_input_never_reports_corner():
    result = behrend_construct(20)
    A = embed_corner_free(result.members, 60)
    hunt = corner_hunt(A, max_steps=6)
    assert hunt.outcome != HuntOutcome.CORNER
    assert hunt.witness is None


@pytest.mark.parametrize("seed", range(3))
def test_trace_replays_and_densities_increase(seed):
    rng = np.random.default_rng(seed)
    n = 24
    A = GridSet(n, rng.random((n, n)) < 0.15)
    result = corner_hunt(A, max_steps=5)
    assert all(ok for _, ok in replay_trace(A, result.trace))
    previous = Fraction(len(A), n * n)
    for record in result.trace:
        if record.branch in (Branch.MARGINAL_INCREMENT, Branch.SPECTRAL_INCREMENT):
            assert record.density > previous
        if record.branch == Branch.REGULARIZE:
            assert record.density >= previous
        assert record.beta1 == Fraction(record.box_sizes[0], n)
        previous = record.density
    if result.outcome == HuntOutcome.CORNER:
        assert verify_witness(A, result.witness)


def test_empty_set_is_rejected():
    with pytest.raises(InvalidInputError):
        corner_hunt(GridSet.empty(8))


def test_asymptotic_profile_is_not_runnable():
    with pytest.raises(InvalidInputError):
        corner_hunt(GridSet.full(8), get_profile("asymptotic"))


def test_max_steps_must_be_positive():
    with pytest.raises(InvalidInputError):
        corner_hunt(GridSet.full(8), max_steps=0)


def test_unknown_profile():
    with pytest.raises(InvalidInputError):
        get_profile("huge")
