"""Gram 矩阵谱、拟随机检查与水平集划分"""

from fractions import Fraction

import numpy as np
import pytest

from cornerlab.exceptions import InvalidInputError
from cornerlab.models import Box, GridSet, LineSet
from cornerlab.services.graphview import (
    density_split,
    density_split_counts,
    gram_spectrum,
    level_set_partition,
    quadratic_form_check,
    rayleigh_lower_bound,
    spectral_uniformity_check,
    spectrum_payload,
)


def test_full_grid_spectrum():
    rep = gram_spectrum(GridSet.full(4))
    assert rep.mu[0] == pytest.approx(16.0)
    assert rep.mu[1:] == pytest.approx([0.0, 0.0, 0.0], abs=1e-9)
    assert rep.perron_aligned
    assert rep.deviation == pytest.approx(0.0, abs=1e-9)


def test_trace_identities(rng):
    A = GridSet(9, rng.random((9, 9)) < 0.45)
    rep = gram_spectrum(A)
    assert rep.trace == pytest.approx(rep.expected_trace)
    assert rep.trace_squares == pytest.approx(rep.expected_trace_squares)
    assert rep.mu == sorted(rep.mu, reverse=True)


def test_spectrum_payload_omits_vectors(rng):
    rep = gram_spectrum(GridSet(6, rng.random((6, 6)) < 0.5))
    payload = spectrum_payload(rep)
    assert "vectors" not in payload
    assert payload["mu"] == rep.mu
    assert payload["traces"]["expected_trace"] == rep.expected_trace


def test_eigenvectors_are_scaled_and_orthogonal(rng):
    A = GridSet(8, rng.random((8, 8)) < 0.5)
    rep = gram_spectrum(A)
    gram = rep.vectors.T @ rep.vectors
    assert np.allclose(gram, 8 * np.eye(8), atol=1e-6)
    assert np.all(rep.vectors.sum(axis=0) >= -1e-9)


def test_rayleigh_bound_is_below_top_eigenvalue(rng):
    A = GridSet(10, rng.random((10, 10)) < 0.3)
    assert rayleigh_lower_bound(A) <= gram_spectrum(A).mu[0] + 1e-9


def test_spectrum_needs_square_box():
    box = Box(e1=LineSet.interval(4, 0, 2), e2=LineSet.full(4))
    with pytest.raises(InvalidInputError):
        gram_spectrum(GridSet.from_points(4, [(0, 0)]), box)


def test_spectral_checks_never_fail(rng):
    A = GridSet(12, rng.random((12, 12)) < 0.5)
    report = spectral_uniformity_check(A, None, alpha=0.05, epsilon=0.1)
    names = [c.name for c in report.checks]
    assert names == ["mu1-lower", "mu1-upper", "mu2-from-box-uniformity", "box-uniformity-from-mu2"]
    assert not any(c.failed for c in report.checks)
    assert report.checks[0].conclusion_held


def test_quadratic_form(rng):
    c = rng.normal(size=(5, 5))
    a = rng.normal(size=5)
    assert quadratic_form_check(c, a).conclusion_held


def _centre_distances(v, partition):
    centers = [complex(x, y) for x, y in partition.centers]
    return [abs(v[i] - c) for members, c in zip(partition.classes, centers) for i in members]


def test_level_sets_stay_within_xi_of_centre(rng):
    alpha, xi = 0.5, 0.2
    v = (rng.random(64) * 2 - 1) * 1.4 + 1j * (rng.random(64) * 2 - 1) * 1.4
    partition = level_set_partition(v, alpha, xi)
    assert sorted(i for cls in partition.classes for i in cls) == list(range(64))
    assert max(_centre_distances(v, partition)) <= xi + 1e-9
    assert all(x * x + y * y <= (1 / alpha) ** 2 + 1e-9 for x, y in partition.centers)
    assert partition.within_count_bound


@pytest.mark.parametrize("alpha, xi", [(0.5, 0.1), (0.25, 0.125), (1.0, 0.45)])
def test_level_set_count_bound_on_dense_disk(alpha, xi):
    radius = 1 / alpha
    axis = np.linspace(-radius, radius, 81)
    grid = (axis[:, None] + 1j * axis[None, :]).ravel()
    v = grid[np.abs(grid) <= radius]
    partition = level_set_partition(v, alpha, xi)
    assert len(partition.classes) <= 4 / (alpha * xi) ** 2
    assert max(_centre_distances(v, partition)) <= xi + 1e-9


def test_level_sets_of_zero_one_vector():
    v = np.array([0, 1, 1, 0, 1], dtype=complex)
    partition = level_set_partition(v, 0.5, 0.25)
    assert sorted(map(sorted, partition.classes)) == [[0, 3], [1, 2, 4]]


def test_level_sets_reject_small_disk():
    with pytest.raises(InvalidInputError):
        level_set_partition([0.1], 1.5, 0.45)


@pytest.mark.parametrize("xi", [0.0, 0.5, 0.7])
def test_level_sets_reject_bad_xi(xi):
    with pytest.raises(InvalidInputError):
        level_set_partition([0.1], 0.5, xi)


def test_level_sets_report_out_of_disk_index():
    with pytest.raises(InvalidInputError) as exc:
        level_set_partition([0.1, 3.0], 0.5, 0.2)
    assert "v[1]" in exc.value.detail


def test_density_split_counts():
    # δ = 1/2，第 1 块密度 0 < 1/2 − 1/4
    split = density_split_counts([4, 0, 4], [4, 4, 8], Fraction(1, 4))
    assert split.bad == [1]
    assert split.inequality_holds


def test_density_split_on_sets():
    blocks = [{1, 2}, {3, 4}, {5, 6, 7, 8}]
    split = density_split({1, 2, 5}, blocks, Fraction(1, 8))
    assert split.inequality_holds
    with pytest.raises(InvalidInputError):
        density_split({1}, [{1, 2}, {2, 3}], Fraction(1, 8))
    with pytest.raises(InvalidInputError):
        density_split({9}, blocks, Fraction(1, 8))
