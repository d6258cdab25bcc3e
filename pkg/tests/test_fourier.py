"""离散傅里叶变换与互相关"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cornerlab.exceptions import InvalidInputError, ShapeMismatchError
from cornerlab.models import ComplexField
from cornerlab.services import fourier


def test_alternating_sign():
    spectrum = fourier.dft_1d(ComplexField.of([1.0, -1.0]))
    assert np.allclose(spectrum.coefficients, [0.0, 2.0])


def test_delta_has_flat_spectrum():
    values = np.zeros(7)
    values[0] = 1.0
    assert np.allclose(fourier.dft_1d(ComplexField.of(values)).coefficients, np.ones(7))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 12, 17, 31])
def test_bluestein_matches_direct_sum(n, rng):
    values = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.allclose(fourier.bluestein_fft(values), fourier.direct_dft(values), atol=1e-9)


@pytest.mark.parametrize("n", [3, 6, 8])
def test_two_dimensional_matches_direct_sum(n, rng):
    values = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    spectrum = fourier.dft_2d(ComplexField.of(values))
    assert np.allclose(spectrum.coefficients, fourier.direct_dft(values), atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=40))
def test_inverse_recovers_values(values):
    f = ComplexField.of(values)
    back = fourier.inverse_dft(fourier.dft(f))
    assert np.allclose(back.values, f.values, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=40))
def test_parseval(values):
    f = ComplexField.of(values)
    lhs = np.sum(np.abs(fourier.dft(f).coefficients) ** 2)
    assert lhs == pytest.approx(len(values) * np.sum(np.abs(f.values) ** 2), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("shape", [(9,), (5, 5)])
def test_correlation_methods_agree(shape, rng):
    f = ComplexField.of(rng.normal(size=shape))
    g = ComplexField.of(rng.normal(size=shape))
    direct = fourier.cross_correlation(f, g, method=fourier.DIRECT)
    spectral = fourier.cross_correlation(f, g, method=fourier.SPECTRAL)
    assert np.allclose(direct.values, spectral.values, atol=1e-9)


def test_correlation_energy_identity(rng):
    n = 11
    f = ComplexField.of(rng.normal(size=n))
    g = ComplexField.of(rng.normal(size=n))
    corr = fourier.cross_correlation(f, g)
    assert fourier.correlation_energy(f, g) == pytest.approx(n * np.sum(np.abs(corr.values) ** 2), rel=1e-9)


def test_correlation_rejects_mismatched_inputs():
    with pytest.raises(ShapeMismatchError):
        fourier.cross_correlation(ComplexField.of(np.zeros(3)), ComplexField.of(np.zeros(4)))
    with pytest.raises(InvalidInputError):
        fourier.cross_correlation(ComplexField.of(np.zeros(3)), ComplexField.of(np.zeros(3)), method="fast")


def test_arity_is_checked():
    with pytest.raises(ShapeMismatchError):
        fourier.dft_2d(ComplexField.of(np.zeros(4)))
