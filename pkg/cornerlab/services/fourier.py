"""Z_N 与 Z_N² 上的离散傅里叶变换及互相关

正变换 f̂(r) = Σ_k f(k)·e(−kr)，e(x) = exp(2πix/N)。
"""

import logging

import numpy as np

from ..exceptions import InvalidInputError, ShapeMismatchError
from ..models import ComplexField, Spectrum

logger = logging.getLogger(__name__)

DIRECT = "direct"
SPECTRAL = "spectral"


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def bluestein_fft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """
    任意长度的 FFT（Bluestein / chirp-z），沿 axis 计算

    把长度 N 的 DFT 化成长度 M ≥ 2N−1（2 的幂）的循环卷积。
    """
    x = np.moveaxis(np.asarray(x, dtype=np.complex128), axis, -1)
    n = x.shape[-1]
    if _is_power_of_two(n):
        return np.moveaxis(np.fft.fft(x, axis=-1), -1, axis)
    m = 1 << (2 * n - 1).bit_length()
    k = np.arange(n)
    # k² mod 2N 保证大 N 时相位精确
    w = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    w_conj = np.conj(w)

    a = np.zeros(x.shape[:-1] + (m,), dtype=np.complex128)
    a[..., :n] = x * w
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = w_conj
    if n > 1:
        b[-(n - 1):] = w_conj[1:n][::-1]

    c = np.fft.ifft(np.fft.fft(a, axis=-1) * np.fft.fft(b), axis=-1)
    return np.moveaxis(c[..., :n] * w, -1, axis)


def _forward(values: np.ndarray) -> np.ndarray:
    out = values
    for axis in range(values.ndim):
        out = bluestein_fft(out, axis=axis)
    return out


def _inverse(coefficients: np.ndarray) -> np.ndarray:
    # f = conj(DFT(conj f̂)) / N^arity
    n_total = coefficients.size
    return np.conj(_forward(np.conj(coefficients))) / n_total


def dft_1d(f: ComplexField) -> Spectrum:
    """一维 DFT；N 为 2 的幂时直接 FFT，否则 Bluestein"""
    if f.arity != 1:
        raise ShapeMismatchError(f"dft_1d 需要一维函数，得到 {f.arity} 维")
    return Spectrum(modulus=f.modulus, arity=1, coefficients=_forward(f.values))


def dft_2d(f: ComplexField) -> Spectrum:
    """二维 DFT，先沿 k 后沿 m 的可分离变换"""
    if f.arity != 2:
        raise ShapeMismatchError(f"dft_2d 需要二维函数，得到 {f.arity} 维")
    return Spectrum(modulus=f.modulus, arity=2, coefficients=_forward(f.values))


def dft(f: ComplexField) -> Spectrum:
    return dft_1d(f) if f.arity == 1 else dft_2d(f)


def inverse_dft(spectrum: Spectrum) -> ComplexField:
    """逆变换 f(k) = (1/N)·Σ_r f̂(r)·e(kr)"""
    return ComplexField(
        modulus=spectrum.modulus, arity=spectrum.arity, values=_inverse(spectrum.coefficients)
    )


def direct_dft(values: np.ndarray) -> np.ndarray:
    """按定义直接求和的 DFT，作为小规模验证基准"""
    values = np.asarray(values, dtype=np.complex128)
    n = values.shape[0]
    idx = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(idx, idx) / n)
    if values.ndim == 1:
        return kernel @ values
    return kernel @ values @ kernel.T


def _check_pair(f: ComplexField, g: ComplexField) -> None:
    if f.arity != g.arity or f.modulus != g.modulus:
        raise ShapeMismatchError(
            f"维数或模数不一致: ({f.arity}, {f.modulus}) 与 ({g.arity}, {g.modulus})"
        )


def cross_correlation(f: ComplexField, g: ComplexField, method: str = SPECTRAL) -> ComplexField:
    """
    互相关 (f∗g)(k) = Σ_s f(s)·conj(g(s−k))，下标逐轴模 N

    Args:
        f, g: 同维同模数的函数
        method: direct 逐个平移求和；spectral 由 f̂·conj(ĝ) 逆变换

    Raises:
        ShapeMismatchError: 维数或模数不一致
        InvalidInputError: 未知方法
    """
    _check_pair(f, g)
    if method == DIRECT:
        values = _correlate_direct(f.values, g.values)
    elif method == SPECTRAL:
        values = _inverse(_forward(f.values) * np.conj(_forward(g.values)))
    else:
        raise InvalidInputError(f"未知的互相关方法 '{method}'，可选: {DIRECT}, {SPECTRAL}")
    return ComplexField(modulus=f.modulus, arity=f.arity, values=values)


def _correlate_direct(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    n = f.shape[0]
    gc = np.conj(g)
    out = np.zeros(f.shape, dtype=np.complex128)
    axes = tuple(range(f.ndim))
    for shift in np.ndindex(f.shape):
        # np.roll(g, k)[s] = g(s − k)
        out[shift] = np.sum(f * np.roll(gc, shift, axis=axes))
    return out


def correlation_energy(f: ComplexField, g: ComplexField) -> float:
    """N^arity·Σ_k |(f∗g)(k)|² 的傅里叶侧等价量 Σ_r |f̂(r)|²|ĝ(r)|²"""
    _check_pair(f, g)
    return float(np.sum(np.abs(_forward(f.values)) ** 2 * np.abs(_forward(g.values)) ** 2))
