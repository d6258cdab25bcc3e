"""一致性泛函：一维/二维 α-一致性、盒范数、立方体计数与区间偏差"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from ..core.concurrency import ordered_map
from ..core.config import tolerances
from ..exceptions import InvalidInputError, ShapeMismatchError, SupportViolationError
from ..models import (
    Box,
    BoxNormValue,
    ComplexField,
    CubeBoundsReport,
    CubeCount,
    CubeMethod,
    DiscrepancyReport,
    GridSet,
    LineSet,
    Normalization,
    UniformityReport,
)
from . import fourier
from .zn_core import GENERIC_SCALE, balanced_box_function, balanced_function, marginal_profile, marginal_uniformity_check

logger = logging.getLogger(__name__)

# 超过该模数时二维自相关改由 FFT 求得
DIRECT_LIMIT_2D = 32


def _agree(a: float, b: float) -> bool:
    return abs(a - b) <= tolerances.parseval * max(1.0, abs(a), abs(b))


def alpha_uniformity_1d(f: ComplexField) -> UniformityReport:
    """
    一维 α-一致性：Σ_k |Σ_s f(s)·conj f(s−k)|² / N³

    同时用 Σ_r |f̂(r)|⁴ / N 计算并比较。

    Raises:
        InvalidInputError: f 不是 D 值函数
    """
    if f.arity != 1:
        raise ShapeMismatchError("alpha_uniformity_1d 需要一维函数")
    f.require_disk_valued()
    n = f.modulus
    corr = fourier.cross_correlation(f, f, method=fourier.DIRECT)
    functional = float(np.sum(np.abs(corr.values) ** 2))
    spectral = float(np.sum(np.abs(fourier.dft_1d(f).coefficients) ** 4)) / n
    denominator = float(n) ** 3
    return UniformityReport(
        functional_value=functional,
        normalization=Normalization.LINE,
        minimal_alpha=functional / denominator,
        denominator=denominator,
        alternate_value=spectral,
        method_agreement=_agree(functional, spectral),
    )


def alpha_uniformity_2d(f: ComplexField) -> UniformityReport:
    """
    二维 α-一致性：Σ_t |Σ_s f(s)·conj f(s−t)|² / N⁶，对照 Σ_r |f̂(r)|⁴ / N²
    """
    if f.arity != 2:
        raise ShapeMismatchError("alpha_uniformity_2d 需要二维函数")
    f.require_disk_valued()
    n = f.modulus
    method = fourier.DIRECT if n <= DIRECT_LIMIT_2D else fourier.SPECTRAL
    corr = fourier.cross_correlation(f, f, method=method)
    functional = float(np.sum(np.abs(corr.values) ** 2))
    spectral = float(np.sum(np.abs(fourier.dft_2d(f).coefficients) ** 4)) / (n * n)
    denominator = float(n) ** 6
    return UniformityReport(
        functional_value=functional,
        normalization=Normalization.GRID,
        minimal_alpha=functional / denominator,
        denominator=denominator,
        alternate_value=spectral,
        method_agreement=_agree(functional, spectral),
    )


def grid_alpha(A: GridSet) -> float:
    """A 的全网格平衡函数 χ_A − δ 的 α（傅里叶侧）"""
    n = A.modulus
    coeffs = fourier.dft_2d(balanced_function(A)).coefficients
    return float(np.sum(np.abs(coeffs) ** 4)) / (n * n) / float(n) ** 6


def _require_support(f: ComplexField, box: Box) -> None:
    if f.arity != 2 or f.modulus != box.modulus:
        raise ShapeMismatchError("盒范数需要与盒子同模数的二维函数")
    outside = np.argwhere((f.values != 0) & ~box.indicator())
    if outside.size:
        raise SupportViolationError((int(outside[0, 0]), int(outside[0, 1])), where="盒子支撑")


def _real_part(total: complex, what: str) -> float:
    if abs(total.imag) > tolerances.imaginary * (1 + abs(total.real)):
        logger.error(f"✗ {what} 的虚部过大: {total}")
        raise ArithmeticError(f"{what} 的虚部 {total.imag} 超出容差")
    return float(total.real)


def box_fourth_power_dual(values: np.ndarray) -> float:
    """对偶形式 Σ_{m,p} |Σ_k f(k,m)·conj f(k,p)|²"""
    gram = values.T @ np.conj(values)
    return float(np.sum(np.abs(gram) ** 2))


def box_fourth_power_primal(values: np.ndarray) -> float:
    """
    原始形式 Σ_{s,u,r} f(s)·conj f(s+u·e₂)·conj f(s+r·e₁)·f(s+u·e₂+r·e₁)

    e₁ = (1, 0)，e₂ = (0, −1)，即 s+u·e₂ = (k, m−u)。
    """
    n = values.shape[0]
    total = 0j
    for u in range(n):
        # g_u(k, m) = f(k, m)·conj f(k, m−u)
        g = values * np.conj(np.roll(values, u, axis=1))
        for r in range(n):
            total += np.sum(g * np.conj(np.roll(g, -r, axis=0)))
    return _real_part(complex(total), "盒范数四次方")


def box_norm(f: ComplexField, box: Box) -> BoxNormValue:
    """
    盒范数 ‖f‖，同时给出原始与对偶两种四次方

    Raises:
        SupportViolationError: f 在盒子外非零
    """
    _require_support(f, box)
    primal = box_fourth_power_primal(f.values)
    dual = box_fourth_power_dual(f.values)
    floor = -tolerances.negative_floor
    if primal < floor or dual < floor:
        raise ArithmeticError(f"盒范数四次方为负: {primal}, {dual}")
    primal = max(primal, 0.0)
    return BoxNormValue(
        value=primal ** 0.25,
        fourth_power=primal,
        dual_formula_fourth_power=max(dual, 0.0),
    )


def box_inner_product(f00: np.ndarray, f01: np.ndarray, f10: np.ndarray, f11: np.ndarray) -> complex:
    """
    四线性盒形式 Σ_{s,u,r} f00(s)·conj f01(s+u·e₂)·conj f10(s+r·e₁)·f11(s+u·e₂+r·e₁)

    四个参数相同时即盒范数四次方。
    """
    left = f00.T @ np.conj(f01)
    right = f10.T @ np.conj(f11)
    return complex(np.sum(left * np.conj(right)))


def alpha_uniformity_box(f: ComplexField, box: Box) -> UniformityReport:
    """相对基 (e₁, e₂) 的盒一致性，分母 |E₁|²|E₂|²"""
    norm = box_norm(f, box)
    denominator = float(box.area) ** 2
    return UniformityReport(
        functional_value=norm.fourth_power,
        normalization=Normalization.BOX,
        minimal_alpha=norm.fourth_power / denominator,
        denominator=denominator,
        alternate_value=norm.dual_formula_fourth_power,
        method_agreement=abs(norm.fourth_power - norm.dual_formula_fourth_power)
        <= tolerances.duality * max(1.0, norm.fourth_power),
    )


def set_uniformity(
    obj: Union[GridSet, LineSet], normalization: Optional[Normalization] = None
) -> Tuple[ComplexField, UniformityReport]:
    """
    集合的平衡函数及其 α-一致性

    一维集合用 line 归一化；二维集合默认全网格，normalization 为 box 时用全盒平衡函数。

    Returns:
        (平衡函数, 一致性报告)
    """
    if isinstance(obj, LineSet):
        field = ComplexField.of(obj.indicator().astype(float) - float(obj.density))
        return field, alpha_uniformity_1d(field)
    if normalization == Normalization.BOX:
        box = Box.full(obj.modulus)
        field = balanced_box_function(obj, box)
        return field, alpha_uniformity_box(field, box)
    field = balanced_function(obj)
    return field, alpha_uniformity_2d(field)


def uniformity_payload(report: UniformityReport) -> Dict[str, Any]:
    """命令行与 API 共用的 uniformity 报告体"""
    return {
        "functional": report.functional_value,
        "alpha": report.minimal_alpha,
        "denominator": report.denominator,
        "method_agreement": report.method_agreement,
        "normalization": report.normalization.value,
    }


def box_alpha(A: GridSet, box: Optional[Box] = None) -> float:
    """A 的盒平衡函数的 α（对偶形式，热路径使用）"""
    box = box if box is not None else Box.full(A.modulus)
    f = balanced_box_function(A, box)
    sub = f.values.real[np.ix_(box.e1.index(), box.e2.index())]
    return box_fourth_power_dual(sub) / float(box.area) ** 2


def _cube_slice(chi: np.ndarray, u: int) -> int:
    n = chi.shape[0]
    p = chi * np.roll(chi, u, axis=1)
    return int(sum(int(np.sum(p * np.roll(p, -r, axis=0))) for r in range(n)))


def count_cubes(A: GridSet, method: CubeMethod = CubeMethod.SPECTRAL, nondegenerate: bool = False) -> CubeCount:
    """
    立方体计数 Σ_{m,p} |Σ_k χ(k,m)·χ(k,p)|²，含 u=0 或 r=0 的退化立方体

    Args:
        A: 集合
        method: brute 逐个枚举 (s, u, r)；spectral 用行对交集的对偶和
        nondegenerate: 同时给出 u≠0 且 r≠0 的计数
    """
    chi = A.indicator().astype(np.int64)
    n = A.modulus
    method = CubeMethod(method)
    if method == CubeMethod.BRUTE:
        count = sum(ordered_map(lambda u: _cube_slice(chi, u), range(n)))
    else:
        gram = chi.T @ chi
        count = int(np.sum(gram * gram))
    nondeg = None
    if nondegenerate:
        rows = chi.sum(axis=0)
        cols = chi.sum(axis=1)
        nondeg = count - int(np.sum(rows * rows)) - int(np.sum(cols * cols)) + len(A)
    return CubeCount(count=count, method=method, nondegenerate=nondeg)


def _is_cyclic_interval(line) -> bool:
    members = set(line.members)
    if not members:
        return False
    if len(members) == line.modulus:
        return True
    starts = [x for x in members if (x - 1) % line.modulus not in members]
    return len(starts) == 1


def progression_discrepancy(A: GridSet, P: Box, alpha: Optional[float] = None) -> DiscrepancyReport:
    """
    区间盒上的偏差 ||A∩P| − δ|P||，对照 16·α^{1/4}·N²

    alpha 为 A 的全网格 α；同一集合检查多个盒子时由调用方算一次传入。

    Raises:
        InvalidInputError: P 的两边不是步长 1 的（循环）区间
    """
    for side, name in ((P.e1, "P1"), (P.e2, "P2")):
        if not _is_cyclic_interval(side):
            raise InvalidInputError(f"{name} 不是步长为 1 的区间")
    n = A.modulus
    inside = int(np.sum(A.indicator() & P.indicator()))
    expected = A.density * P.area
    discrepancy = float(abs(inside - expected))
    if alpha is None:
        alpha = alpha_uniformity_2d(balanced_function(A)).minimal_alpha
    bound = 16 * alpha ** 0.25 * n * n
    return DiscrepancyReport(
        discrepancy=discrepancy,
        bound=bound,
        holds=discrepancy <= bound + tolerances.slack,
        alpha=alpha,
        intersection=inside,
        expected=expected,
    )


def cube_bounds_report(A: GridSet, box: Optional[Box] = None) -> CubeBoundsReport:
    """
    立方体数的上下界

    下界 δ⁴|E₁|²|E₂|² 总是计算；上界 (δ+2α^{1/4})⁴N⁴ 仅在全网格且
    Σ_p (δ_p−δ)² ≤ αN 时适用，α 取盒平衡函数的实测值。
    """
    box = box if box is not None else Box.full(A.modulus)
    profile = marginal_profile(A, box)
    cubes = count_cubes(A).count
    delta = profile.delta
    lower = delta ** 4 * box.area ** 2
    alpha = box_alpha(A, box)
    full = len(box.e1) == box.modulus and len(box.e2) == box.modulus
    applicable = full and marginal_uniformity_check(profile, Fraction(alpha), scale=GENERIC_SCALE).rows_balanced
    upper = None
    upper_holds = None
    if applicable:
        n = box.modulus
        upper = (float(delta) + 2 * alpha ** 0.25) ** 4 * float(n) ** 4
        upper_holds = cubes <= upper * (1 + tolerances.slack)
    return CubeBoundsReport(
        cubes=cubes,
        lower=lower,
        lower_holds=cubes >= lower,
        upper_applicable=applicable,
        upper=upper,
        upper_holds=upper_holds,
        alpha=alpha,
        row_deviation=profile.row_deviation,
    )


def fourier_bounds(f: ComplexField) -> Tuple[float, float, float]:
    """(Σ_r|f̂|⁴, max_r|f̂|, α) 供一维一致性不等式检查"""
    coeffs = np.abs(fourier.dft(f).coefficients)
    n = f.modulus
    fourth = float(np.sum(coeffs ** 4))
    alpha = fourth / n / float(n) ** 3 if f.arity == 1 else fourth / (n * n) / float(n) ** 6
    return fourth, float(coeffs.max()) if coeffs.size else 0.0, alpha


def spectral_criterion_2d(f: ComplexField, alpha: float) -> Tuple[Tuple[int, int], float, bool]:
    """
    非零频率中 |f̂| 最大者及其是否达到 α^{1/2}·N²

    Returns:
        (频率, 系数模长, 是否达到)，频率取字典序最小的最大者
    """
    n = f.modulus
    mags = np.round(np.abs(fourier.dft_2d(f).coefficients), 9)
    mags[0, 0] = -1.0
    flat = int(np.argmax(mags))
    r = (flat // n, flat % n)
    value = float(mags[r])
    return r, value, value >= math.sqrt(max(alpha, 0.0)) * n * n
