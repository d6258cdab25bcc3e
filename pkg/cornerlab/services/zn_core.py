"""剩余类网格基础：集合构造、边缘密度与平衡函数"""

import logging
from fractions import Fraction
from typing import Iterable, Optional, Tuple

import numpy as np

from ..exceptions import InvalidInputError
from ..models import Box, ComplexField, GridSet, MarginalCheck, MarginalProfile

logger = logging.getLogger(__name__)

STANDARD_SCALE = "standard"
GENERIC_SCALE = "generic"


def make_grid_set(n: int, points: Iterable[Tuple[int, int]]) -> GridSet:
    """
    构造 Z_N² 子集，重复点合并

    Args:
        n: 模数 N
        points: (k, m) 点列表，0 起始

    Returns:
        GridSet: 去重后的集合

    Raises:
        InvalidInputError: 点越界
    """
    return GridSet.from_points(n, points)


def _box_for(A: GridSet, box: Optional[Box]) -> Box:
    box = box if box is not None else Box.full(A.modulus)
    box.require_nonempty()
    box.require_contains(A)
    return box


def marginal_profile(A: GridSet, box: Optional[Box] = None) -> MarginalProfile:
    """
    计算 A 相对盒子的整体密度、行密度 δ_m 与列密度 γ_k

    所有量用精确有理数计算。

    Raises:
        SupportViolationError: A 不在盒子内
    """
    box = _box_for(A, box)
    chi = A.indicator()
    e1, e2 = box.e1.index(), box.e2.index()
    n1, n2 = len(e1), len(e2)
    sub = chi[np.ix_(e1, e2)]
    row_counts = sub.sum(axis=0)  # 按 m ∈ E₂
    col_counts = sub.sum(axis=1)  # 按 k ∈ E₁
    size = len(A)
    delta = Fraction(size, n1 * n2)

    row_density = {int(m): Fraction(int(c), n1) for m, c in zip(e2, row_counts)}
    col_density = {int(k): Fraction(int(c), n2) for k, c in zip(e1, col_counts)}
    row_deviation = sum(((d - delta) ** 2 for d in row_density.values()), Fraction(0))
    col_deviation = sum(((g - delta) ** 2 for g in col_density.values()), Fraction(0))

    return MarginalProfile(
        delta=delta,
        row_density=row_density,
        col_density=col_density,
        row_deviation=row_deviation,
        col_deviation=col_deviation,
        size_e1=n1,
        size_e2=n2,
        cardinality=size,
    )


def balanced_box_function(A: GridSet, box: Optional[Box] = None) -> ComplexField:
    """
    盒形平衡函数 f(k, m) = (χ_A(k, m) − δ_m)·χ_{E₁×E₂}(k, m)

    取值落在步长 2^{-K} 的格点上 (|E₁|·2^K ≤ 2^52)，每列的舍入余量按一个单位
    摊到前几行，于是每个 m ∈ E₂ 上对 k ∈ E₁ 的浮点和恰为 0，与求和顺序无关。
    """
    box = _box_for(A, box)
    e1, e2 = box.e1.index(), box.e2.index()
    values = np.zeros((A.modulus, A.modulus))
    e = len(e1)
    if e and len(e2):
        unit = 1 << (52 - e.bit_length())
        sub = A.indicator()[np.ix_(e1, e2)].astype(np.int64)
        counts = sub.sum(axis=0)
        # −round(c·2^K/e)
        shift = -((2 * counts * unit + e) // (2 * e))
        units = sub * unit + shift[np.newaxis, :]
        residual = counts * unit + e * shift
        rows = np.arange(e)[:, np.newaxis]
        units -= np.sign(residual)[np.newaxis, :] * (rows < np.abs(residual)[np.newaxis, :])
        values[np.ix_(e1, e2)] = units / unit
    return ComplexField.of(values)


def balanced_function(A: GridSet) -> ComplexField:
    """全网格平衡函数 χ_A − δ"""
    chi = A.indicator().astype(np.float64)
    return ComplexField.of(chi - float(A.density))


def marginal_uniformity_check(
    profile: MarginalProfile, alpha1: Fraction, scale: str = STANDARD_SCALE
) -> MarginalCheck:
    """
    行/列偏差条件

    standard 尺度：Σ_m (δ_m−δ)² ≤ α₁²|E₂|，Σ_k (γ_k−δ)² ≤ α₁²|E₁|。
    generic 尺度：右端改为 α₁|E₂| 与 α₁|E₁|（全网格立方体上界使用的形式）。
    精确有理数比较。
    """
    alpha1 = Fraction(alpha1)
    if scale == STANDARD_SCALE:
        factor = alpha1 * alpha1
    elif scale == GENERIC_SCALE:
        factor = alpha1
    else:
        raise InvalidInputError(f"未知的偏差尺度 '{scale}'，可选: {STANDARD_SCALE}, {GENERIC_SCALE}")
    rows = profile.row_deviation <= factor * profile.size_e2
    cols = profile.col_deviation <= factor * profile.size_e1
    logger.debug(f"边缘条件 α₁={alpha1} ({scale}): 行 {'✓' if rows else '✗'} 列 {'✓' if cols else '✗'}")
    return MarginalCheck(rows_balanced=rows, cols_balanced=cols, scale=scale)
