"""角的计数、三线性和分解，以及无三项等差数列集合与无角嵌入"""

import itertools
import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..core.concurrency import ordered_map
from ..core.config import tolerances
from ..exceptions import InvalidInputError, ShapeMismatchError
from ..models import (
    BehrendResult,
    Box,
    CheckOutcome,
    ComplexField,
    CornerCount,
    CornerMode,
    CornerWitness,
    GridSet,
    LineSet,
    TrilinearReport,
)
from .uniformity import box_alpha
from .zn_core import marginal_profile

logger = logging.getLogger(__name__)

TRANSLATION_RULE = "translation"
ANTIDIAGONAL_RULE = "antidiagonal"

# Behrend 参数扫描网格
BEHREND_DIGIT_RANGE = range(2, 13)
BEHREND_DIMENSION_RANGE = range(2, 9)
BEHREND_MAX_VECTORS = 1 << 20


def _corner_slice(chi: np.ndarray, d: int, mode: CornerMode) -> Tuple[int, Optional[Tuple[int, int]]]:
    n = chi.shape[0]
    if mode == CornerMode.GRID:
        hits = chi[: n - d, : n - d] & chi[d:, : n - d] & chi[: n - d, d:]
    else:
        hits = chi & np.roll(chi, -d, axis=0) & np.roll(chi, -d, axis=1)
    count = int(hits.sum())
    if not count:
        return 0, None
    k, m = np.argwhere(hits)[0]
    return count, (int(k), int(m))


def count_corners(A: GridSet, mode: CornerMode = CornerMode.GRID) -> CornerCount:
    """
    统计角 (k,m), (k+d,m), (k,m+d)，d > 0

    grid 模式不回绕，三个点都在 [0, N)² 内；cyclic 模式 d ∈ Z_N∖{0}，坐标模 N。
    返回字典序 (k, m, d) 最小的角作为见证。
    """
    mode = CornerMode(mode)
    chi = A.indicator()
    n = A.modulus
    slices = ordered_map(lambda d: _corner_slice(chi, d, mode), range(1, n))
    total = 0
    best: Optional[Tuple[int, int, int]] = None
    for d, (count, first) in zip(range(1, n), slices):
        total += count
        if first is not None:
            candidate = (first[0], first[1], d)
            if best is None or candidate < best:
                best = candidate
    witness = CornerWitness(k=best[0], m=best[1], d=best[2]) if best else None
    logger.debug(f"角计数 ({mode.value}): {total}")
    return CornerCount(count=total, witness=witness, mode=mode, size=len(A), density=float(A.density))


def count_corners_pointwise(A: GridSet) -> int:
    """先枚举点再枚举 d 的 grid 模式计数，与 count_corners 独立"""
    chi = A.indicator()
    n = A.modulus
    total = 0
    for k, m in A.points():
        length = min(n - 1 - k, n - 1 - m)
        if length <= 0:
            continue
        total += int(np.sum(chi[k + 1 : k + 1 + length, m] & chi[k, m + 1 : m + 1 + length]))
    return total


def verify_witness(A: GridSet, witness: CornerWitness, mode: CornerMode = CornerMode.GRID) -> bool:
    modulus = A.modulus if CornerMode(mode) == CornerMode.CYCLIC else None
    points = witness.points(modulus)
    return witness.d > 0 and all(p in A for p in points)


def trilinear_corner_sum(h: ComplexField, g: ComplexField, f: ComplexField) -> complex:
    """
    Σ_{s,r} h(s)·g(s + r(e₁+e₂))·f(s + r·e₂)，e₁ = (1,0)，e₂ = (0,−1)

    即 Σ_{k,m,r} h(k,m)·g(k+r, m−r)·f(k, m−r)。
    """
    for other in (g, f):
        if other.modulus != h.modulus or other.arity != 2 or h.arity != 2:
            raise ShapeMismatchError("三线性和需要同模数的二维函数")
    n = h.modulus
    total = 0j
    for r in range(n):
        total += np.sum(h.values * np.roll(g.values, (-r, r), axis=(0, 1)) * np.roll(f.values, r, axis=1))
    return complex(total)


def _corner_weights(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    # W[k, m'] = Σ_r Q1(k, m'+r)·Q2(k+r, m')
    n = q1.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for r in range(n):
        out += np.roll(q1, -r, axis=1) * np.roll(q2, -r, axis=0)
    return out


def decompose(Q1: GridSet, Q2: GridSet, A: GridSet, box: Optional[Box] = None) -> TrilinearReport:
    """
    三线性和 Σ χ_{Q1}(s)χ_{Q2}(s+r(e₁+e₂))χ_A(s+r·e₂) 的三项分解

    χ_A = [δ + (δ_{m'}−δ) + (χ_A − δ_{m'})]·χ_{E₁×E₂}，三项按此拆开，
    逐行精确累加，因此 term1 + term2 + term3 = total 为精确恒等式。

    Raises:
        InvalidInputError: Q₁、Q₂ 不在 A 内
    """
    box = box if box is not None else Box.full(A.modulus)
    for Q, name in ((Q1, "Q1"), (Q2, "Q2")):
        if Q.modulus != A.modulus:
            raise ShapeMismatchError(f"{name} 与 A 模数不一致")
        if not Q.is_subset(A):
            raise InvalidInputError(f"{name} 必须是 A 的子集")
    profile = marginal_profile(A, box)
    weights = _corner_weights(Q1.indicator().astype(np.int64), Q2.indicator().astype(np.int64))
    in_box = box.indicator()
    per_row_box = (weights * in_box).sum(axis=0)
    per_row_a = (weights * A.indicator()).sum(axis=0)

    delta = profile.delta
    total = int(per_row_a.sum())
    term1 = delta * int(per_row_box.sum())
    term2 = Fraction(0)
    term3 = Fraction(0)
    for m, dm in profile.row_density.items():
        term2 += (dm - delta) * int(per_row_box[m])
        term3 += int(per_row_a[m]) - dm * int(per_row_box[m])
    return TrilinearReport(total=float(total), term1=float(term1), term2=float(term2), term3=float(term3))


def trilinear_bound_check(h: ComplexField, g: ComplexField, f: ComplexField) -> CheckOutcome:
    """
    全网格上 |Σ h·g·f| ≤ 2·α^{1/4}·N³，α 为 f 的盒一致性（|h|, |g| ≤ 1）
    """
    n = f.modulus
    unit = 1 + tolerances.unit_bound
    hypothesis = bool(np.all(np.abs(h.values) <= unit) and np.all(np.abs(g.values) <= unit))
    total = abs(trilinear_corner_sum(h, g, f))
    fourth = float(np.sum(np.abs(f.values.T @ np.conj(f.values)) ** 2))
    alpha = fourth / float(n) ** 4
    bound = 2 * alpha ** 0.25 * float(n) ** 3
    return CheckOutcome(
        name="trilinear-box-bound",
        hypothesis_satisfied=hypothesis,
        conclusion_held=total <= bound * (1 + tolerances.triangle) + tolerances.triangle,
        margin=bound - total,
    )


def corner_existence_check(Q1: GridSet, Q2: GridSet, A: GridSet, box: Optional[Box] = None) -> CheckOutcome:
    """
    正的非退化三线性计数必然给出循环角；同时报告计数链阈值
    10⁻²⁷δ¹¹β₁²β₂²N³ > 1 是否达到
    """
    box = box if box is not None else Box.full(A.modulus)
    n = A.modulus
    q1 = Q1.indicator().astype(np.int64)
    q2 = Q2.indicator().astype(np.int64)
    chi = A.indicator().astype(np.int64)
    nondegenerate = 0
    for r in range(1, n):
        nondegenerate += int(np.sum(q1 * np.roll(q2, (-r, r), axis=(0, 1)) * np.roll(chi, r, axis=1)))
    delta = marginal_profile(A, box).delta
    beta1, beta2 = Fraction(len(box.e1), n), Fraction(len(box.e2), n)
    chain = math.log10(1e-27) + _log10(delta ** 11 * beta1 ** 2 * beta2 ** 2) + 3 * math.log10(n)
    hypothesis = nondegenerate >= 1
    held = count_corners(A, CornerMode.CYCLIC).count > 0 if hypothesis else None
    return CheckOutcome(
        name="corner-existence",
        hypothesis_satisfied=hypothesis,
        conclusion_held=held,
        margin=float(nondegenerate),
        detail=f"计数链阈值{'已' if chain > 0 else '未'}达到 (log10 = {chain:.2f})",
    )


def _log10(x: Fraction) -> float:
    if x <= 0:
        return float("-inf")
    return math.log10(x.numerator) - math.log10(x.denominator)


def three_ap_free(values) -> bool:
    """穷举检查整数集合中是否没有非平凡三项等差数列"""
    x = np.unique(np.asarray(list(values), dtype=np.int64))
    if x.size < 3:
        return True
    lo, hi = int(x[0]), int(x[-1])
    present = np.zeros(hi - lo + 1, dtype=bool)
    present[x - lo] = True
    for i in range(x.size - 1):
        # 以 x[i] 为首项、x[j] 为中项
        third = 2 * x[i + 1 :] - x[i]
        ok = third <= hi
        if np.any(present[third[ok] - lo]):
            return False
    return True


def _sphere_candidate(bound: int, digit_bound: int, dimension: int) -> Optional[Tuple[List[int], int]]:
    base = 2 * digit_bound - 1
    if digit_bound ** dimension > BEHREND_MAX_VECTORS:
        return None
    digits = np.array(list(itertools.product(range(digit_bound), repeat=dimension)), dtype=np.int64)
    weights = base ** np.arange(dimension, dtype=np.int64)
    values = digits @ weights
    keep = values <= bound - 1
    if not np.any(keep):
        return None
    digits, values = digits[keep], values[keep]
    if digit_bound == 2:
        # 0/1 数字的向量整体无三项等差
        return sorted(int(v) for v in values), -1
    radii = np.sum(digits * digits, axis=1)
    uniq, counts = np.unique(radii, return_counts=True)
    radius = int(uniq[int(np.argmax(counts))])
    return sorted(int(v) for v in values[radii == radius]), radius


def behrend_construct(K: int) -> BehrendResult:
    """
    {1..K} 中无三项等差数列的 Behrend 型集合

    在 (2d−1) 进制下取各位 < d 的数，选同一球面 Σa_i² = R 上点最多的那层；
    扫描 d ∈ [2, 12]、n ∈ [2, 8]，取最大者，并列时保留先扫描到的。

    Raises:
        InvalidInputError: K < 1
    """
    if K < 1:
        raise InvalidInputError(f"K 必须为正整数: {K}")
    best_values = list(range(min(K, 2)))
    best = (len(best_values), 1, 1, 0)
    for d in BEHREND_DIGIT_RANGE:
        for n in BEHREND_DIMENSION_RANGE:
            if (2 * d - 1) ** (n - 1) > K:
                break
            found = _sphere_candidate(K, d, n)
            if found is None:
                continue
            values, radius = found
            if len(values) > best[0]:
                best_values = values
                best = (len(values), d, n, radius)
    size, d, n, radius = best
    members = LineSet(modulus=K, members=best_values)
    achieved = math.log(size) / math.log(K) if K >= 2 and size >= 1 else None
    target = None
    if K >= 16:
        target = 1 - math.log(2) / math.log(math.log(K))
    logger.info(f"Behrend 构造 K={K}: |A|={size} (d={d}, n={n}, R={radius})")
    return BehrendResult(
        bound=K,
        members=members,
        values=[v + 1 for v in best_values],
        dimension=n,
        digit_bound=d,
        radius_squared=radius,
        size=size,
        achieved_exponent=achieved,
        target_exponent=target,
    )


def embed_corner_free(A1: LineSet, N: int, rule: str = TRANSLATION_RULE) -> GridSet:
    """
    把 {1..K} 中的无三项等差集合嵌入 {1..N}²，N = 3K

    translation：Ã = ⋃_{i=1..K} (A + K + i − 1) × {i}（1 起始），无角。
    antidiagonal：x + y ≡ a + K (mod N) 的反对角线并集；一般含角，仅作对照。

    Raises:
        InvalidInputError: N 不是 3 的倍数或 A1 不在 {1..N/3} 内
    """
    if N < 3 or N % 3 != 0:
        raise InvalidInputError(f"N 必须是 3 的正倍数: {N}")
    K = N // 3
    if A1.modulus != K:
        raise InvalidInputError(f"A1 应位于 {{1..{K}}}，得到模数 {A1.modulus}")
    mask = np.zeros((N, N), dtype=bool)
    a = A1.index()
    if rule == TRANSLATION_RULE:
        for i in range(K):
            mask[a + K + i, i] = True
    elif rule == ANTIDIAGONAL_RULE:
        for y in range(N):
            mask[(a + K - y) % N, y] = True
    else:
        raise InvalidInputError(f"未知的嵌入规则 '{rule}'，可选: {TRANSLATION_RULE}, {ANTIDIAGONAL_RULE}")
    return GridSet(N, mask)
