"""等差数列划分与直角正方形细分"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.config import tolerances
from ..exceptions import InvalidInputError, NoRefinementDirectionError
from ..models import (
    ApPartition,
    ComplexField,
    GridSet,
    Progression,
    RefinementReport,
    RightSquare,
    SquareFamily,
)
from . import fourier

logger = logging.getLogger(__name__)

# 超过该对数时改为抽样检查直径
EXHAUSTIVE_PAIR_LIMIT = 4096
SAMPLED_PAIRS = 512
# 单对数列取值超过该数时直径改用弧长上界
EXACT_VALUE_LIMIT = 1 << 12


def _centered(x: int, n: int) -> int:
    x %= n
    return x - n if 2 * x > n else x


def _grid_side(n: int, s: int) -> int:
    """满足 8t³s ≥ N² 的最小 t，即 ⌈(N²/s)^{1/3}/2⌉"""
    t = max(1, int(round((n * n / s) ** (1 / 3) / 2)))
    while t > 1 and 8 * (t - 1) ** 3 * s >= n * n:
        t -= 1
    while 8 * t ** 3 * s < n * n:
        t += 1
    return t


def _common_step(n: int, r1: int, r2: int, t: int) -> int:
    """对 j = 0..t² 的 (j·r₁, j·r₂) 按 t×t 格子做抽屉原理，返回首次碰撞的 j₂ − j₁"""
    seen: Dict[Tuple[int, int], int] = {}
    for j in range(t * t + 1):
        cell = ((j * r1 % n) * t // n, (j * r2 % n) * t // n)
        if cell in seen:
            return j - seen[cell]
        seen[cell] = j
    raise AssertionError("抽屉原理必然产生碰撞")


def _split(start: int, step: int, length: int, pieces: int, n: int) -> List[Progression]:
    out: List[Progression] = []
    base, extra = divmod(length, pieces)
    offset = 0
    for i in range(pieces):
        size = base + (1 if i < extra else 0)
        if size:
            out.append(Progression(modulus=n, start=start + offset * step, step=step, length=size))
        offset += size
    return out


def circular_diameter(values: np.ndarray, n: int) -> int:
    """Z_N 中点集的圆周直径：N 减去相邻点间的最大间隙"""
    distinct = np.unique(np.asarray(values, dtype=np.int64) % n)
    if len(distinct) <= 1:
        return 0
    gaps = np.diff(np.append(distinct, distinct[0] + n))
    return int(n - gaps.max())


def _pair_diameter(n: int, r1: int, r2: int, p: Progression, q: Progression) -> int:
    """φ 在 P×Q 上的圆周直径；取值过多时返回覆盖全部取值的弧长，即直径上界"""
    arc = abs(_centered(r1 * p.step, n)) * (p.length - 1) + abs(_centered(r2 * q.step, n)) * (q.length - 1)
    if p.length * q.length > EXACT_VALUE_LIMIT and arc < n:
        return arc
    values = r1 * p.members()[:, None] + r2 * q.members()[None, :]
    return circular_diameter(values.ravel(), n)


def ap_partition(N: int, r1: int, r2: int, s: int, seed: int = 0) -> ApPartition:
    """
    把 Z_N 划分为公差相同的等差数列，使 φ(x, y) = r₁x + r₂y 在每个 P_i×P_j 上的圆周直径 ≤ s

    公差 u 由 t²+1 个倍数 (j·r₁, j·r₂) 的抽屉原理得到，t = ⌈(N²/s)^{1/3}/2⌉；
    每个模 u 剩余类再均分成长度 ≤ ⌊s/(|a|+|b|)⌋+1 的段，a、b 为 u·r₁、u·r₂ 的居中代表。

    Args:
        N: 模数
        r1, r2: 线性型系数，不同时为 0
        s: 直径上界，1 ≤ s ≤ N
        seed: 数列对过多时抽样检查直径所用的种子

    Returns:
        ApPartition: 数列、公差与直径检查结果

    Raises:
        InvalidInputError: 参数越界
    """
    if N < 1:
        raise InvalidInputError(f"模数 N 必须为正: {N}")
    if r1 == 0 and r2 == 0:
        raise InvalidInputError("线性型系数 (r₁, r₂) 不能同时为 0")
    if not 1 <= s <= N:
        raise InvalidInputError(f"直径参数 s 必须满足 1 ≤ s ≤ N: s={s}, N={N}")

    t = _grid_side(N, s)
    u = min(_common_step(N, r1, r2, t), N)
    a, b = _centered(u * r1, N), _centered(u * r2, N)
    spread = abs(a) + abs(b)
    longest = -(-N // u)
    max_length = longest if spread == 0 else s // spread + 1
    pieces = -(-longest // max_length)

    progressions: List[Progression] = []
    for c in range(u):
        progressions.extend(_split(c, u, -(-(N - c) // u), pieces, N))

    m = len(progressions)
    pairs = m * m
    exhaustive = pairs <= EXHAUSTIVE_PAIR_LIMIT
    if exhaustive:
        index_pairs = [(i, j) for i in range(m) for j in range(m)]
    else:
        rng = np.random.default_rng(seed)
        picks = rng.integers(0, m, size=(SAMPLED_PAIRS, 2))
        index_pairs = [(int(i), int(j)) for i, j in picks]
    max_diameter = max(
        (_pair_diameter(N, r1, r2, progressions[i], progressions[j]) for i, j in index_pairs), default=0
    )

    count_bound = 8 * N ** (4 / 3) / s ** (2 / 3)
    logger.debug(
        f"数列划分 N={N} r=({r1},{r2}) s={s}: t={t}, 公差 {u}, {m} 段, 最大直径 {max_diameter}"
    )
    return ApPartition(
        modulus=N,
        r1=r1,
        r2=r2,
        s=s,
        step=u,
        progressions=progressions,
        count_bound=count_bound,
        max_diameter=max_diameter,
        diameter_pairs_checked=len(index_pairs),
        exhaustive=exhaustive,
    )


def check_ap_partition(partition: ApPartition) -> List[str]:
    """逐条核对划分结论，返回违反项（空列表表示全部成立）"""
    n = partition.modulus
    problems: List[str] = []
    covered = np.zeros(n, dtype=np.int64)
    for p in partition.progressions:
        members = p.members()
        if members.max() >= n:
            problems.append(f"数列 {p.start}+{p.step}k 越出 [0, N)")
            continue
        np.add.at(covered, members, 1)
        if p.step != partition.step:
            problems.append(f"数列 {p.start} 的公差 {p.step} ≠ {partition.step}")
    if not np.all(covered == 1):
        problems.append("数列没有恰好覆盖 Z_N")
    lengths = partition.lengths
    if lengths and max(lengths) - min(lengths) > 1:
        problems.append(f"长度相差超过 1: {min(lengths)}..{max(lengths)}")
    if len(lengths) > partition.count_bound:
        problems.append(f"数列个数 {len(lengths)} 超过 {partition.count_bound:.1f}")
    if partition.max_diameter > partition.s:
        problems.append(f"直径 {partition.max_diameter} 超过 s={partition.s}")
    return problems


def _family_parts(
    square: RightSquare, partition: ApPartition, length: int
) -> Tuple[List[RightSquare], np.ndarray]:
    """裁剪到公共长度后映射回全局坐标，返回子正方形与父正方形内的覆盖掩码"""
    n = square.modulus
    children = [
        RightSquare(
            modulus=n,
            a=(square.a + p.start * square.d) % n,
            b=(square.b + q.start * square.d) % n,
            d=square.d * partition.step,
            t=length,
        )
        for p in partition.progressions
        for q in partition.progressions
    ]
    covered = np.zeros((n, n), dtype=bool)
    for child in children:
        covered |= child.mask()
    return sorted(children, key=lambda c: c.sort_key), covered


def right_square_partition(
    A: GridSet,
    r: Tuple[int, int],
    alpha_threshold: Optional[float] = None,
    square: Optional[RightSquare] = None,
    max_cells: Optional[int] = None,
) -> RefinementReport:
    """
    由大傅里叶系数 χ̂_A(r) 把直角正方形细分为等大的直角正方形

    在正方形的局部坐标 Z_t² 中重新测量 α = |χ̂_A(r)|/t²，取 s = ⌈αt/(4π)⌉ 调用
    ap_partition；所有数列裁剪到最短长度，多出的行列并入 Ω。max_cells 给定时
    把 s 加倍直到子正方形个数不超过它（s 到达 t 为止）。

    Args:
        A: 集合
        r: 局部频率，非零
        alpha_threshold: 调用方给出的 α，仅用于对照
        square: 被细分的正方形，默认整个网格
        max_cells: 子正方形个数上限

    Returns:
        RefinementReport: 正方形族、Ω 与平均平方偏差

    Raises:
        NoRefinementDirectionError: r = 0 或测得系数为 0
    """
    n = A.modulus
    square = square if square is not None else RightSquare.whole(n)
    t = square.t
    r1, r2 = r[0] % t, r[1] % t
    if r1 == 0 and r2 == 0:
        raise NoRefinementDirectionError(f"频率 {tuple(r)} 在 Z_{t}² 中为 0")

    local = square.local(A.indicator()).astype(np.float64)
    coefficient = abs(fourier.dft_2d(ComplexField.of(local)).coefficients[r1, r2])
    if coefficient <= tolerances.zero_coefficient * t * t:
        raise NoRefinementDirectionError(f"χ̂_A({r1},{r2}) = 0，没有细分方向")
    alpha = coefficient / (t * t)
    if alpha_threshold is not None and alpha < alpha_threshold:
        logger.warning(f"测得 α={alpha:.4g} 低于给定阈值 {alpha_threshold:.4g}")

    s = min(t, max(1, math.ceil(alpha * t / (4 * math.pi))))
    partition = ap_partition(t, r1, r2, s)
    while max_cells is not None and len(partition.progressions) ** 2 > max_cells and s < t:
        s = min(t, 2 * s)
        partition = ap_partition(t, r1, r2, s)

    m = len(partition.progressions)
    length = min(partition.lengths)
    partition = partition.model_copy(
        update={
            "progressions": [p.model_copy(update={"length": length}) for p in partition.progressions]
        }
    )
    children, covered = _family_parts(square, partition, length)
    parent_mask = square.mask()
    omega = GridSet(n, parent_mask & ~covered)

    chi = A.indicator()
    parent_count = int(chi[parent_mask].sum())
    delta = Fraction(parent_count, t * t)
    deviation = sum(
        (
            (Fraction(int(chi[np.ix_(c.first_axis(), c.second_axis())].sum()), c.size) - delta) ** 2
            for c in children
        ),
        Fraction(0),
    ) / len(children)

    threshold_met = math.log2(t) >= 100 + 10 * math.log2(1 / alpha)
    target = alpha * alpha / 16
    deviation_holds = (deviation >= Fraction(target)) if threshold_met else None
    if deviation_holds is False:
        logger.error(f"✗ 平均平方偏差 {float(deviation):.4g} 低于 α²/16 = {target:.4g}")

    family = SquareFamily(
        modulus=n,
        squares=children,
        omega=omega,
        parent=square,
        omega_accounting_bound=2 * m * m * -(-t // m),
    )
    logger.debug(
        f"正方形细分 t={t} r=({r1},{r2}) α={alpha:.4f} s={s}: {len(children)} 个边长 {length} 的子正方形, |Ω|={len(omega)}"
    )
    return RefinementReport(
        family=family,
        frequency=(r1, r2),
        alpha=alpha,
        s=s,
        progression_count=m,
        mean_square_deviation=deviation,
        deviation_target=target,
        threshold_met=threshold_met,
        deviation_holds=deviation_holds,
        omega_small=len(omega) < t ** (11 / 6),
    )


def check_square_family(family: SquareFamily) -> List[str]:
    """核对正方形族：两两不交、与 Ω 一起恰好覆盖父正方形、Ω 不超过构造上界"""
    n = family.modulus
    parent = family.parent if family.parent is not None else RightSquare.whole(n)
    problems: List[str] = []
    counts = np.zeros((n, n), dtype=np.int64)
    for sq in family.squares:
        if len(set(sq.first_axis().tolist())) != sq.t or len(set(sq.second_axis().tolist())) != sq.t:
            problems.append(f"正方形 {sq.sort_key} 的点有重复")
        counts += sq.mask()
    if np.any(counts > 1):
        problems.append("正方形两两相交")
    omega = family.omega.indicator()
    if np.any(omega & (counts > 0)):
        problems.append("Ω 与正方形相交")
    if not np.array_equal((counts > 0) | omega, parent.mask()):
        problems.append("正方形 ∪ Ω 不等于父正方形")
    if family.omega_accounting_bound and len(family.omega) > family.omega_accounting_bound:
        problems.append(f"|Ω| = {len(family.omega)} 超过 {family.omega_accounting_bound}")
    return problems
