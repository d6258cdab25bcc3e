"""二部图视角：Gram 矩阵 T = MM′ 的谱、拟随机性检查与水平集划分"""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..core.config import tolerances
from ..exceptions import InvalidInputError
from ..models import (
    Box,
    CheckOutcome,
    DensitySplit,
    GridSet,
    LevelSetPartition,
    SpectralCheckReport,
    SpectralReport,
)
from .uniformity import box_alpha
from .zn_core import marginal_profile

logger = logging.getLogger(__name__)


def adjacency(A: GridSet, box: Box) -> np.ndarray:
    """0/1 邻接矩阵 M，行按 E₁ 升序，列按 E₂ 升序"""
    return A.indicator()[np.ix_(box.e1.index(), box.e2.index())].astype(np.float64)


def gram_spectrum(A: GridSet, box: Optional[Box] = None) -> SpectralReport:
    """
    T = MM′ 的完整特征分解

    特征值降序排列，相同值按原下标升序；特征向量缩放到 ‖u_i‖² = n，
    并翻转符号使各分量之和非负。

    Raises:
        InvalidInputError: 盒子不是正方形
    """
    box = box if box is not None else Box.full(A.modulus)
    box.require_nonempty()
    box.require_contains(A)
    if not box.is_square:
        raise InvalidInputError(f"谱分析需要正方形盒子，得到 {box.shape}")
    n = len(box.e1)
    m = adjacency(A, box)
    t = m @ m.T
    w, v = np.linalg.eigh(t)
    if w.size and w.min() < -tolerances.eigen_clamp * max(1.0, float(n) ** 2):
        raise ArithmeticError(f"半正定矩阵出现负特征值 {w.min()}")
    w = np.clip(w, 0.0, None)
    order = np.lexsort((np.arange(n), -w))
    w, v = w[order], v[:, order] * math.sqrt(n)
    signs = np.where(v.sum(axis=0) < 0, -1.0, 1.0)
    v = v * signs
    v.setflags(write=False)

    ones = np.ones(n)
    u1 = v[:, 0]
    intersections = t.astype(np.int64)
    return SpectralReport(
        n=n,
        delta=Fraction(len(A), n * n),
        mu=[float(x) for x in w],
        vectors=v,
        perron_aligned=bool(np.all(u1 >= -tolerances.orthogonality)),
        deviation=float(np.sum((u1 - ones) ** 2)),
        trace=float(w.sum()),
        trace_squares=float(np.sum(w ** 2)),
        expected_trace=len(A),
        expected_trace_squares=int(np.sum(intersections * intersections)),
    )


def spectrum_payload(rep: SpectralReport) -> Dict[str, Any]:
    """命令行与 API 共用的 spectrum 报告体，不含特征向量"""
    return {
        "n": rep.n,
        "delta": rep.delta,
        "mu": rep.mu,
        "deviation": rep.deviation,
        "perron_aligned": rep.perron_aligned,
        "traces": {
            "trace": rep.trace,
            "expected_trace": rep.expected_trace,
            "trace_squares": rep.trace_squares,
            "expected_trace_squares": rep.expected_trace_squares,
        },
    }


def measured_alpha1(A: GridSet, box: Box) -> float:
    """使行/列偏差条件成立的最小 α₁"""
    profile = marginal_profile(A, box)
    return math.sqrt(max(
        float(profile.row_deviation) / profile.size_e2,
        float(profile.col_deviation) / profile.size_e1,
    ))


def spectral_uniformity_check(A: GridSet, box: Optional[Box], alpha: float, epsilon: float) -> SpectralCheckReport:
    """
    μ₁ 的上下界与 μ₂ 和盒一致性之间的双向关系

    每项检查分别记录前提是否满足与结论是否成立。
    """
    box = box if box is not None else Box.full(A.modulus)
    rep = gram_spectrum(A, box)
    n = rep.n
    scale = float(n) ** 2
    delta = float(rep.delta)
    alpha1 = measured_alpha1(A, box)
    measured = box_alpha(A, box)
    mu1 = rep.mu[0]
    mu2 = rep.mu[1] if n > 1 else 0.0
    slack = tolerances.slack * scale
    checks: List[CheckOutcome] = []

    lower = delta * delta * scale
    checks.append(CheckOutcome(
        name="mu1-lower",
        hypothesis_satisfied=True,
        conclusion_held=mu1 >= lower - slack,
        margin=mu1 - lower,
    ))

    close = rep.deviation <= epsilon * epsilon * n
    upper = (delta * delta + 2 * epsilon + alpha1 * alpha1) * scale
    checks.append(CheckOutcome(
        name="mu1-upper",
        hypothesis_satisfied=close,
        conclusion_held=(mu1 <= upper + slack) if close else None,
        margin=upper - mu1,
    ))

    forward_bound = (math.sqrt(alpha) + 4 * math.sqrt(epsilon) + 4 * math.sqrt(alpha1)) * scale
    forward_hyp = measured <= alpha
    checks.append(CheckOutcome(
        name="mu2-from-box-uniformity",
        hypothesis_satisfied=forward_hyp,
        conclusion_held=(mu2 <= forward_bound + slack) if forward_hyp else None,
        margin=forward_bound - mu2,
    ))

    eta = alpha
    converse_hyp = mu2 < eta * scale and close
    converse_bound = eta + 16 * epsilon + 16 * alpha1
    checks.append(CheckOutcome(
        name="box-uniformity-from-mu2",
        hypothesis_satisfied=converse_hyp,
        conclusion_held=(measured <= converse_bound + tolerances.slack) if converse_hyp else None,
        margin=converse_bound - measured,
    ))

    for check in checks:
        if check.failed:
            logger.warning(f"✗ 谱检查 {check.name} 失败: margin={check.margin}")
    return SpectralCheckReport(
        alpha=alpha, epsilon=epsilon, alpha1=alpha1, measured_alpha=measured, checks=checks
    )


def rayleigh_lower_bound(A: GridSet, box: Optional[Box] = None) -> float:
    """(M′u, M′u)/n，u = (1,…,1)，是 μ₁ 的下界"""
    box = box if box is not None else Box.full(A.modulus)
    m = adjacency(A, box)
    col = m.sum(axis=0)
    return float(np.sum(col * col)) / m.shape[0]


def quadratic_form_check(c: np.ndarray, a: np.ndarray) -> CheckOutcome:
    """(Ca, Ca) ≤ ‖a‖²·Σ c_ij²"""
    ca = c @ a
    lhs = float(np.real(np.vdot(ca, ca)))
    rhs = float(np.real(np.vdot(a, a))) * float(np.sum(np.abs(c) ** 2))
    return CheckOutcome(
        name="quadratic-form-bound",
        hypothesis_satisfied=True,
        conclusion_held=lhs <= rhs * (1 + tolerances.quadratic_form) + tolerances.quadratic_form,
        margin=rhs - lhs,
    )


# αξ 超过该值时方格数不能保证不超过 4/(αξ)²
MAX_ALPHA_XI = 2 - math.sqrt(2)


def _grid_layout(radius: float, side: float) -> Tuple[float, int, int]:
    """(偏移, 最小格下标, 最大格下标)：原点对齐与中心对齐两种方格中每轴格数较少者"""
    x = radius / side
    aligned = math.ceil(x)
    centred = math.ceil(x - 0.5)
    if 2 * aligned <= 2 * centred + 1:
        return 0.0, -aligned, aligned - 1
    return 0.5, -centred, centred


def level_set_partition(
    v: Sequence[complex],
    alpha: float,
    xi: float,
    D: Optional[float] = None,
    lam: Optional[float] = None,
) -> LevelSetPartition:
    """
    把取值在半径 1/α 圆盘内的向量按值划分成类，类内每个分量与类中心的距离不超过 ξ

    用边长 ξ√2 的方格覆盖圆盘，格心投影回圆盘作为类中心。每轴格数不超过
    2/(αξ√2) + 1，αξ ≤ 2 − √2 时总数不超过 4/(αξ)²。

    Args:
        v: 向量，分量满足 |v_i| ≤ 1/α
        alpha: 圆盘半径的倒数
        xi: 类中心距离上界，0 < ξ < 1/2
        D, lam: 给出时检查 |λ| ≥ α·n·D

    Raises:
        InvalidInputError: 参数越界或某分量超出圆盘，报告下标
    """
    values = np.asarray(v, dtype=np.complex128)
    n = values.size
    if not (0 < xi < 0.5):
        raise InvalidInputError(f"ξ 必须在 (0, 1/2) 内: {xi}")
    if alpha <= 0:
        raise InvalidInputError(f"α 必须为正: {alpha}")
    if alpha * xi > MAX_ALPHA_XI:
        raise InvalidInputError(f"αξ = {alpha * xi} 超过 2 − √2，圆盘半径相对 ξ 过小")
    if D is not None and lam is not None and abs(lam) < alpha * n * D - tolerances.level_set:
        raise InvalidInputError(f"|λ| = {abs(lam)} 小于 α·n·D = {alpha * n * D}")
    radius = 1.0 / alpha
    mags = np.abs(values)
    if n and mags.max() > radius + tolerances.level_set:
        bad = int(np.argmax(mags > radius + tolerances.level_set))
        raise InvalidInputError(f"分量 v[{bad}] 的模 {mags[bad]} 超过 1/α = {radius}")

    side = xi * math.sqrt(2)
    offset, lo, hi = _grid_layout(radius, side)
    # 恰在圆周上的分量可能落到最外一格之外
    cells_x = np.clip(np.floor(values.real / side + offset).astype(np.int64), lo, hi)
    cells_y = np.clip(np.floor(values.imag / side + offset).astype(np.int64), lo, hi)
    groups: Dict[Tuple[int, int], List[int]] = {}
    for i, cell in enumerate(zip(cells_x.tolist(), cells_y.tolist())):
        groups.setdefault(cell, []).append(i)

    classes: List[List[int]] = []
    centers: List[Tuple[float, float]] = []
    for cell, members in sorted(groups.items(), key=lambda item: item[1][0]):
        c = complex((cell[0] - offset + 0.5) * side, (cell[1] - offset + 0.5) * side)
        if abs(c) > radius:
            c = c * (radius / abs(c))
        if np.any(np.abs(values[members] - c) > xi + tolerances.level_set):
            raise ArithmeticError(f"类中心 {c} 与成员距离超过 ξ")
        classes.append(members)
        centers.append((c.real, c.imag))

    bound = 4.0 / (alpha * xi) ** 2
    if len(classes) > bound:
        raise ArithmeticError(f"水平集类数 {len(classes)} 超过 4/(αξ)² = {bound}")
    logger.debug(f"水平集划分: n={n} α={alpha:.4g} ξ={xi:.4g} → {len(classes)} 类 (上界 {bound:.1f})")
    return LevelSetPartition(
        classes=classes,
        centers=centers,
        xi=xi,
        alpha=alpha,
        count_bound=bound,
        within_count_bound=True,
    )


def density_split_counts(hits: Sequence[int], sizes: Sequence[int], eta: Fraction) -> DensitySplit:
    """
    按计数给出的 density_split

    B = {i : |A∩Q_i| < (δ−η)|Q_i|}，并验证
    Σ_{i∉B} |A∩Q_i| ≥ δ·Σ_{i∉B}|Q_i| + η·Σ_{i∈B}|Q_i|。
    """
    eta = Fraction(eta)
    total = sum(sizes)
    if total == 0:
        raise InvalidInputError("划分为空")
    delta = Fraction(sum(hits), total)
    bad = [i for i, (h, s) in enumerate(zip(hits, sizes)) if h < (delta - eta) * s]
    bad_set = set(bad)
    lhs = Fraction(sum(h for i, h in enumerate(hits) if i not in bad_set))
    rhs = delta * sum(s for i, s in enumerate(sizes) if i not in bad_set) + eta * sum(sizes[i] for i in bad)
    return DensitySplit(bad=bad, inequality_holds=lhs >= rhs, lhs=lhs, rhs=rhs)


def density_split(A: Set[Hashable], partition: Sequence[Set[Hashable]], eta: Fraction) -> DensitySplit:
    """
    Raises:
        InvalidInputError: 划分的块相交、A 不在并集内，或 η ≤ 0
    """
    if Fraction(eta) <= 0:
        raise InvalidInputError(f"η 必须为正: {eta}")
    seen: Set[Hashable] = set()
    for i, block in enumerate(partition):
        if seen & block:
            raise InvalidInputError(f"划分的第 {i} 块与前面的块相交")
        seen |= block
    if not set(A) <= seen:
        raise InvalidInputError("A 不在划分的并集内")
    hits = [len(set(A) & block) for block in partition]
    return density_split_counts(hits, [len(block) for block in partition], eta)
