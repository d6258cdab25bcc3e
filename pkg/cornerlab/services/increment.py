"""密度增量定位：边缘偏差、谱搜索与非正方形盒子的切分"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..core.profiles import TOY_PROFILE, ConstantsProfile
from ..models import Box, GridSet, IncrementKind, IncrementResult, LineSet, MarginalProfile
from .graphview import gram_spectrum, level_set_partition
from .uniformity import box_alpha
from .zn_core import marginal_profile, marginal_uniformity_check

logger = logging.getLogger(__name__)

Candidate = Tuple[Fraction, Tuple[int, ...], Tuple[int, ...], str]


def _density(chi: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> Fraction:
    return Fraction(int(chi[np.ix_(g1, g2)].sum()), len(g1) * len(g2))


def _candidate(chi: np.ndarray, g1, g2, route: str) -> Optional[Candidate]:
    g1 = np.asarray(sorted(g1), dtype=np.int64)
    g2 = np.asarray(sorted(g2), dtype=np.int64)
    if not len(g1) or not len(g2):
        return None
    return _density(chi, g1, g2), tuple(g1.tolist()), tuple(g2.tolist()), route


def _best(candidates: List[Optional[Candidate]], delta: Fraction) -> Optional[Candidate]:
    # 增益最大者；并列时取字典序最小的盒子
    valid = [c for c in candidates if c is not None and c[0] > delta]
    if not valid:
        return None
    return min(valid, key=lambda c: (-c[0], c[1], c[2]))


def _marginal_route(
    chi: np.ndarray, box: Box, profile: MarginalProfile, zeta: Fraction, rows: bool
) -> Optional[Candidate]:
    """行（或列）偏差过大时取 B⁺ 或 E∖B⁻"""
    delta = profile.delta
    densities = profile.row_density if rows else profile.col_density
    n = profile.size_e2 if rows else profile.size_e1
    plus = [x for x, d in densities.items() if d > delta + zeta / 2]
    minus = {x for x, d in densities.items() if d < delta - zeta / 2}
    if plus and len(plus) >= zeta * zeta * n / 4:
        chosen, tag = plus, "plus"
    elif minus:
        chosen, tag = [x for x in densities if x not in minus], "complement"
    else:
        chosen, tag = plus, "plus"
    if rows:
        found = _candidate(chi, box.e1.members, chosen, f"marginal-rows-{tag}")
    else:
        found = _candidate(chi, chosen, box.e2.members, f"marginal-cols-{tag}")
    return _best([found], delta)


def _spectral_search(
    chi: np.ndarray, A: GridSet, box: Box, alpha: float, profile: ConstantsProfile, notes: List[str]
) -> Optional[Candidate]:
    """
    正方形盒子上的谱搜索

    ‖u − u₁‖² 较小时对 u₂ 作水平集划分，否则对 u₁ 重复同样的搜索；
    每个非坏类 F_j 与其正行集 J⁺_j = {m : Σ_{k∈F_j}(χ(k,m) − δ) > 0} 给出候选。
    """
    rep = gram_spectrum(A, box)
    n = rep.n
    if n < 2:
        return None
    ones = np.ones(n)
    if float(np.sum((ones - rep.vectors[:, 0]) ** 2)) <= alpha * alpha * n / 36:
        index, route = 1, "spectral-u2"
    else:
        index, route = 0, "spectral-u1"
        notes.append("u₁ 偏离全 1 向量，改对 u₁ 重复搜索")
    mu = rep.mu[index]
    if mu <= 0:
        return None
    v = rep.vectors[:, index]
    level_alpha = min(mu / (n * n), 1.0)
    partition = level_set_partition(v, alpha=level_alpha, xi=min(alpha / 16, 0.49))

    e1, e2 = box.e1.index(), box.e2.index()
    sub = chi[np.ix_(e1, e2)].astype(np.int64)
    delta = rep.delta
    floor = float(profile.class_floor(Fraction(alpha))) * n
    candidates: List[Optional[Candidate]] = []
    for members in partition.classes:
        if len(members) < floor:
            continue
        counts = sub[members].sum(axis=0)
        excess = [Fraction(int(c)) - delta * len(members) for c in counts]
        positive = [int(e2[j]) for j, s in enumerate(excess) if s > 0]
        candidates.append(_candidate(chi, e1[members].tolist(), positive, route))
    return _best(candidates, delta)


def _square_pieces(long_side: List[int], short_side: List[int], depth: int) -> List[Tuple[List[int], List[int]]]:
    """把 long×short 切成 short×short 的正方形块，余下部分交换角色继续切"""
    pieces: List[Tuple[List[int], List[int]]] = []
    s = len(short_side)
    full = len(long_side) // s
    for i in range(full):
        pieces.append((long_side[i * s : (i + 1) * s], short_side))
    rest = long_side[full * s :]
    if rest:
        if depth <= 0:
            pieces.append((rest, short_side))
        else:
            for b, a in _square_pieces(short_side, rest, depth - 1):
                pieces.append((a, b))
    return pieces


def _carve(
    chi: np.ndarray, A: GridSet, box: Box, alpha: float, profile: ConstantsProfile, notes: List[str]
) -> Optional[Candidate]:
    e1, e2 = list(box.e1.members), list(box.e2.members)
    depth = max(1, math.ceil(2 * math.log2(1 / alpha)))
    if len(e1) >= len(e2):
        pieces = _square_pieces(e1, e2, depth)
    else:
        pieces = [(a, b) for b, a in _square_pieces(e2, e1, depth)]
    delta = Fraction(int(chi[np.ix_(e1, e2)].sum()), len(e1) * len(e2))

    n = box.modulus
    spectral: List[Optional[Candidate]] = []
    plain: List[Optional[Candidate]] = []
    for g1, g2 in pieces:
        plain.append(_candidate(chi, g1, g2, "carve-piece"))
        if len(g1) != len(g2) or len(g1) < 2:
            continue
        sub_box = Box(e1=LineSet(modulus=n, members=g1), e2=LineSet(modulus=n, members=g2))
        sub_a = GridSet(n, chi & sub_box.indicator())
        if box_alpha(sub_a, sub_box) <= alpha:
            continue
        found = _spectral_search(chi, sub_a, sub_box, alpha, profile, notes)
        if found is not None:
            spectral.append((found[0], found[1], found[2], "carve-spectral"))
    notes.append(f"切分为 {len(pieces)} 块 (深度上限 {depth})")
    return _best(spectral, delta) or _best(plain, delta)


def _fallback(chi: np.ndarray, box: Box, profile: MarginalProfile) -> Optional[Candidate]:
    delta = profile.delta
    rows = [m for m, d in profile.row_density.items() if d > delta]
    if rows:
        return _candidate(chi, box.e1.members, rows, "fallback-rows")
    cols = [k for k, g in profile.col_density.items() if g > delta]
    if cols:
        return _candidate(chi, cols, box.e2.members, "fallback-cols")
    for m in box.e2.members:
        support = [k for k in box.e1.members if chi[k, m]]
        if support:
            return _candidate(chi, support, [m], "fallback-row-support")
    return None


def find_density_increment(
    A: GridSet,
    box: Optional[Box],
    alpha: float,
    profile: ConstantsProfile = TOY_PROFILE,
    alpha1: Optional[Fraction] = None,
) -> IncrementResult:
    """
    寻找 A 更稠密的子盒 G₁×G₂ ⊆ E₁×E₂

    顺序：行/列偏差不满足时走边缘路线；盒一致时返回 uniform；否则正方形盒子
    走谱搜索，非正方形盒子先切成正方形块。返回的增量总满足
    |A∩(G₁×G₂)| = newDensity·|G₁||G₂| 且 newDensity > δ。

    Args:
        A: 集合
        box: 盒子，None 表示全网格
        alpha: 一致性参数，0 < α < 1
        profile: 常数配置，决定 α₁、增益与大小下界
        alpha1: 覆盖配置中的 α₁

    Raises:
        InvalidInputError: A 不在盒子内
    """
    box = box if box is not None else Box.full(A.modulus)
    profile_m = marginal_profile(A, box)
    delta = profile_m.delta
    chi = A.indicator()
    a = Fraction(alpha)
    zeta = Fraction(alpha1) if alpha1 is not None else profile.increment_alpha1(a)
    notes: List[str] = []

    def result(kind: IncrementKind, found: Optional[Candidate], route: str) -> IncrementResult:
        if found is None:
            g1, g2, new = box.e1, box.e2, delta
        else:
            new = found[0]
            g1 = LineSet(modulus=A.modulus, members=found[1])
            g2 = LineSet(modulus=A.modulus, members=found[2])
        marginal = route.startswith("marginal")
        gain_floor = zeta ** 3 / 8 if marginal else profile.gain_floor(a)
        base = min(profile_m.size_e1, profile_m.size_e2)
        size_floor = zeta ** 3 * profile_m.size_e2 / 8 if marginal else profile.size_floor(a) * base
        gain = new - delta
        floors_met = kind == IncrementKind.INCREMENT and gain >= gain_floor and min(len(g1), len(g2)) >= size_floor
        if kind == IncrementKind.INCREMENT:
            logger.info(
                f"✓ 密度增量 ({route}): δ={float(delta):.4f} → {float(new):.4f}, "
                f"盒子 {len(g1)}×{len(g2)}"
            )
        return IncrementResult(
            kind=kind,
            g1=g1,
            g2=g2,
            delta=delta,
            new_density=new,
            density_gain=gain,
            gain_floor=gain_floor,
            size_floor=size_floor,
            floors_met=floors_met,
            route=route,
            profile=profile.name,
            notes=notes,
        )

    if delta == 0 or delta == 1:
        return result(IncrementKind.UNIFORM, None, "uniform")

    check = marginal_uniformity_check(profile_m, zeta)
    for rows, balanced in ((True, check.rows_balanced), (False, check.cols_balanced)):
        if balanced:
            continue
        found = _marginal_route(chi, box, profile_m, zeta, rows=rows)
        if found is not None:
            return result(IncrementKind.INCREMENT, *_route(found))
        notes.append(f"{'行' if rows else '列'}偏差路线未找到更稠密的子盒")

    measured = box_alpha(A, box)
    if measured <= alpha:
        notes.append(f"实测盒一致性 α = {measured:.3e} ≤ {alpha:.3e}")
        return result(IncrementKind.UNIFORM, None, "uniform")

    if box.is_square:
        found = _best([_spectral_search(chi, A, box, alpha, profile, notes)], delta)
    else:
        found = _carve(chi, A, box, alpha, profile, notes)
    if found is None:
        notes.append("谱搜索未找到候选，改用行/列回退")
        found = _fallback(chi, box, profile_m)
    if found is None:
        return result(IncrementKind.UNIFORM, None, "uniform")
    return result(IncrementKind.INCREMENT, *_route(found))


def _route(found: Optional[Candidate]) -> Tuple[Optional[Candidate], str]:
    return found, found[3] if found is not None else "uniform"
