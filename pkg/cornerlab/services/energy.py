"""能量增量：直角正方形族的能量、正则化循环、一致矩形定位与饱和上界"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.concurrency import ordered_map
from ..core.config import tolerances
from ..core.profiles import TOY_PROFILE, ConstantsProfile, PowerLaw
from ..exceptions import InvalidInputError, NoRefinementDirectionError
from ..models import (
    Box,
    CheckOutcome,
    ComplexField,
    EnergyDecomposition,
    EnergyRunResult,
    EnergyState,
    GridSet,
    LineSet,
    RectangleLocation,
    RightSquare,
    SaturationReport,
    SquareFamily,
)
from .partition import right_square_partition
from .uniformity import alpha_uniformity_1d, box_fourth_power_dual, spectral_criterion_2d
from .zn_core import balanced_box_function
from . import fourier

logger = logging.getLogger(__name__)

UNIFORM = "uniform"
CONVERGED = "converged"
STALLED = "stalled"
MAX_ITERS = "max-iters"


def _cell_weight(chi: np.ndarray, cell: RightSquare) -> int:
    return int(cell.local(chi).sum())


def _energy(weights: Sequence[int], cells: Sequence[RightSquare]) -> Fraction:
    # δ_C²·|C| = w²/|C|
    return sum((Fraction(w * w, c.size) for w, c in zip(weights, cells)), Fraction(0))


def energy_of_family(family: SquareFamily, W: GridSet) -> EnergyState:
    """
    ‖E(Σ)‖₂² = Σ_j δ_{C_j}(W)²·|C_j|，精确有理数

    Args:
        family: 正方形族
        W: 被正则化的集合

    Returns:
        EnergyState: 能量、各格密度、覆盖质量与 |W∩Ω|
    """
    chi = W.indicator()
    weights = [_cell_weight(chi, c) for c in family.squares]
    return EnergyState(
        iteration=0,
        squares=list(family.squares),
        energy=_energy(weights, family.squares),
        per_cell_density=[Fraction(w, c.size) for w, c in zip(weights, family.squares)],
        cover_mass=sum(weights),
        bad_mass=len(W.intersect(family.omega)),
    )


def _labels(cells: Sequence[RightSquare], n: int) -> np.ndarray:
    labels = np.full((n, n), -1, dtype=np.int64)
    for j, cell in enumerate(cells):
        labels[np.ix_(cell.first_axis(), cell.second_axis())] = j
    return labels


def _cell_values(cells: Sequence[RightSquare], chi: np.ndarray) -> List[Fraction]:
    # 末尾的 0 对应不在任何格内的点 (标签 -1)
    return [Fraction(_cell_weight(chi, c), c.size) for c in cells] + [Fraction(0)]


def energy_decomposition(
    coarse: Sequence[RightSquare], fine: Sequence[RightSquare], W: GridSet
) -> EnergyDecomposition:
    """
    检查 ‖E₂‖² = ‖E₁‖² + ‖E₂−E₁‖² + 2(E₁, E₂−E₁)

    E₁、E₂ 分别为粗、细两个族的条件期望函数；按 (粗标签, 细标签) 对计数后精确求和。
    """
    n = W.modulus
    chi = W.indicator()
    e1 = _cell_values(coarse, chi)
    e2 = _cell_values(fine, chi)
    pairs = np.stack([_labels(coarse, n).ravel(), _labels(fine, n).ravel()], axis=1)
    unique, counts = np.unique(pairs, axis=0, return_counts=True)

    norm1 = norm2 = difference = cross = Fraction(0)
    for (i, j), count in zip(unique.tolist(), counts.tolist()):
        v1, v2 = e1[i], e2[j]
        norm1 += count * v1 * v1
        norm2 += count * v2 * v2
        difference += count * (v2 - v1) ** 2
        cross += count * v1 * (v2 - v1)
    holds = norm2 == norm1 + difference + 2 * cross
    if not holds:
        logger.error(f"✗ 能量分解不成立: {norm2} ≠ {norm1} + {difference} + 2·{cross}")
    return EnergyDecomposition(coarse=norm1, fine=norm2, difference=difference, cross=cross, holds=holds)


def holder_check(cells: Sequence[RightSquare], densities: Sequence[Fraction], law: PowerLaw) -> CheckOutcome:
    """Σ|C_j|·α(δ_j) ≥ K·(Σδ_j|C_j|)^ρ / (Σ|C_j|)^{ρ−1}，精确比较"""
    sizes = [c.size for c in cells]
    total = sum(sizes)
    if not total:
        return CheckOutcome(name="holder-step", hypothesis_satisfied=False, detail="空族")
    lhs = sum((s * law(d) for s, d in zip(sizes, densities)), Fraction(0))
    mass = sum((d * s for s, d in zip(sizes, densities)), Fraction(0))
    rhs = law.K * mass ** law.rho / Fraction(total) ** (law.rho - 1)
    return CheckOutcome(
        name="holder-step",
        hypothesis_satisfied=True,
        conclusion_held=lhs >= rhs,
        margin=float(lhs - rhs),
        detail=f"{len(sizes)} 格",
    )


def _measure_cell(chi: np.ndarray, cell: RightSquare, law: PowerLaw) -> Tuple[bool, Tuple[int, int], bool]:
    """(是否一致, 最大非零频率, 该频率是否达到 α^{1/2}t²)"""
    local = cell.local(chi).astype(np.float64)
    t = cell.t
    delta = Fraction(int(local.sum()), t * t)
    target = float(law(delta))
    f = ComplexField.of(local - float(delta))
    coeffs = np.abs(fourier.dft_2d(f).coefficients)
    measured = float(np.sum(coeffs ** 4)) / float(t) ** 8
    uniform = measured <= target
    if uniform or t < 2:
        return True, (0, 0), False
    r, _, reached = spectral_criterion_2d(f, target)
    return False, r, reached


def _refine(
    chi: np.ndarray, W: GridSet, cell: RightSquare, r: Tuple[int, int], profile: ConstantsProfile
) -> Optional[Tuple[List[RightSquare], np.ndarray]]:
    """
    细分一个不一致格；仅当保留下来的子格能量严格增加时接受

    Returns:
        (保留的子格, 并入 B 的掩码)，不接受时为 None
    """
    try:
        report = right_square_partition(W, r, square=cell, max_cells=profile.max_cells_per_refinement)
    except NoRefinementDirectionError as e:
        logger.debug(f"格 {cell.sort_key} 无法细分: {e.detail}")
        return None
    kept = [c for c in report.family.squares if c.t >= profile.min_cell_side]
    dropped = report.family.omega.indicator().copy()
    for c in report.family.squares:
        if c.t < profile.min_cell_side:
            dropped |= c.mask()
    weight = _cell_weight(chi, cell)
    before = Fraction(weight * weight, cell.size)
    after = _energy([_cell_weight(chi, c) for c in kept], kept)
    if after <= before:
        return None
    return kept, dropped


def energy_increment_run(
    W: GridSet,
    epsilon: Union[Fraction, float],
    law: PowerLaw,
    profile: ConstantsProfile = TOY_PROFILE,
    max_iters: int = 8,
) -> EnergyRunResult:
    """
    能量增量正则化循环

    每轮测量 W 在各格上的局部 α，对未达到 α(δ_C) = K·δ_C^ρ 的格在其最大非零频率处
    调用 right_square_partition；边长小于 min_cell_side 的子格与 Ω 并入坏集 B。
    不一致质量 < εN² 时停止。结束时 W 密度 < ε 的格也并入 B。

    Args:
        W: 集合
        epsilon: 0 < ε ≤ δ(W)
        law: 一致性目标
        profile: 常数配置
        max_iters: 最大轮数

    Returns:
        EnergyRunResult: 最终正方形、W∩B 与每轮状态

    Raises:
        InvalidInputError: ε 或 max_iters 越界
    """
    n = W.modulus
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= W.density:
        raise InvalidInputError(f"ε 必须满足 0 < ε ≤ δ(W) = {W.density}: ε={epsilon}")
    if max_iters < 1:
        raise InvalidInputError(f"max_iters 必须至少为 1: {max_iters}")

    chi = W.indicator()
    total = len(W)
    cells: List[RightSquare] = [RightSquare.whole(n)]
    bad = np.zeros((n, n), dtype=bool)
    trace: List[EnergyState] = []
    outcome = MAX_ITERS

    for iteration in range(1, max_iters + 1):
        measured = ordered_map(lambda c: _measure_cell(chi, c, law), cells)
        weights = [_cell_weight(chi, c) for c in cells]
        densities = [Fraction(w, c.size) for w, c in zip(weights, cells)]
        holder = holder_check(cells, densities, law)
        energy_before = _energy(weights, cells)
        nonuniform = [i for i, (uniform, _, _) in enumerate(measured) if not uniform]
        nonuniform_mass = sum(weights[i] for i in nonuniform)
        criterion_hits = sum(1 for i in nonuniform if measured[i][2])

        refined = stalled = 0
        next_cells: List[RightSquare] = list(cells)
        decomposition = None
        if nonuniform_mass >= epsilon * n * n:
            results = ordered_map(lambda i: _refine(chi, W, cells[i], measured[i][1], profile), nonuniform)
            replaced = set()
            children: List[RightSquare] = []
            for i, result in zip(nonuniform, results):
                if result is None:
                    stalled += 1
                    continue
                kept, dropped = result
                refined += 1
                replaced.add(i)
                children.extend(kept)
                bad |= dropped
            next_cells = sorted(
                [c for i, c in enumerate(cells) if i not in replaced] + children, key=lambda c: c.sort_key
            )
            if refined:
                decomposition = energy_decomposition(cells, next_cells, W)

        next_weights = [_cell_weight(chi, c) for c in next_cells]
        bad_mass = int(chi[bad].sum())
        if sum(next_weights) + bad_mass != total:
            logger.error(f"✗ 第 {iteration} 轮计数不守恒: {sum(next_weights)} + {bad_mass} ≠ {total}")
        state = EnergyState(
            iteration=iteration,
            squares=next_cells,
            energy=_energy(next_weights, next_cells),
            per_cell_density=[Fraction(w, c.size) for w, c in zip(next_weights, next_cells)],
            cover_mass=sum(next_weights),
            bad_mass=bad_mass,
            uniform_cells=len(cells) - len(nonuniform),
            refined_cells=refined,
            stalled_cells=stalled,
            nonuniform_mass=nonuniform_mass,
            nonuniform_cells=len(nonuniform),
            criterion_hits=criterion_hits,
            decomposition=decomposition,
            holder=holder,
        )
        trace.append(state)
        logger.debug(
            f"能量第 {iteration} 轮: {len(cells)} → {len(next_cells)} 格, "
            f"能量 {float(energy_before):.3f} → {float(state.energy):.3f}, 不一致质量 {nonuniform_mass}"
        )
        cells = next_cells
        if nonuniform_mass < epsilon * n * n:
            outcome = UNIFORM if nonuniform_mass == 0 else CONVERGED
            break
        if not refined:
            outcome = STALLED
            break

    survivors: List[RightSquare] = []
    for cell in cells:
        if Fraction(_cell_weight(chi, cell), cell.size) < epsilon:
            bad |= cell.mask()
        else:
            survivors.append(cell)
    bad_set = GridSet(n, chi & bad)
    logger.info(
        f"✓ 能量增量结束 ({outcome}): {len(trace)} 轮, {len(survivors)} 格, |W∩B|={len(bad_set)}"
    )
    return EnergyRunResult(
        outcome=outcome,
        squares=survivors,
        bad=bad_set,
        trace=trace,
        epsilon=epsilon,
        profile=profile.name,
    )


def _axis_uniformity(axis: np.ndarray, line: LineSet) -> Tuple[Fraction, float]:
    """W_i 在数列 P_i 局部坐标 Z_t 中的相对密度与一维 α"""
    local = np.isin(axis, np.asarray(line.members, dtype=np.int64)).astype(np.float64)
    gamma = Fraction(int(local.sum()), len(axis))
    report = alpha_uniformity_1d(ComplexField.of(local - float(gamma)))
    return gamma, report.minimal_alpha


def uniform_rectangle_locate(
    W1: LineSet,
    W2: LineSet,
    A: GridSet,
    zeta: Union[Fraction, float],
    law: PowerLaw,
    profile: ConstantsProfile = TOY_PROFILE,
    max_iters: int = 8,
) -> RectangleLocation:
    """
    在 W₁×W₂ 中找直角正方形 P，使 A 在 P∩W 上的密度不低于 δ − 4ζ

    对 W = W₁×W₂ 以 ε = ζβ₁β₂ 运行能量增量，取 A 在 P∩W 上密度最大的格，
    R_i = W_i ∩ P_i，并报告 R_i 在 P_i 中的一维一致性与目标 K^{1/2}γ_i^{ρ/2}。

    Raises:
        InvalidInputError: ζ 越界或 A 不在 W₁×W₂ 内
    """
    zeta = Fraction(zeta)
    if not 0 < zeta < 1:
        raise InvalidInputError(f"ζ 必须在 (0, 1) 内: {zeta}")
    box = Box(e1=W1, e2=W2)
    box.require_nonempty()
    box.require_contains(A)
    n = A.modulus
    delta = Fraction(len(A), box.area)
    floor = delta - 4 * zeta
    W = GridSet(n, box.indicator())
    epsilon = zeta * W1.density * W2.density
    run = energy_increment_run(W, epsilon, law, profile, max_iters=max_iters)

    chi_a = A.indicator()
    chi_w = W.indicator()
    best: Optional[Tuple[Fraction, RightSquare]] = None
    for cell in run.squares:
        covered = _cell_weight(chi_w, cell)
        if not covered:
            continue
        density = Fraction(_cell_weight(chi_a, cell), covered)
        if best is None or density > best[0]:
            best = (density, cell)
    if best is None:
        logger.warning("✗ 能量增量后没有剩余的格")
        return RectangleLocation(found=False, delta=delta, floor=floor, bad_mass=len(run.bad))

    density, cell = best
    first, second = cell.first_axis(), cell.second_axis()
    gamma1, alpha1 = _axis_uniformity(first, W1)
    gamma2, alpha2 = _axis_uniformity(second, W2)
    r1 = LineSet(modulus=n, members=[int(x) for x in first if int(x) in W1])
    r2 = LineSet(modulus=n, members=[int(y) for y in second if int(y) in W2])
    floor_met = density >= floor
    logger.info(
        f"{'✓' if floor_met else '✗'} 一致矩形 {len(r1)}×{len(r2)}: 密度 {float(density):.4f}, 下界 {float(floor):.4f}"
    )
    return RectangleLocation(
        found=True,
        square=cell,
        r1=r1,
        r2=r2,
        delta=delta,
        density=density,
        floor=floor,
        floor_met=floor_met,
        gamma1=gamma1,
        gamma2=gamma2,
        uniformity_r1=alpha1,
        uniformity_r2=alpha2,
        target_r1=math.sqrt(float(law(gamma1))),
        target_r2=math.sqrt(float(law(gamma2))),
        bad_mass=len(run.bad),
    )


def saturation_bound_check(A: GridSet, box: Optional[Box] = None) -> SaturationReport:
    """
    ‖f_A‖⁴ ≤ 4|E₁|²|E₂|²δ²(1−δ)，f_A 为盒形平衡函数

    Raises:
        SupportViolationError: A 不在盒子内
    """
    box = box if box is not None else Box.full(A.modulus)
    f = balanced_box_function(A, box)
    lhs = box_fourth_power_dual(f.values)
    n1, n2 = box.shape
    delta = Fraction(len(A), n1 * n2)
    rhs = float(4 * n1 * n1 * n2 * n2 * delta * delta * (1 - delta))
    holds = lhs <= rhs * (1 + tolerances.slack) + tolerances.roundtrip
    return SaturationReport(lhs=lhs, rhs=rhs, holds=holds)
