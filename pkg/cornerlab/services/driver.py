"""密度增量驱动器：边缘检查 → 一致时直接找角 → 谱增量 → 正则化"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from ..core.config import settings
from ..core.profiles import TOY_PROFILE, ConstantsProfile
from ..exceptions import InvalidInputError
from ..models import (
    Box,
    Branch,
    CornerHuntResult,
    CornerMode,
    CornerWitness,
    GridSet,
    HuntOutcome,
    IncrementKind,
    IterationRecord,
    LineSet,
)
from .corners import count_corners, verify_witness
from .energy import uniform_rectangle_locate
from .increment import find_density_increment
from .uniformity import box_alpha
from .zn_core import marginal_profile, marginal_uniformity_check

logger = logging.getLogger(__name__)

# 正则化步骤中能量增量的轮数上限
REGULARIZE_ITERS = 4


def box_density(A: GridSet, box: Box) -> Fraction:
    """A 在盒子上的密度，回放轨迹时使用"""
    chi = A.indicator()
    return Fraction(int(chi[box.indicator()].sum()), box.area)


class _Hunt:
    """一次搜索的可变状态"""

    def __init__(self, A: GridSet, profile: ConstantsProfile):
        self.A = A
        self.profile = profile
        self.n = A.modulus
        self.box = Box.full(self.n)
        self.trace: List[IterationRecord] = []

    @property
    def restricted(self) -> GridSet:
        return GridSet(self.n, self.A.indicator() & self.box.indicator())

    def record(self, step: int, branch: Branch, box: Box) -> Fraction:
        previous = self.box
        density = box_density(self.A, box)
        self.trace.append(
            IterationRecord(
                step=step,
                branch=branch,
                e1=box.e1,
                e2=box.e2,
                box_sizes=[len(box.e1), len(box.e2)],
                beta1=Fraction(len(box.e1), self.n),
                beta2=Fraction(len(box.e2), self.n),
                gamma1=Fraction(len(box.e1), len(previous.e1)),
                gamma2=Fraction(len(box.e2), len(previous.e2)),
                density=density,
                profile=self.profile.name,
            )
        )
        self.box = box
        return density

    def corner(self, restricted: GridSet) -> Optional[CornerWitness]:
        witness = count_corners(restricted, CornerMode.GRID).witness
        if witness is not None and not verify_witness(self.A, witness):
            logger.error(f"✗ 角见证 {witness} 未通过复核")
            return None
        return witness

    def regularize(self, step: int, delta: Fraction) -> None:
        """在当前盒子内找一致矩形；密度不降且边长足够时接受"""
        floor = 2 * self.profile.min_box_side
        if not self.profile.regularize or min(self.box.shape) < floor:
            return
        location = uniform_rectangle_locate(
            self.box.e1,
            self.box.e2,
            self.restricted,
            zeta=self.profile.zeta_rule(delta),
            law=self.profile.power_law,
            profile=self.profile,
            max_iters=REGULARIZE_ITERS,
        )
        if not location.found or location.density < delta:
            return
        if min(len(location.r1), len(location.r2)) < self.profile.min_box_side:
            return
        box = Box(e1=location.r1, e2=location.r2)
        if box == self.box:
            return
        self.record(step, Branch.REGULARIZE, box)


def corner_hunt(
    A: GridSet, profile: ConstantsProfile = TOY_PROFILE, max_steps: Optional[int] = None
) -> CornerHuntResult:
    """
    在 A 中寻找角，否则沿密度增量缩小盒子

    每一步依次：行/列偏差不满足时走边缘增量；盒一致 (α ≤ α(δ)) 时穷举找角并用 A
    复核见证；否则 (或一致但无角) 走谱增量；增量后按配置做一次正则化。
    盒子边长低于 min_box_side 或找不到增量时结束。

    Args:
        A: 非空集合
        profile: 常数配置，必须可运行
        max_steps: 步数上限，默认取 settings.cornerlab_max_steps

    Returns:
        CornerHuntResult: 结果与每一步的记录

    Raises:
        InvalidInputError: A 为空或配置不可运行
    """
    if not len(A):
        raise InvalidInputError("角搜索需要非空集合")
    if not profile.runnable:
        raise InvalidInputError(f"常数配置 '{profile.name}' 仅用于检查，不能运行搜索")
    max_steps = settings.cornerlab_max_steps if max_steps is None else max_steps
    if max_steps < 1:
        raise InvalidInputError(f"max_steps 必须至少为 1: {max_steps}")

    hunt = _Hunt(A, profile)
    for step in range(1, max_steps + 1):
        if min(hunt.box.shape) < profile.min_box_side:
            return _finish(hunt, HuntOutcome.INCREMENT_EXHAUSTED)
        restricted = hunt.restricted
        delta = box_density(A, hunt.box)
        alpha = profile.alpha_rule(delta)
        alpha1 = profile.alpha1_rule(delta)

        check = marginal_uniformity_check(marginal_profile(restricted, hunt.box), alpha1)
        branch = Branch.MARGINAL_INCREMENT
        if check.holds:
            branch = Branch.SPECTRAL_INCREMENT
            if box_alpha(restricted, hunt.box) <= alpha:
                witness = hunt.corner(restricted)
                if witness is not None:
                    hunt.record(step, Branch.UNIFORM_CORNER_FOUND, hunt.box)
                    logger.info(f"✓ 第 {step} 步找到角 {witness.points()}")
                    return _finish(hunt, HuntOutcome.CORNER, witness)

        increment = find_density_increment(restricted, hunt.box, float(alpha), profile, alpha1=alpha1)
        if increment.kind != IncrementKind.INCREMENT or increment.new_density <= delta:
            return _finish(hunt, HuntOutcome.INCREMENT_EXHAUSTED)
        new_density = hunt.record(step, branch, Box(e1=increment.g1, e2=increment.g2))
        hunt.regularize(step, new_density)

    return _finish(hunt, HuntOutcome.MAX_STEPS)


def _finish(hunt: _Hunt, outcome: HuntOutcome, witness: Optional[CornerWitness] = None) -> CornerHuntResult:
    logger.info(f"角搜索结束: {outcome.value}, {len(hunt.trace)} 条记录")
    return CornerHuntResult(outcome=outcome, witness=witness, trace=hunt.trace, profile=hunt.profile.name)


def replay_trace(A: GridSet, trace: List[IterationRecord]) -> List[Tuple[int, bool]]:
    """按记录的盒子重新计算密度，返回 (步号, 是否一致)"""
    return [
        (record.step, box_density(A, Box(e1=record.e1, e2=record.e2)) == record.density) for record in trace
    ]
