"""常数配置 - 证明中的常数链与可运行的小规模替代"""

import logging
import math
from fractions import Fraction
from typing import Dict, Union

from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import InvalidInputError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


class PowerRule(BaseModel):
    """形如 coef·x^exponent 的闭式规则，精确有理数求值"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    coef: Fraction
    exponent: int = Field(ge=0)

    def __call__(self, x: Number) -> Fraction:
        return self.coef * Fraction(x) ** self.exponent

    def log10(self, x: Number) -> float:
        """以对数形式求值，用于巨型常数的报告"""
        x = Fraction(x)
        if x <= 0:
            return float("-inf")
        return _log10(self.coef) + self.exponent * _log10(x)

    def describe(self) -> str:
        return f"{self.name} = {self.coef}·x^{self.exponent}"


def _log10(value: Fraction) -> float:
    return math.log10(value.numerator) - math.log10(value.denominator)


class PowerLaw(BaseModel):
    """一致性目标 α(s) = K·s^ρ"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: Fraction = Field(description="系数，取值 (0, 1]")
    rho: int = Field(ge=4, description="指数，至少为 4")

    def model_post_init(self, __context) -> None:
        if not (0 < self.K <= 1):
            raise InvalidInputError(f"幂律系数 K 必须在 (0, 1] 内: {self.K}")

    def __call__(self, s: Number) -> Fraction:
        return self.K * Fraction(s) ** self.rho


class ConstantsProfile(BaseModel):
    """
    常数配置

    驱动器规则 (alpha/alpha1/zeta) 是 δ 的闭式；增量规则 (increment_alpha1、
    gain_floor、size_floor、class_floor) 是 α 的闭式。
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    runnable: bool = Field(description="常数在桌面规模下是否有意义")
    alpha_rule: PowerRule
    alpha1_rule: PowerRule
    zeta_rule: PowerRule
    increment_alpha1: PowerRule
    gain_floor: PowerRule
    size_floor: PowerRule = Field(description="乘以 n 后为集合大小下界")
    class_floor: PowerRule = Field(description="乘以 n 后为水平集坏类阈值")
    n_threshold_bits: int = Field(default=0, ge=0, description="N 下界 2^bits/α^power 中的 bits")
    n_threshold_alpha_power: int = Field(default=0, ge=0)
    min_cell_side: int = Field(default=4, ge=1)
    max_cells_per_refinement: int = Field(default=64, ge=1)
    min_box_side: int = Field(default=2, ge=1)
    power_law: PowerLaw
    regularize: bool = True

    def n_threshold_log2(self, alpha: float) -> float:
        """N 下界的 log2；α 不为正时返回无穷大"""
        if alpha <= 0:
            return float("inf")
        return self.n_threshold_bits + self.n_threshold_alpha_power * math.log2(1 / alpha)

    def n_threshold_met(self, n: int, alpha: float) -> bool:
        return math.log2(max(n, 1)) >= self.n_threshold_log2(alpha)

    def summary(self) -> Dict[str, str]:
        return {
            "profile": self.name,
            "alpha": self.alpha_rule.describe(),
            "alpha1": self.alpha1_rule.describe(),
            "zeta": self.zeta_rule.describe(),
            "gainFloor": self.gain_floor.describe(),
            "sizeFloor": self.size_floor.describe(),
        }


TOY_PROFILE = ConstantsProfile(
    name="toy",
    runnable=True,
    alpha_rule=PowerRule(name="alpha", coef=Fraction(1, 8), exponent=2),
    alpha1_rule=PowerRule(name="alpha1", coef=Fraction(1, 2), exponent=1),
    zeta_rule=PowerRule(name="zeta", coef=Fraction(1, 16), exponent=2),
    increment_alpha1=PowerRule(name="alpha1", coef=Fraction(1, 10), exponent=1),
    gain_floor=PowerRule(name="gain", coef=Fraction(1, 64), exponent=3),
    size_floor=PowerRule(name="size", coef=Fraction(1, 16), exponent=1),
    class_floor=PowerRule(name="class", coef=Fraction(1, 16), exponent=8),
    min_cell_side=4,
    max_cells_per_refinement=64,
    min_box_side=2,
    power_law=PowerLaw(K=Fraction(1, 64), rho=4),
    regularize=True,
)

# 原始证明中的常数，仅用于检查与报告
ASYMPTOTIC_PROFILE = ConstantsProfile(
    name="asymptotic",
    runnable=False,
    alpha_rule=PowerRule(name="alpha", coef=Fraction(1, 10**108), exponent=44),
    alpha1_rule=PowerRule(name="alpha1", coef=Fraction(1, 10**108), exponent=44),
    zeta_rule=PowerRule(name="zeta", coef=Fraction(1, 10**10000), exponent=3500),
    increment_alpha1=PowerRule(name="alpha1", coef=Fraction(1, 2**56), exponent=20),
    gain_floor=PowerRule(name="gain", coef=Fraction(1, 2**200), exponent=60),
    size_floor=PowerRule(name="size", coef=Fraction(1, 2**200), exponent=60),
    class_floor=PowerRule(name="class", coef=Fraction(1, 2**16), exponent=8),
    n_threshold_bits=100,
    n_threshold_alpha_power=10,
    min_cell_side=4,
    max_cells_per_refinement=64,
    min_box_side=2,
    power_law=PowerLaw(K=Fraction(1, 10**660), rho=48),
    regularize=True,
)

PROFILES: Dict[str, ConstantsProfile] = {
    TOY_PROFILE.name: TOY_PROFILE,
    ASYMPTOTIC_PROFILE.name: ASYMPTOTIC_PROFILE,
}


def get_profile(name: str) -> ConstantsProfile:
    """
    按名称获取常数配置

    Args:
        name: 配置名称 (toy / asymptotic)

    Returns:
        ConstantsProfile: 对应配置

    Raises:
        InvalidInputError: 未知配置
    """
    try:
        return PROFILES[name]
    except KeyError:
        raise InvalidInputError(f"未知的常数配置 '{name}'，可选: {', '.join(sorted(PROFILES))}")
