"""分析报告模型"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .grid import LineSet


class Spectrum(BaseModel):
    """离散傅里叶系数 f̂(r) 或 f̂(r₁, r₂)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    modulus: int
    arity: int = Field(..., ge=1, le=2)
    coefficients: np.ndarray

    @field_validator("coefficients", mode="before")
    @classmethod
    def freeze_coefficients(cls, values) -> np.ndarray:
        values = np.array(values, dtype=np.complex128)
        values.setflags(write=False)
        return values

    def csv_rows(self) -> List[Tuple]:
        """按 r[,r2],re,im 展开"""
        rows = []
        for idx in np.ndindex(self.coefficients.shape):
            c = self.coefficients[idx]
            rows.append((*idx, float(c.real), float(c.imag)))
        return rows


class Normalization(str, Enum):
    """一致性泛函的归一化方式"""
    LINE = "line"
    GRID = "grid"
    BOX = "box"


class UniformityReport(BaseModel):
    """α-一致性度量"""
    functional_value: float = Field(..., ge=0)
    normalization: Normalization
    minimal_alpha: float = Field(..., ge=0)
    denominator: float
    alternate_value: float = Field(..., description="用独立方法计算的同一泛函")
    method_agreement: bool


class BoxNormValue(BaseModel):
    """盒范数及其对偶形式"""
    value: float = Field(..., ge=0)
    fourth_power: float = Field(..., ge=0)
    dual_formula_fourth_power: float = Field(..., ge=0)


class CubeMethod(str, Enum):
    BRUTE = "brute"
    SPECTRAL = "spectral"


class CubeCount(BaseModel):
    """立方体计数（含退化立方体）"""
    count: int = Field(..., ge=0)
    method: CubeMethod
    nondegenerate: Optional[int] = Field(default=None, description="u≠0 且 r≠0 的立方体数")


class MarginalCheck(BaseModel):
    """行/列偏差条件的判定"""
    rows_balanced: bool = Field(..., description="Σ_m (δ_m−δ)² ≤ α₁²|E₂| 或对应的线性尺度")
    cols_balanced: bool
    scale: str

    @property
    def holds(self) -> bool:
        return self.rows_balanced and self.cols_balanced


class DiscrepancyReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    discrepancy: float
    bound: float
    holds: bool
    alpha: float
    intersection: int
    expected: Fraction


class CubeBoundsReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    cubes: int
    lower: Fraction
    lower_holds: bool
    upper_applicable: bool
    upper: Optional[float] = None
    upper_holds: Optional[bool] = None
    alpha: float
    row_deviation: Fraction


class CheckOutcome(BaseModel):
    """单个不等式检查：前提是否满足与结论是否成立分开记录"""
    name: str
    hypothesis_satisfied: bool
    conclusion_held: Optional[bool] = None
    margin: float = Field(default=0.0, description="右端减左端；负值表示违反")
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.hypothesis_satisfied and self.conclusion_held is False


class CornerMode(str, Enum):
    GRID = "grid"
    CYCLIC = "cyclic"


class CornerWitness(BaseModel):
    """角 (k,m), (k+d,m), (k,m+d)，d > 0"""

    model_config = ConfigDict(frozen=True)

    k: int
    m: int
    d: int = Field(..., gt=0)

    def points(self, modulus: Optional[int] = None) -> List[Tuple[int, int]]:
        pts = [(self.k, self.m), (self.k + self.d, self.m), (self.k, self.m + self.d)]
        if modulus is None:
            return pts
        return [(x % modulus, y % modulus) for x, y in pts]


class CornerCount(BaseModel):
    count: int = Field(..., ge=0)
    witness: Optional[CornerWitness] = None
    mode: CornerMode
    size: int
    density: float


class TrilinearReport(BaseModel):
    """三线性和及其三项分解"""
    total: float
    term1: float = Field(..., description="δ 主项")
    term2: float = Field(..., description="行密度偏差项")
    term3: float = Field(..., description="一致性误差项")

    @property
    def residual(self) -> float:
        return self.total - (self.term1 + self.term2 + self.term3)


class BehrendResult(BaseModel):
    """无三项等差数列集合"""
    bound: int = Field(..., description="集合位于 {1..K}")
    members: LineSet = Field(..., description="0 起始的成员，modulus = K")
    values: List[int] = Field(..., description="{1..K} 中的原始取值")
    dimension: int
    digit_bound: int = Field(..., description="每位数字 < d，进制 2d−1")
    radius_squared: int
    size: int
    achieved_exponent: Optional[float] = Field(default=None, description="log|A| / log K")
    target_exponent: Optional[float] = Field(default=None, description="1 − log2 / log log K")


class SpectralReport(BaseModel):
    """T = MM′ 的特征分解"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int
    delta: Fraction
    mu: List[float]
    vectors: np.ndarray = Field(..., description="第 i 列为 u_i，‖u_i‖² = n")
    perron_aligned: bool
    deviation: float = Field(..., description="‖u₁ − (1,…,1)‖²")
    trace: float
    trace_squares: float
    expected_trace: int
    expected_trace_squares: int


class SpectralCheckReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    alpha: float
    epsilon: float
    alpha1: float = Field(..., description="由行/列偏差测得的 α₁")
    measured_alpha: float
    checks: List[CheckOutcome]


class LevelSetPartition(BaseModel):
    """按取值把下标分入方格，类内分量与类中心距离不超过 ξ"""
    classes: List[List[int]]
    centers: List[Tuple[float, float]] = Field(..., description="格心 (实部, 虚部)")
    xi: float
    alpha: float
    count_bound: float
    within_count_bound: bool


class DensitySplit(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    bad: List[int]
    inequality_holds: bool
    lhs: Fraction
    rhs: Fraction


class IncrementKind(str, Enum):
    UNIFORM = "uniform"
    INCREMENT = "increment"


class IncrementResult(BaseModel):
    """密度增量搜索结果"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: IncrementKind
    g1: LineSet
    g2: LineSet
    delta: Fraction
    new_density: Fraction
    density_gain: Fraction
    gain_floor: Fraction
    size_floor: Fraction
    floors_met: bool
    route: str
    profile: str
    notes: List[str] = []


class VerifyLine(BaseModel):
    """验证套件中一项检查的汇总"""

    model_config = ConfigDict(populate_by_name=True)

    check: str
    module: str
    trials: int = Field(..., ge=0)
    hypothesis_satisfied: int = Field(..., ge=0, serialization_alias="hypothesisSatisfied")
    conclusion_held: int = Field(..., ge=0, serialization_alias="conclusionHeld")
    worst_margin: Optional[float] = Field(default=None, serialization_alias="worstMargin")
    failures: int = Field(default=0, ge=0)

    @property
    def passed(self) -> bool:
        return self.failures == 0
