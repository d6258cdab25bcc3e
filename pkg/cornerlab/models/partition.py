"""等差数列划分、直角正方形族与能量增量状态"""

from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .grid import GridSet, LineSet
from .reports import CheckOutcome


class Progression(BaseModel):
    """等差数列 {start, start+step, …}，不回绕"""

    model_config = ConfigDict(frozen=True)

    modulus: int
    start: int = Field(..., ge=0)
    step: int = Field(..., ge=1)
    length: int = Field(..., ge=1)

    def members(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.length, dtype=np.int64)

    def as_line_set(self) -> LineSet:
        return LineSet(modulus=self.modulus, members=self.members().tolist())


class ApPartition(BaseModel):
    """Z_N 按公共公差划分成的等差数列"""
    modulus: int
    r1: int
    r2: int
    s: int
    step: int
    progressions: List[Progression]
    count_bound: float = Field(..., description="8N^{4/3}/s^{2/3}")
    max_diameter: int
    diameter_pairs_checked: int
    exhaustive: bool

    @property
    def lengths(self) -> List[int]:
        return [p.length for p in self.progressions]


class RightSquare(BaseModel):
    """直角正方形 {a + d·i} × {b + d·j}，0 ≤ i, j < t，坐标模 N"""

    model_config = ConfigDict(frozen=True)

    modulus: int
    a: int
    b: int
    d: int = Field(..., ge=1)
    t: int = Field(..., ge=1)

    @classmethod
    def whole(cls, n: int) -> "RightSquare":
        return cls(modulus=n, a=0, b=0, d=1, t=n)

    @property
    def sort_key(self) -> Tuple[int, int, int, int]:
        return self.a, self.b, self.d, self.t

    @property
    def size(self) -> int:
        return self.t * self.t

    def first_axis(self) -> np.ndarray:
        return (self.a + self.d * np.arange(self.t, dtype=np.int64)) % self.modulus

    def second_axis(self) -> np.ndarray:
        return (self.b + self.d * np.arange(self.t, dtype=np.int64)) % self.modulus

    def local(self, chi: np.ndarray) -> np.ndarray:
        """把 N×N 数组限制到本正方形，得到 t×t 局部数组"""
        return chi[np.ix_(self.first_axis(), self.second_axis())]

    def mask(self) -> np.ndarray:
        out = np.zeros((self.modulus, self.modulus), dtype=bool)
        out[np.ix_(self.first_axis(), self.second_axis())] = True
        return out


class SquareFamily(BaseModel):
    """互不相交的直角正方形族及例外集 Ω"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    modulus: int
    squares: List[RightSquare]
    omega: GridSet
    parent: Optional[RightSquare] = None
    omega_accounting_bound: int = Field(default=0, description="2M²⌈t/M⌉ 形式的构造上界")


class RefinementReport(BaseModel):
    """由一个大傅里叶系数得到的直角正方形细分"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: SquareFamily
    frequency: Tuple[int, int]
    alpha: float
    s: int
    progression_count: int
    mean_square_deviation: Fraction
    deviation_target: float = Field(..., description="α²/16")
    threshold_met: bool = Field(..., description="t ≥ 2^100/α^10")
    deviation_holds: Optional[bool] = None
    omega_small: bool = Field(..., description="|Ω| < t^{11/6}，仅报告")


class EnergyDecomposition(BaseModel):
    """‖E₂‖² = ‖E₁‖² + ‖E₂−E₁‖² + 2(E₁, E₂−E₁)"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    coarse: Fraction
    fine: Fraction
    difference: Fraction
    cross: Fraction
    holds: bool


class EnergyState(BaseModel):
    """一次迭代后的族与能量"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    iteration: int
    squares: List[RightSquare]
    energy: Fraction
    per_cell_density: List[Fraction]
    cover_mass: int = Field(..., description="Σ |W ∩ C_j|")
    bad_mass: int = Field(..., description="|W ∩ B|")
    uniform_cells: int = 0
    refined_cells: int = 0
    stalled_cells: int = 0
    nonuniform_mass: int = 0
    nonuniform_cells: int = 0
    criterion_hits: int = Field(default=0, description="最大非零系数达到 α^{1/2}t² 的不一致格数")
    decomposition: Optional[EnergyDecomposition] = None
    holder: Optional[CheckOutcome] = None


class EnergyRunResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    outcome: str = Field(..., description="uniform / converged / stalled / max-iters")
    squares: List[RightSquare]
    bad: GridSet
    trace: List[EnergyState]
    epsilon: Fraction
    profile: str


class RectangleLocation(BaseModel):
    """在直角正方形 P 内找到的一致矩形 R₁×R₂"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    found: bool
    square: Optional[RightSquare] = None
    r1: Optional[LineSet] = None
    r2: Optional[LineSet] = None
    delta: Fraction
    density: Optional[Fraction] = None
    floor: Fraction
    floor_met: bool = False
    gamma1: Optional[Fraction] = None
    gamma2: Optional[Fraction] = None
    uniformity_r1: Optional[float] = None
    uniformity_r2: Optional[float] = None
    target_r1: Optional[float] = None
    target_r2: Optional[float] = None
    bad_mass: int = 0


class SaturationReport(BaseModel):
    lhs: float
    rhs: float
    holds: bool
