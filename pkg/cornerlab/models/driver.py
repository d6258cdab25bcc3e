"""密度增量驱动器的记录与运行配置"""

from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .grid import LineSet
from .reports import CornerWitness


class Branch(str, Enum):
    """每一步走的分支"""
    MARGINAL_INCREMENT = "marginal-increment"
    UNIFORM_CORNER_FOUND = "uniform-corner-found"
    SPECTRAL_INCREMENT = "spectral-increment"
    REGULARIZE = "regularize"


class HuntOutcome(str, Enum):
    CORNER = "corner"
    INCREMENT_EXHAUSTED = "increment-exhausted"
    MAX_STEPS = "max-steps"


class IterationRecord(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    step: int
    branch: Branch
    e1: LineSet
    e2: LineSet
    box_sizes: List[int]
    beta1: Fraction
    beta2: Fraction
    gamma1: Optional[Fraction] = None
    gamma2: Optional[Fraction] = None
    density: Fraction
    profile: str


class CornerHuntResult(BaseModel):
    outcome: HuntOutcome
    witness: Optional[CornerWitness] = None
    trace: List[IterationRecord]
    profile: str


class RunConfig(BaseModel):
    """一次命令行运行的完整配置"""
    subcommand: str
    action: Optional[str] = None
    inputs: List[str] = []
    profile: str = "toy"
    seed: int = Field(default=1, ge=0, lt=2**64)
    output_format: str = Field(default="json", pattern="^(json|csv)$")
    tolerance_overrides: Dict[str, float] = {}
    options: Dict[str, object] = {}
