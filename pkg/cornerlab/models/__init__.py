"""数据模型包"""

from .driver import Branch, CornerHuntResult, HuntOutcome, IterationRecord, RunConfig
from .grid import Box, ComplexField, GridSet, LineSet, MarginalProfile
from .partition import (
    ApPartition,
    EnergyDecomposition,
    EnergyRunResult,
    EnergyState,
    Progression,
    RectangleLocation,
    RefinementReport,
    RightSquare,
    SaturationReport,
    SquareFamily,
)
from .reports import (
    BehrendResult,
    BoxNormValue,
    CheckOutcome,
    CornerCount,
    CornerMode,
    CornerWitness,
    CubeBoundsReport,
    CubeCount,
    CubeMethod,
    DensitySplit,
    DiscrepancyReport,
    IncrementKind,
    IncrementResult,
    LevelSetPartition,
    MarginalCheck,
    Normalization,
    SpectralCheckReport,
    SpectralReport,
    Spectrum,
    TrilinearReport,
    UniformityReport,
    VerifyLine,
)
from .serialization import SCHEMA_VERSION, dump_report, to_jsonable

__all__ = [
    "ApPartition",
    "BehrendResult",
    "Box",
    "BoxNormValue",
    "Branch",
    "CheckOutcome",
    "ComplexField",
    "CornerCount",
    "CornerHuntResult",
    "CornerMode",
    "CornerWitness",
    "CubeBoundsReport",
    "CubeCount",
    "CubeMethod",
    "DensitySplit",
    "DiscrepancyReport",
    "EnergyDecomposition",
    "EnergyRunResult",
    "EnergyState",
    "GridSet",
    "HuntOutcome",
    "IncrementKind",
    "IncrementResult",
    "IterationRecord",
    "LevelSetPartition",
    "LineSet",
    "MarginalCheck",
    "MarginalProfile",
    "Normalization",
    "Progression",
    "RectangleLocation",
    "RefinementReport",
    "RightSquare",
    "RunConfig",
    "SaturationReport",
    "SCHEMA_VERSION",
    "SpectralCheckReport",
    "SpectralReport",
    "Spectrum",
    "SquareFamily",
    "TrilinearReport",
    "UniformityReport",
    "VerifyLine",
    "dump_report",
    "to_jsonable",
]
