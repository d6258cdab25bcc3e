"""Z_N 与 Z_N² 上的集合、盒子与复值函数"""

from bisect import bisect_left
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import tolerances
from ..exceptions import InvalidInputError, ShapeMismatchError, SupportViolationError


class LineSet(BaseModel):
    """Z_N 的子集，成员为 [0, N) 中的规范代表元"""

    model_config = ConfigDict(frozen=True)

    modulus: int = Field(..., ge=1, description="模数 N")
    members: Tuple[int, ...] = Field(default=(), description="升序、去重后的成员")

    @model_validator(mode="before")
    @classmethod
    def canonical_members(cls, data):
        if isinstance(data, dict) and "members" in data:
            n = data.get("modulus")
            members = sorted(set(int(x) for x in data["members"]))
            for x in members:
                if n is not None and not (0 <= x < n):
                    raise InvalidInputError(f"坐标 {x} 超出 [0, {n})")
            data = {**data, "members": tuple(members)}
        return data

    @classmethod
    def full(cls, n: int) -> "LineSet":
        return cls(modulus=n, members=range(n))

    @classmethod
    def interval(cls, n: int, start: int, length: int) -> "LineSet":
        """步长为 1 的区间 {start, ..., start+length-1}，模 N 回绕"""
        if not (0 <= length <= n):
            raise InvalidInputError(f"区间长度 {length} 超出 [0, {n}]")
        return cls(modulus=n, members=[(start + i) % n for i in range(length)])

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "LineSet":
        mask = np.asarray(mask, dtype=bool)
        return cls(modulus=int(mask.shape[0]), members=np.flatnonzero(mask).tolist())

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, (int, np.integer)):
            return False
        i = bisect_left(self.members, int(x))
        return i < len(self.members) and self.members[i] == x

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.modulus)

    def indicator(self) -> np.ndarray:
        chi = np.zeros(self.modulus, dtype=bool)
        chi[np.asarray(self.members, dtype=np.int64)] = True
        return chi

    def index(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)


class GridSet:
    """
    Z_N² 的子集 A

    |A| > N²/64 时以稠密布尔矩阵存储，否则以升序点对数组存储；
    两种存储对外接口一致，构造后不可变。
    """

    __slots__ = ("_n", "_dense", "_pairs", "_size")

    DENSE_FRACTION = 64

    def __init__(self, n: int, mask: np.ndarray):
        if n < 1:
            raise InvalidInputError(f"模数必须为正整数: {n}")
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (n, n):
            raise ShapeMismatchError(f"指示矩阵形状 {mask.shape} 与模数 {n} 不一致")
        size = int(mask.sum())
        self._n = n
        self._size = size
        if size * self.DENSE_FRACTION > n * n:
            dense = mask.copy()
            dense.setflags(write=False)
            self._dense: Optional[np.ndarray] = dense
            self._pairs: Optional[np.ndarray] = None
        else:
            pairs = np.argwhere(mask).astype(np.int64)
            pairs.setflags(write=False)
            self._dense = None
            self._pairs = pairs

    @classmethod
    def from_points(cls, n: int, points: Iterable[Tuple[int, int]]) -> "GridSet":
        """
        由点列表构造，重复点合并

        Raises:
            InvalidInputError: 点越界，报告出错坐标
        """
        if n < 1:
            raise InvalidInputError(f"模数必须为正整数: {n}")
        mask = np.zeros((n, n), dtype=bool)
        for point in points:
            k, m = (int(c) for c in point)
            if not (0 <= k < n and 0 <= m < n):
                raise InvalidInputError(f"点 ({k}, {m}) 超出 [0, {n})²")
            mask[k, m] = True
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "GridSet":
        return cls(n, np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "GridSet":
        return cls(n, np.zeros((n, n), dtype=bool))

    @property
    def modulus(self) -> int:
        return self._n

    @property
    def storage(self) -> str:
        return "dense" if self._dense is not None else "sparse"

    @property
    def density(self) -> Fraction:
        return Fraction(self._size, self._n * self._n)

    def __len__(self) -> int:
        return self._size

    def __contains__(self, point: object) -> bool:
        try:
            k, m = point  # type: ignore[misc]
        except (TypeError, ValueError):
            return False
        if not (0 <= k < self._n and 0 <= m < self._n):
            return False
        if self._dense is not None:
            return bool(self._dense[k, m])
        idx = np.searchsorted(self._pairs[:, 0] * self._n + self._pairs[:, 1], k * self._n + m)
        return bool(idx < self._size and tuple(self._pairs[idx]) == (k, m))

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.points())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridSet):
            return NotImplemented
        return self._n == other._n and np.array_equal(self.to_array(), other.to_array())

    def __hash__(self) -> int:
        return hash((self._n, self.to_array().tobytes()))

    def __repr__(self) -> str:
        return f"GridSet(N={self._n}, size={self._size}, storage={self.storage})"

    def indicator(self) -> np.ndarray:
        """布尔指示矩阵 chi[k, m]（只读）"""
        if self._dense is not None:
            return self._dense
        chi = np.zeros((self._n, self._n), dtype=bool)
        if self._size:
            chi[self._pairs[:, 0], self._pairs[:, 1]] = True
        chi.setflags(write=False)
        return chi

    def to_array(self) -> np.ndarray:
        """按字典序排列的 (k, m) 数组，形状 (|A|, 2)"""
        if self._pairs is not None:
            return self._pairs
        return np.argwhere(self._dense).astype(np.int64)

    def points(self) -> List[Tuple[int, int]]:
        return [(int(k), int(m)) for k, m in self.to_array()]

    def intersect(self, other: "GridSet") -> "GridSet":
        _same_modulus(self._n, other._n)
        return GridSet(self._n, self.indicator() & other.indicator())

    def difference(self, other: "GridSet") -> "GridSet":
        _same_modulus(self._n, other._n)
        return GridSet(self._n, self.indicator() & ~other.indicator())

    def restrict(self, box: "Box") -> "GridSet":
        _same_modulus(self._n, box.modulus)
        return GridSet(self._n, self.indicator() & box.indicator())

    def is_subset(self, other: "GridSet") -> bool:
        _same_modulus(self._n, other._n)
        return not np.any(self.indicator() & ~other.indicator())


def _same_modulus(a: int, b: int) -> None:
    if a != b:
        raise ShapeMismatchError(f"模数不一致: {a} != {b}")


class Box(BaseModel):
    """盒子 E₁×E₂，E₁ 为第一坐标 k 的取值集，E₂ 为第二坐标 m 的取值集"""

    model_config = ConfigDict(frozen=True)

    e1: LineSet
    e2: LineSet

    @model_validator(mode="after")
    def check_modulus(self):
        _same_modulus(self.e1.modulus, self.e2.modulus)
        return self

    @classmethod
    def full(cls, n: int) -> "Box":
        return cls(e1=LineSet.full(n), e2=LineSet.full(n))

    @property
    def modulus(self) -> int:
        return self.e1.modulus

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.e1), len(self.e2)

    @property
    def is_square(self) -> bool:
        return len(self.e1) == len(self.e2)

    @property
    def area(self) -> int:
        return len(self.e1) * len(self.e2)

    def indicator(self) -> np.ndarray:
        return np.outer(self.e1.indicator(), self.e2.indicator())

    def require_nonempty(self) -> None:
        if not self.e1.members or not self.e2.members:
            raise InvalidInputError("盒子 E1、E2 必须非空")

    def require_contains(self, A: GridSet) -> None:
        """检查 A ⊆ E₁×E₂，否则报告第一个越界点"""
        _same_modulus(A.modulus, self.modulus)
        outside = np.argwhere(A.indicator() & ~self.indicator())
        if outside.size:
            raise SupportViolationError((int(outside[0, 0]), int(outside[0, 1])))


class MarginalProfile(BaseModel):
    """A 相对盒子 E₁×E₂ 的整体密度、行密度与列密度（精确有理数）"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    delta: Fraction
    row_density: Dict[int, Fraction] = Field(description="m ∈ E₂ ↦ δ_m")
    col_density: Dict[int, Fraction] = Field(description="k ∈ E₁ ↦ γ_k")
    row_deviation: Fraction = Field(description="Σ_m (δ_m − δ)²")
    col_deviation: Fraction = Field(description="Σ_k (γ_k − δ)²")
    size_e1: int
    size_e2: int
    cardinality: int


class ComplexField(BaseModel):
    """Z_N 或 Z_N² 上的复值函数，values 按 [k] 或 [k, m] 索引"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    modulus: int = Field(..., ge=1)
    arity: int = Field(..., ge=1, le=2)
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def freeze_values(cls, values: np.ndarray) -> np.ndarray:
        values = np.array(values, dtype=np.complex128)
        values.setflags(write=False)
        return values

    @model_validator(mode="after")
    def check_shape(self):
        expected = (self.modulus,) * self.arity
        if self.values.shape != expected:
            raise ShapeMismatchError(f"取值数组形状 {self.values.shape} 应为 {expected}")
        return self

    @classmethod
    def of(cls, values, bounded: bool = False) -> "ComplexField":
        """
        由数组构造函数

        Args:
            values: 一维或二维方阵
            bounded: 为 True 时要求 |f| ≤ 1（D 值函数）

        Raises:
            InvalidInputError: 超出单位圆盘或形状不合法
        """
        arr = np.asarray(values, dtype=np.complex128)
        if arr.ndim not in (1, 2) or len(set(arr.shape)) != 1:
            raise ShapeMismatchError(f"仅支持 Z_N 或 Z_N² 上的函数，得到形状 {arr.shape}")
        field = cls(modulus=arr.shape[0], arity=arr.ndim, values=arr)
        if bounded:
            field.require_disk_valued()
        return field

    def require_disk_valued(self) -> None:
        worst = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        if worst > 1 + tolerances.disk_bound:
            idx = np.unravel_index(int(np.argmax(np.abs(self.values))), self.values.shape)
            raise InvalidInputError(f"函数在 {tuple(int(i) for i in idx)} 处模长 {worst} 超过 1")

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))
