"""分析API - 请求体与命令行参数一一对应，响应为同一份 JSON 报告"""

import logging
from typing import List, Optional, Union

from fastapi import APIRouter
from fastapi.responses import Response
from pydantic import BaseModel, Field

from ..core.config import settings
from ..core.profiles import get_profile
from ..exceptions import InvalidInputError
from ..models import CornerMode, GridSet, LineSet, Normalization, dump_report
from ..services.corners import TRANSLATION_RULE, behrend_construct, count_corners, embed_corner_free
from ..services.driver import corner_hunt
from ..services.graphview import gram_spectrum, spectrum_payload
from ..services.increment import find_density_increment
from ..services.partition import ap_partition, check_ap_partition
from ..services.set_io import parse_set_text
from ..services.uniformity import set_uniformity, uniformity_payload

logger = logging.getLogger(__name__)

router = APIRouter()


class SetPayload(BaseModel):
    """集合字面量：每个点为 [k, m]（二维）或 [k]（一维）"""
    N: int = Field(..., ge=1, description="模数")
    points: List[List[int]] = Field(default_factory=list)
    one_based: bool = Field(default=False, description="坐标是否为 {1..N}")

    class Config:
        json_schema_extra = {"example": {"N": 4, "points": [[0, 0], [1, 0], [0, 1]]}}

    def load(self) -> Union[GridSet, LineSet]:
        lines = [f"N {self.N}"] + [" ".join(str(c) for c in point) for point in self.points]
        return parse_set_text("\n".join(lines), one_based=self.one_based)

    def load_grid(self) -> GridSet:
        obj = self.load()
        if not isinstance(obj, GridSet):
            raise InvalidInputError("此处需要二维集合")
        return obj


class CornerCountRequest(BaseModel):
    set: SetPayload
    mode: CornerMode = CornerMode.GRID


class BehrendRequest(BaseModel):
    k: int = Field(..., ge=1)
    n_grid: Optional[int] = None
    rule: str = TRANSLATION_RULE


class UniformityRequest(BaseModel):
    set: SetPayload
    normalization: Optional[Normalization] = None


class SpectrumRequest(BaseModel):
    set: SetPayload


class IncrementRequest(BaseModel):
    set: SetPayload
    alpha: float = Field(..., gt=0, lt=1)
    profile: str = settings.cornerlab_profile


class ApPartitionRequest(BaseModel):
    N: int
    r1: int
    r2: int
    s: int
    seed: int = settings.cornerlab_seed


class HuntRequest(BaseModel):
    set: SetPayload
    profile: str = settings.cornerlab_profile
    max_steps: int = settings.cornerlab_max_steps


def _json(payload, kind: str) -> Response:
    return Response(content=dump_report(payload, kind), media_type="application/json")


@router.post("/corners/count")
def corners_count(request: CornerCountRequest):
    """统计角并返回字典序最小的见证"""
    return _json(count_corners(request.set.load_grid(), request.mode), "corners-count")


@router.post("/corners/behrend")
def corners_behrend(request: BehrendRequest):
    """Behrend 型无三项等差集合，可选嵌入并验证无角"""
    result = behrend_construct(request.k)
    payload = result.model_dump(mode="python")
    if request.n_grid is not None:
        if request.n_grid != 3 * request.k:
            raise InvalidInputError(f"n_grid 必须等于 3K = {3 * request.k}: {request.n_grid}")
        embedded = embed_corner_free(result.members, request.n_grid, request.rule)
        payload["embedding"] = {
            "N": request.n_grid,
            "rule": request.rule,
            "size": len(embedded),
            "density": float(embedded.density),
            "corners": count_corners(embedded).count,
        }
    return _json(payload, "behrend")


@router.post("/uniformity")
def uniformity(request: UniformityRequest):
    """α-一致性泛函；一维集合用 line 归一化"""
    _, report = set_uniformity(request.set.load(), request.normalization)
    return _json(uniformity_payload(report), "uniformity")


@router.post("/spectrum")
def spectrum(request: SpectrumRequest):
    """T = MM′ 的特征值与迹恒等式"""
    return _json(spectrum_payload(gram_spectrum(request.set.load_grid())), "spectrum")


@router.post("/increment")
def increment(request: IncrementRequest):
    """全网格上的密度增量搜索"""
    result = find_density_increment(request.set.load_grid(), None, request.alpha, get_profile(request.profile))
    return _json(result, "increment")


@router.post("/partition/ap")
def partition_ap(request: ApPartitionRequest):
    """等差数列划分及其结论核对"""
    result = ap_partition(request.N, request.r1, request.r2, request.s, seed=request.seed)
    payload = result.model_dump(mode="python")
    payload["problems"] = check_ap_partition(result)
    return _json(payload, "partition-ap")


@router.post("/hunt")
def hunt(request: HuntRequest):
    """密度增量驱动的角搜索"""
    result = corner_hunt(request.set.load_grid(), get_profile(request.profile), max_steps=request.max_steps)
    logger.info(f"API 角搜索: {result.outcome.value}")
    return _json(result, "hunt")
