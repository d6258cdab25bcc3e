"""健康检查和基础状态API"""

from fastapi import APIRouter

from ..core.concurrency import worker_count
from ..core.config import settings
from ..core.profiles import PROFILES

router = APIRouter()


@router.get("/health")
async def health_check():
    """健康检查接口"""
    return {"message": "OK"}


@router.get("/status")
async def get_basic_status():
    """获取基础系统状态"""
    return {
        "app_name": settings.app_name,
        "version": settings.app_version,
        "description": settings.description,
        "profiles": sorted(PROFILES),
        "threads": worker_count(),
        "status": "running",
    }
