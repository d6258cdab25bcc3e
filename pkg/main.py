"""
cornerlab HTTP 服务
与命令行共用同一套计算服务和报告模型
"""

import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from cornerlab.api import analysis, health
from cornerlab.core.config import settings
from cornerlab.exceptions import CornerLabError

# 设置日志
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(settings.app_name)

# 创建 FastAPI 应用
app = FastAPI(
    title=settings.app_name,
    description=settings.description,
    version=settings.app_version,
)


@app.exception_handler(CornerLabError)
async def cornerlab_error_handler(request: Request, exc: CornerLabError):
    """输入或前置条件错误统一返回 400"""
    logger.warning(f"✗ {request.url.path}: {exc.detail}")
    return JSONResponse(status_code=400, content={"detail": exc.detail})


# 注册API路由
app.include_router(health.router, prefix="/api", tags=["健康检查"])
app.include_router(analysis.router, prefix="/api", tags=["分析"])


@app.get("/")
async def root():
    """根路径"""
    return {"message": f"Welcome to {settings.app_name} - {settings.description}"}


def main():
    """主入口点函数"""
    import uvicorn
    uvicorn.run(
        app,
        host=settings.host,
        port=settings.port,
        timeout_keep_alive=5,
        log_level=settings.log_level.lower()
    )


if __name__ == "__main__":
    main()
