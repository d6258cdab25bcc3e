"""应用配置管理"""

from typing import Dict

from pydantic import BaseModel, ConfigDict
from pydantic_settings import BaseSettings


class Tolerances(BaseModel):
    """数值容差 - 全局统一的一份记录"""

    model_config = ConfigDict(validate_assignment=True)

    roundtrip: float = 1e-9
    parseval: float = 1e-6
    correlation: float = 1e-8
    duality: float = 1e-8
    disk_bound: float = 1e-12
    eigen_clamp: float = 1e-8
    orthogonality: float = 1e-6
    trace: float = 1e-6
    level_set: float = 1e-9
    slack: float = 1e-6
    imaginary: float = 1e-8
    triangle: float = 1e-9
    decomposition: float = 1e-9
    unit_bound: float = 1e-12
    negative_floor: float = 1e-9
    quadratic_form: float = 1e-12
    zero_coefficient: float = 1e-9

    def apply_overrides(self, overrides: Dict[str, float]) -> "Tolerances":
        """
        原地覆盖部分字段（命令行 --tol name=value）

        Args:
            overrides: 字段名到新值的映射

        Returns:
            Tolerances: 自身

        Raises:
            ValueError: 未知的容差名称
        """
        unknown = sorted(set(overrides) - set(type(self).model_fields))
        if unknown:
            raise ValueError(f"未知的容差名称: {', '.join(unknown)}")
        for name, value in overrides.items():
            setattr(self, name, float(value))
        return self


class Settings(BaseSettings):
    """应用设置"""

    # 应用基础配置
    app_name: str = "cornerlab"
    app_version: str = "0.1.0"
    description: str = "无角集合工具箱 - 一致性范数、谱检验与密度增量算法"

    # 服务器配置
    host: str = "0.0.0.0"
    port: int = 8000

    # 日志配置
    log_level: str = "INFO"

    # 并行线程数，0 表示使用 CPU 核数，1 表示串行
    cornerlab_threads: int = 0

    # 默认常数配置与随机种子
    cornerlab_profile: str = "toy"
    cornerlab_seed: int = 1
    cornerlab_max_steps: int = 64

    class Config:
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"


# 全局设置实例
settings = Settings()

# 全局容差实例
tolerances = Tolerances()
