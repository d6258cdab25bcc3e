"""报告序列化 - 确定性 JSON 输出"""

import json
from fractions import Fraction
from typing import Any

import numpy as np
from pydantic import BaseModel

from .grid import GridSet

SCHEMA_VERSION = 1


def to_jsonable(obj: Any) -> Any:
    """json.dumps 的 default 钩子"""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, GridSet):
        return {"N": obj.modulus, "size": len(obj), "points": obj.points()}
    if isinstance(obj, BaseModel):
        return obj.model_dump(mode="python")
    raise TypeError(f"无法序列化类型 {type(obj).__name__}")


def dump_report(report: Any, kind: str) -> str:
    """
    生成单行 JSON 报告

    Args:
        report: pydantic 模型或普通字典
        kind: 报告类型名

    Returns:
        str: 键排序后的 JSON 文本
    """
    payload = report.model_dump(mode="python") if isinstance(report, BaseModel) else dict(report)
    payload = {"schema_version": SCHEMA_VERSION, "report": kind, **payload}
    return json.dumps(payload, default=to_jsonable, sort_keys=True, ensure_ascii=False)
