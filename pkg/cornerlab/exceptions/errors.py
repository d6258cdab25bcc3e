"""领域异常"""

from typing import Optional, Tuple


class CornerLabError(Exception):
    """所有输入/前置条件错误的基类"""

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidInputError(CornerLabError):
    """参数或前置条件不满足"""


class SetFileError(InvalidInputError):
    """集合文件格式错误"""

    def __init__(self, detail: str, line: Optional[int] = None):
        prefix = f"第 {line} 行: " if line is not None else ""
        super().__init__(f"{prefix}{detail}")
        self.line = line


class SupportViolationError(InvalidInputError):
    """点不在要求的盒子内"""

    def __init__(self, point: Tuple[int, ...], where: str = "盒子 E1×E2"):
        super().__init__(f"点 {tuple(point)} 不在{where}内")
        self.point = tuple(point)


class ShapeMismatchError(InvalidInputError):
    """维数或模数不一致"""


class NoRefinementDirectionError(InvalidInputError):
    """没有可用于细分的非零频率"""
