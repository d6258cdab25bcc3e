"""异常定义包"""

from .errors import (
    CornerLabError,
    InvalidInputError,
    NoRefinementDirectionError,
    SetFileError,
    ShapeMismatchError,
    SupportViolationError,
)

__all__ = [
    "CornerLabError",
    "InvalidInputError",
    "NoRefinementDirectionError",
    "SetFileError",
    "ShapeMismatchError",
    "SupportViolationError",
]
