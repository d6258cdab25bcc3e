"""集合字面量文件的读写"""

import logging
from pathlib import Path
from typing import List, Tuple, Union

from ..exceptions import SetFileError
from ..models import GridSet, LineSet

logger = logging.getLogger(__name__)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_set_text(text: str, one_based: bool = False) -> Union[GridSet, LineSet]:
    """
    解析集合文件文本

    第一个有效行为 "N <modulus>"，之后每行 "k m"（二维）或 "k"（一维），
    '#' 之后为注释。

    Args:
        text: 文件内容
        one_based: 坐标是否为 1 起始（{1..N}）

    Returns:
        GridSet 或 LineSet

    Raises:
        SetFileError: 格式错误，带行号
    """
    modulus = None
    arity = None
    points: List[Tuple[int, ...]] = []
    shift = 1 if one_based else 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        if modulus is None:
            if len(tokens) != 2 or tokens[0] != "N":
                raise SetFileError("首行必须为 'N <modulus>'", line=lineno)
            try:
                modulus = int(tokens[1])
            except ValueError:
                raise SetFileError(f"模数不是整数: {tokens[1]!r}", line=lineno)
            if modulus < 1:
                raise SetFileError(f"模数必须为正整数: {modulus}", line=lineno)
            continue
        if len(tokens) not in (1, 2):
            raise SetFileError(f"每行应有 1 或 2 个坐标，得到 {len(tokens)} 个", line=lineno)
        if arity is None:
            arity = len(tokens)
        elif arity != len(tokens):
            raise SetFileError("同一文件中混用了一维与二维坐标", line=lineno)
        try:
            coords = tuple(int(tok) - shift for tok in tokens)
        except ValueError:
            raise SetFileError(f"坐标不是整数: {line!r}", line=lineno)
        for c in coords:
            if not (0 <= c < modulus):
                raise SetFileError(f"坐标 {c + shift} 超出范围", line=lineno)
        points.append(coords)

    if modulus is None:
        raise SetFileError("文件缺少 'N <modulus>' 行", line=1)
    if arity == 1:
        return LineSet(modulus=modulus, members=[p[0] for p in points])
    return GridSet.from_points(modulus, points)


def read_set_file(path: Union[str, Path], one_based: bool = False) -> Union[GridSet, LineSet]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SetFileError(f"无法读取集合文件 {path}: {e}")
    logger.debug(f"读取集合文件: {path}")
    return parse_set_text(text, one_based=one_based)


def format_set(obj: Union[GridSet, LineSet], one_based: bool = False) -> str:
    """parse_set_text 的逆操作"""
    shift = 1 if one_based else 0
    lines = [f"N {obj.modulus}"]
    if isinstance(obj, GridSet):
        lines.extend(f"{k + shift} {m + shift}" for k, m in obj.points())
    else:
        lines.extend(str(x + shift) for x in obj.members)
    return "\n".join(lines) + "\n"


def write_set_file(path: Union[str, Path], obj: Union[GridSet, LineSet], one_based: bool = False) -> None:
    Path(path).write_text(format_set(obj, one_based=one_based), encoding="utf-8")
