"""集合文件读写"""

import pytest

from cornerlab.exceptions import SetFileError
from cornerlab.models import GridSet, LineSet
from cornerlab.services.set_io import format_set, parse_set_text, read_set_file, write_set_file


def test_parse_grid_with_comments():
    A = parse_set_text("# 三点\nN 4\n0 0  # 原点\n\n1 0\n0 1\n")
    assert isinstance(A, GridSet)
    assert A.points() == [(0, 0), (0, 1), (1, 0)]


def test_parse_line_set_one_based():
    line = parse_set_text("N 9\n1\n9\n", one_based=True)
    assert isinstance(line, LineSet)
    assert line.members == (0, 8)


def test_header_only_is_empty_grid():
    A = parse_set_text("N 5\n")
    assert isinstance(A, GridSet) and len(A) == 0 and A.modulus == 5


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("0 0\n", 1),
        ("N x\n", 1),
        ("N 3\n0 0\n0\n", 3),
        ("N 3\n0 3\n", 2),
        ("N 3\n0 a\n", 2),
        ("N 3\n0 0 0\n", 2),
    ],
)
def test_malformed_files_report_line(text, line):
    with pytest.raises(SetFileError) as exc:
        parse_set_text(text)
    assert exc.value.line == line


def test_one_based_rejects_zero():
    with pytest.raises(SetFileError):
        parse_set_text("N 3\n0 1\n", one_based=True)


def test_write_then_read(tmp_path):
    A = GridSet.from_points(6, [(5, 0), (2, 3)])
    path = tmp_path / "a.txt"
    write_set_file(path, A, one_based=True)
    assert path.read_text(encoding="utf-8").splitlines()[0] == "N 6"
    assert read_set_file(path, one_based=True) == A


def test_format_line_set():
    assert format_set(LineSet(modulus=3, members=[2, 0])) == "N 3\n0\n2\n"


def test_missing_file(tmp_path):
    with pytest.raises(SetFileError):
        read_set_file(tmp_path / "none.txt")
