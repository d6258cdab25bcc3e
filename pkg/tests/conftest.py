"""共用夹具"""

import numpy as np
import pytest

from cornerlab.core.config import tolerances
from cornerlab.models import GridSet, LineSet


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def restore_tolerances():
    """命令行 --tol 会原地修改全局容差，测试结束后复原"""
    saved = tolerances.model_dump()
    yield
    tolerances.apply_overrides(saved)


@pytest.fixture
def corner_set():
    # 0 起始坐标下唯一的角 (1,1), (2,1), (1,2)
    return GridSet.from_points(3, [(1, 1), (2, 1), (1, 2)])


@pytest.fixture
def behrend_pair():
    return LineSet(modulus=2, members=[0, 1])
