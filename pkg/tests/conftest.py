"""
测试公共夹具：文中的小网络实例、随机数生成器和 --runslow 选项
"""

import numpy as np
import pytest

from lsnkit import configure
from lsnkit.models import Lsn


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行 10⁶ tick 的长仿真")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: 长时间运行的仿真，需要 --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True, scope="session")
def testing_config():
    return configure("testing")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def triangle():
    """1→2、2→3、1→3，λ = (2, 3, 4)，没有有向环。"""
    return Lsn.from_edges([1, 2, 3], [(1, 2, 2), (2, 3, 3), (1, 3, 4)])


@pytest.fixture
def triangle_shifted(triangle):
    return triangle.with_latencies((2, 3, 3))


@pytest.fixture
def k3_a():
    """完全有向三角形，两两往返时间 (5, 4, 2)，环 1→2→3→1 的往返时间为 6。"""
    return Lsn.from_edges(
        [1, 2, 3],
        [(1, 2, 3), (2, 3, 2), (3, 1, 1), (2, 1, 2), (3, 2, 2), (1, 3, 1)],
    )


@pytest.fixture
def k3_b(k3_a):
    """与 k3_a 的两两往返时间相同，但环 1→2→3→1 的往返时间为 4。"""
    return k3_a.with_latencies((1, 2, 1, 4, 2, 1))


@pytest.fixture
def two_cycle():
    def build(forward, backward):
        return Lsn.from_edges([1, 2], [(1, 2, forward), (2, 1, backward)])

    return build
