import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kleinpack import apollonian  # noqa: E402

REPO = Path(__file__).resolve().parents[1]


@lru_cache(maxsize=None)
def packing(root, cutoff):
    """Shared, cached generation so the large packings are built once per session."""
    return apollonian.generate_root(root, cutoff)


@pytest.fixture(scope="session")
def bounded_small():
    return packing((-1, 2, 2, 3), 100)


@pytest.fixture(scope="session")
def bounded_large():
    return packing((-1, 2, 2, 3), 10**4)


@pytest.fixture(scope="session")
def strip_small():
    return packing((0, 0, 1, 1), 100)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
