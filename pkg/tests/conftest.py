import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from essurf import fixtures  # noqa: E402
from essurf.enumeration import enumerate_admissible_rays  # noqa: E402
from essurf.qtheory import assemble  # noqa: E402

ORIENTABLE = [n for n in fixtures.names() if n != "gieseking"]
CLOSED = ["s3", "l4_1", "l5_2", "l3_1", "lens7", "lens8", "t3", "s2xs1"]
IDEAL = ["fig8", "m003", "s33"]


@lru_cache(maxsize=None)
def load(name):
    tri = fixtures.load(name)
    return tri if not tri.is_orientable or tri.is_oriented else tri.oriented()


@lru_cache(maxsize=None)
def rays(name, mode):
    return enumerate_admissible_rays(assemble(load(name), mode))


@pytest.fixture(scope="session")
def fig8():
    return load("fig8")


@pytest.fixture(scope="session")
def s33():
    return load("s33")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.summary_line(n))
