import numpy as np
import pytest

from fgqc.geometry import GeometrySpec
from fgqc.keys import keygen

# (kind, m, q, n0, l): small EG* codes whose classes include invertible blocks
SMALL_KEY_PARAMS = [
    ("eg", 3, 3, 3, 6),
    ("eg", 4, 3, 4, 8),
    ("eg", 3, 5, 3, 12),
    ("eg", 4, 3, 6, 16),
]


@pytest.fixture(scope="session")
def key4368():
    """The C(4368,3640) code, EG*(6,3) with six blocks and l = 26."""
    return keygen(GeometrySpec("eg", 6, 3), 6, 26, entropy=20240601)


@pytest.fixture(scope="session")
def other_key4368():
    return keygen(GeometrySpec("eg", 6, 3), 6, 26, entropy=777)


@pytest.fixture(scope="session")
def small_keys():
    return [keygen(GeometrySpec(k, m, q), n0, l, entropy=i) for i, (k, m, q, n0, l) in enumerate(SMALL_KEY_PARAMS)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_RESULTS: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(number: int, ok: bool, detail: str):
        line = f"acceptance criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_RESULTS.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)
