import numpy as np
import pytest
from hypothesis import strategies as st

from trendspectra.filters import LocalPolySpec, SymmetricFilter, symmetric_filter
from trendspectra.smoother import BoundaryPolicy, build_smoother

HENDERSON13 = LocalPolySpec(6, 3)
BOUNDARY_KINDS = ("lc", "ql", "cq", "lpr")


@pytest.fixture(scope="session")
def henderson():
    return symmetric_filter(HENDERSON13)


@pytest.fixture(scope="session")
def smoothers(henderson):
    """Henderson h=6, n=51 smoothers keyed by boundary kind."""
    return {k: build_smoother(henderson, BoundaryPolicy(k, lpr=HENDERSON13), 51)
            for k in BOUNDARY_KINDS + ("reflecting",)}


def random_filter(rng, h):
    """Positive symmetric filter normalised to unit sum."""
    half = rng.uniform(size=h + 1)
    half /= half[0] + 2 * half[1:].sum()
    return SymmetricFilter.from_half(half)


@st.composite
def symmetric_filters(draw, max_h=12):
    h = draw(st.integers(0, max_h))
    half = np.array(draw(st.lists(st.floats(0.01, 1.0), min_size=h + 1, max_size=h + 1)))
    half /= half[0] + 2 * half[1:].sum()
    return SymmetricFilter.from_half(half)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
