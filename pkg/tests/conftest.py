import numpy as np
import pytest
from hypothesis import strategies as st

from weakvalues.hilbert import MeasuredObservable, SystemState

ACCEPTANCE = []


@pytest.fixture
def projector():
    return MeasuredObservable.projector()


@pytest.fixture
def plus():
    return SystemState.normalized([1, 1])


@pytest.fixture
def f_wv():
    """Post-selection used throughout with psi = |+>: weak value -1/sqrt(2)."""
    return SystemState([np.cos(-np.pi / 8), np.sin(-np.pi / 8)])


@st.composite
def states(draw, dim=2):
    parts = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2 * dim,
                          max_size=2 * dim))
    z = np.array(parts[:dim]) + 1j * np.array(parts[dim:])
    if np.linalg.norm(z) < 1e-3:
        z = np.eye(dim)[0]
    return SystemState.normalized(z)


def record(criterion, passed, detail):
    ACCEPTANCE.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {criterion}: {detail}")
