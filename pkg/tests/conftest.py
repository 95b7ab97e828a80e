import numpy as np
import pytest
from hypothesis import settings, strategies as st

from herdisc.core import SetSystem

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def set_systems(draw, max_n=6, max_m=6, min_n=1):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(0, max_m))
    rows = draw(st.lists(st.sets(st.integers(1, n)), min_size=m, max_size=m))
    return SetSystem(n, [sorted(r) for r in rows])


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5, lo=-3, hi=3, square=False):
    m = draw(st.integers(1, max_rows))
    n = m if square else draw(st.integers(1, max_cols))
    flat = draw(st.lists(st.integers(lo, hi), min_size=m * n, max_size=m * n))
    return np.array(flat, dtype=np.int64).reshape(m, n)


@pytest.fixture
def tri():
    return SetSystem(3, [[1, 2], [2, 3], [1, 3]])


# one line per acceptance criterion at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, what = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'}  {what}")
