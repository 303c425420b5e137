import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rank2polygons.exactreal import field_new
from rank2polygons.functionals import DeltaVector

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

M_VALUES = [3, 4, 5, 6, 7, 8, 10, 12]

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
nonneg_fractions = st.fractions(min_value=0, max_value=20, max_denominator=12)


@st.composite
def field_elements(draw, m):
    ctx = field_new(m)
    return ctx.from_coeffs([draw(small_fractions) for _ in range(ctx.degree)])


@st.composite
def delta_vectors(draw, m, regular=False):
    lo = Fraction(1, 12) if regular else 0
    a = draw(st.fractions(min_value=lo, max_value=20, max_denominator=12))
    b = draw(st.fractions(min_value=lo, max_value=20, max_denominator=12))
    return DeltaVector.of(m, a, b)


@st.composite
def plane_vectors(draw, m):
    ctx = field_new(m)
    return (draw(field_elements(m)), draw(field_elements(m)))


@pytest.fixture
def golden_dir():
    from pathlib import Path
    return Path(__file__).parent / "golden"


# one PASS/FAIL line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
