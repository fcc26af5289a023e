from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from coulomb_g2.algebra import BiPoly
from coulomb_g2.diffop import DiffOp

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
positive_fractions = st.builds(Fraction, st.integers(1, 20), st.integers(1, 7))


@st.composite
def bipolys(draw, max_grade=4, max_terms=4):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_grade), st.integers(0, max_grade // 2)).filter(
            lambda ab: ab[0] + 2 * ab[1] <= max_grade),
        fractions, max_size=max_terms))
    return BiPoly(terms)


@st.composite
def diffops(draw, max_order=2):
    idx = st.tuples(st.integers(0, max_order), st.integers(0, max_order)).filter(
        lambda ij: sum(ij) <= max_order)
    terms = draw(st.dictionaries(idx, bipolys(max_grade=2, max_terms=2), max_size=3))
    return DiffOp(terms)


@pytest.fixture
def r():
    return BiPoly.r()


@pytest.fixture
def u():
    return BiPoly.u()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
