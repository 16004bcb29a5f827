import os
import sys

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from diffauto.algebra import DiffPolynomial, DiffVar, make_monomial, monomial_degree
from fractions import Fraction

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def _report(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


# -- hypothesis strategies ----------------------------------------------------


def generators(m: int, n: int = 2, max_order: int = 2):
    return st.builds(DiffVar, st.integers(0, n - 1), st.tuples(*[st.integers(0, max_order)] * m))


def monomials(m: int, n: int = 2, max_deg: int = 6):
    return (
        st.lists(st.tuples(generators(m, n), st.integers(1, 2)), max_size=3)
        .map(make_monomial)
        .filter(lambda mono: monomial_degree(mono) <= max_deg)
    )


coefficients = st.builds(Fraction, st.integers(-4, 4).filter(bool), st.sampled_from([1, 1, 2, 3]))


def polys(m: int, n: int = 2, max_terms: int = 4, max_deg: int = 6):
    return st.dictionaries(monomials(m, n, max_deg), coefficients, max_size=max_terms).map(
        lambda terms: DiffPolynomial(n, m, terms)
    )
