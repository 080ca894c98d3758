from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from polycert.poly import Polynomial

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_acceptance_lines = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, text, ok):
        _acceptance_lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        print(_acceptance_lines[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def rationals(max_num=20, max_den=6, nonneg=False):
    num = st.integers(0 if nonneg else -max_num, max_num)
    return st.builds(Fraction, num, st.integers(1, max_den))


@st.composite
def polynomials(draw, nvars=2, max_terms=5, max_exp=3, nonneg=False, laurent=False,
                coefs=None, positive_constant=False):
    lo = -max_exp if laurent else 0
    exps = st.tuples(*[st.integers(lo, max_exp)] * nvars)
    coefs = coefs if coefs is not None else rationals(nonneg=nonneg)
    terms = draw(st.dictionaries(exps, coefs, max_size=max_terms))
    p = Polynomial(terms, nvars)
    if positive_constant and p.constant_term <= 0:
        p = p - p.constant_term + draw(st.integers(1, 5))
    return p
