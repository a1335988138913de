from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sylvkac.matrices import TridiagonalMatrix

RATE_PAIRS = [(1, 1), (1, 2), (3, 5), (7, 2)]

positive_rationals = st.fractions(min_value=Fraction(1, 30), max_value=50, max_denominator=30)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def tridiagonals(draw, max_order=10):
    m = draw(st.integers(min_value=1, max_value=max_order))
    return TridiagonalMatrix(
        m,
        tuple(draw(st.lists(rationals, min_size=m, max_size=m))),
        tuple(draw(st.lists(rationals, min_size=m - 1, max_size=m - 1))),
        tuple(draw(st.lists(rationals, min_size=m - 1, max_size=m - 1))),
    )


def dense_det(A):
    """Determinant by exact Gaussian elimination on a dense copy."""
    A = [[Fraction(x) for x in row] for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            for j in range(c, n):
                A[r][j] -= f * A[c][j]
    return det


@pytest.fixture(params=RATE_PAIRS, ids=lambda p: f"a{p[0]}b{p[1]}")
def rate_pair(request):
    return request.param


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_ac" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
