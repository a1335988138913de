from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylvkac.exact import (
    UniPolynomial,
    as_fraction,
    binom,
    charpoly_tridiagonal,
    poly_eval,
    scalar_normalize,
    solve_exact,
)
from sylvkac.matrices import ModelParams, build_generator, build_krawtchouk, build_sylvester_kac, transpose

from conftest import dense_det, tridiagonals


def pascal(rows):
    tri = [[1]]
    for n in range(1, rows + 1):
        prev = tri[-1]
        tri.append([1] + [prev[k - 1] + prev[k] for k in range(1, n)] + [1])
    return tri


def test_binom_small():
    assert binom(5, 2) == 10
    assert binom(4, -1) == 0
    assert binom(4, 5) == 0


def test_binom_against_pascal():
    tri = pascal(30)
    assert tri[30][15] == 155117520
    assert binom(30, 15) == 155117520
    for n in range(31):
        for k in range(n + 1):
            assert binom(n, k) == tri[n][k]


def test_binom_symmetry_and_row_sums():
    for n in range(31):
        assert sum(binom(n, k) for k in range(n + 1)) == 2**n
        assert all(binom(n, k) == binom(n, n - k) for k in range(n + 1))


def test_binom_rejects_negative_n():
    with pytest.raises(ValueError):
        binom(-1, 0)


@pytest.mark.parametrize(
    "num,den,expected",
    [(2, -4, Fraction(-1, 2)), (0, 5, Fraction(0, 1)), (6, 3, Fraction(2, 1))],
)
def test_scalar_normalize(num, den, expected):
    x = scalar_normalize(num, den)
    assert x == expected
    assert x.denominator > 0
    assert (x.numerator, x.denominator) == (expected.numerator, expected.denominator)


def test_scalar_normalize_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        scalar_normalize(1, 0)


def test_as_fraction_parses_exactly():
    assert as_fraction("7/3") == Fraction(7, 3)
    assert as_fraction("0.25") == Fraction(1, 4)
    assert as_fraction("0.1") == Fraction(1, 10)
    assert as_fraction("1e-3") == Fraction(1, 1000)
    with pytest.raises(TypeError):
        as_fraction(0.1)
    with pytest.raises(ValueError):
        as_fraction("abc")


def test_poly_eval():
    P = UniPolynomial((0, 2, 1))
    assert poly_eval(P, -2) == 0
    assert poly_eval(P, 0) == 0
    assert poly_eval(P, 1) == 3


def test_zero_polynomial():
    Z = UniPolynomial((0, 0))
    assert Z.coeffs == ()
    assert Z.degree == -1
    assert poly_eval(Z, 5) == 0


def test_charpoly_examples():
    assert charpoly_tridiagonal(build_generator(ModelParams(1, 1, 1))) == UniPolynomial((0, 2, 1))
    assert charpoly_tridiagonal(build_sylvester_kac(1)) == UniPolynomial((-1, 0, 1))
    assert charpoly_tridiagonal(build_krawtchouk(Fraction(1, 2), 1)) == UniPolynomial((0, 1, 1))


@settings(max_examples=60, deadline=None)
@given(T=tridiagonals(), x=st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_charpoly_matches_dense_determinant(T, x):
    cp = charpoly_tridiagonal(T)
    assert cp.is_monic() and cp.degree == T.order
    A = [[(x if i == j else 0) - v for j, v in enumerate(row)] for i, row in enumerate(T.to_dense())]
    assert poly_eval(cp, x) == dense_det(A)


@settings(max_examples=60, deadline=None)
@given(T=tridiagonals())
def test_charpoly_transpose_invariant(T):
    assert charpoly_tridiagonal(T) == charpoly_tridiagonal(transpose(T))


def test_from_roots():
    assert UniPolynomial.from_roots([1, -1]) == UniPolynomial((-1, 0, 1))


def test_solve_exact():
    A = [[2, 1], [1, 3]]
    assert solve_exact(A, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(ValueError):
        solve_exact([[1, 2], [2, 4]], [1, 1])
