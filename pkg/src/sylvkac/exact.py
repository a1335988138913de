"""Exact rational arithmetic helpers, binomials and univariate polynomials.

Rationals are plain :class:`fractions.Fraction` values; they are already
kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence

ExactScalar = Fraction


def binom(n: int, k: int) -> int:
    """C(n, k), with C(n, k) = 0 whenever k < 0 or k > n."""
    if n < 0:
        raise ValueError(f"binom requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def scalar_normalize(numerator: int, denominator: int) -> Fraction:
    if denominator == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(numerator, denominator)


def as_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction without any binary rounding.

    Accepts ints, Fractions, and strings such as ``"7/3"``, ``"0.25"`` or
    ``"1e-3"``. Python floats are refused because they are rarely the
    number the caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                return scalar_normalize(int(num), int(den))
            except ValueError as exc:
                raise ValueError(f"cannot parse rational {value!r}") from exc
        try:
            dec = Decimal(text)
        except InvalidOperation as exc:
            raise ValueError(f"cannot parse rational {value!r}") from exc
        if not dec.is_finite():
            raise ValueError(f"cannot parse rational {value!r}")
        return Fraction(dec)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(x: Fraction) -> str:
    """Serialize as ``"num/den"`` (denominator always present)."""
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return as_fraction(text)


def _trim(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class UniPolynomial:
    """Polynomial with exact coefficients in ascending degree order.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[Fraction]) -> "UniPolynomial":
        """Monic polynomial prod (x - r)."""
        p = cls((Fraction(1),))
        for r in roots:
            p = p * cls((-Fraction(r), Fraction(1)))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x) -> Fraction:
        return poly_eval(self, x)

    def __add__(self, other: "UniPolynomial") -> "UniPolynomial":
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return UniPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m)
        )

    def __neg__(self) -> "UniPolynomial":
        return UniPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: "UniPolynomial") -> "UniPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "UniPolynomial":
        if not isinstance(other, UniPolynomial):
            c = as_fraction(other)
            return UniPolynomial(c * a for a in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPolynomial(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPolynomial(out)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return "UniPolynomial(" + " + ".join(terms) + ")"


def poly_eval(p: UniPolynomial, x) -> Fraction:
    """Horner evaluation, exact."""
    x = as_fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def charpoly_tridiagonal(T) -> UniPolynomial:
    """Monic det(xI - T) of a tridiagonal matrix by the three-term recurrence.

    p_i(x) = (x - d_i) p_{i-1}(x) - sub_{i-1} super_{i-1} p_{i-2}(x)
    """
    x = UniPolynomial((Fraction(0), Fraction(1)))
    prev = UniPolynomial((Fraction(1),))
    cur = x - UniPolynomial((T.diag[0],))
    for i in range(1, T.order):
        nxt = (x - UniPolynomial((T.diag[i],))) * cur - prev * (T.sub[i - 1] * T.super[i - 1])
        prev, cur = cur, nxt
    return cur


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve A x = b over the rationals by Gaussian elimination with row pivoting.

    Raises ``ValueError`` if A is singular.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve_exact needs a square system")
    M = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
        piv = M[col][col]
        row = M[col]
        for r in range(col + 1, n):
            f = M[r][col]
            if f == 0:
                continue
            f /= piv
            target = M[r]
            for c in range(col, n + 1):
                target[c] -= f * row[c]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = M[i][n] - sum((M[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / M[i][i]
    return x
