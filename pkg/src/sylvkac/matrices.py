"""Tridiagonal matrices: the deposition/evaporation generator, the
Sylvester-Kac (Clement) matrix and the Krawtchouk matrix K(p, n).

Bands are row-indexed: ``sub[i]`` sits at (i+1, i) and ``super[i]`` at
(i, i+1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import as_fraction, format_fraction, parse_fraction


@dataclass(frozen=True)
class ModelParams:
    """n cells, fill rate ``alpha`` per empty cell, empty rate ``beta`` per filled cell."""

    n: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise TypeError("n must be an integer")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        alpha = as_fraction(self.alpha)
        beta = as_fraction(self.beta)
        if alpha <= 0:
            raise ValueError("alpha must be > 0")
        if beta < 0:
            raise ValueError("beta must be >= 0")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def eta(self) -> Fraction:
        return self.beta / self.alpha

    @property
    def p_eq(self) -> Fraction:
        """Equilibrium probability that a given cell is filled."""
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class TridiagonalMatrix:
    order: int
    diag: tuple[Fraction, ...]
    sub: tuple[Fraction, ...]
    super: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        diag = tuple(as_fraction(v) for v in self.diag)
        sub = tuple(as_fraction(v) for v in self.sub)
        sup = tuple(as_fraction(v) for v in self.super)
        if len(diag) != self.order or len(sub) != self.order - 1 or len(sup) != self.order - 1:
            raise ValueError("band lengths do not match order")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "super", sup)

    def entry(self, i: int, j: int) -> Fraction:
        if not (0 <= i < self.order and 0 <= j < self.order):
            raise IndexError((i, j))
        if i == j:
            return self.diag[i]
        if i == j + 1:
            return self.sub[j]
        if j == i + 1:
            return self.super[i]
        return Fraction(0)

    def to_dense(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.order)] for i in range(self.order)]

    def trace(self) -> Fraction:
        return sum(self.diag, Fraction(0))

    def column_sums(self) -> list[Fraction]:
        m = self.order
        sums = list(self.diag)
        for i in range(m - 1):
            sums[i] += self.sub[i]
            sums[i + 1] += self.super[i]
        return sums

    def scaled(self, c) -> "TridiagonalMatrix":
        c = as_fraction(c)
        return TridiagonalMatrix(
            self.order,
            tuple(c * v for v in self.diag),
            tuple(c * v for v in self.sub),
            tuple(c * v for v in self.super),
        )

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "diag": [format_fraction(v) for v in self.diag],
            "sub": [format_fraction(v) for v in self.sub],
            "super": [format_fraction(v) for v in self.super],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TridiagonalMatrix":
        return cls(
            int(data["order"]),
            tuple(parse_fraction(s) for s in data["diag"]),
            tuple(parse_fraction(s) for s in data["sub"]),
            tuple(parse_fraction(s) for s in data["super"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TridiagonalMatrix":
        return cls.from_dict(json.loads(text))


def build_generator(params: ModelParams) -> TridiagonalMatrix:
    """Rate matrix M with dQ/dt = M Q for the occupancy distribution Q."""
    n, a, b = params.n, params.alpha, params.beta
    diag = tuple(-((n - i) * a + i * b) for i in range(n + 1))
    sub = tuple((n - i) * a for i in range(n))
    sup = tuple((i + 1) * b for i in range(n))
    return TridiagonalMatrix(n + 1, diag, sub, sup)


def build_sylvester_kac(n: int, scale=1) -> TridiagonalMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    c = as_fraction(scale)
    return TridiagonalMatrix(
        n + 1,
        (Fraction(0),) * (n + 1),
        tuple(c * (n - i) for i in range(n)),
        tuple(c * (i + 1) for i in range(n)),
    )


def build_krawtchouk(p, n: int) -> TridiagonalMatrix:
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    if n < 1:
        raise ValueError("n must be >= 1")
    q = 1 - p
    diag = tuple(-p * n - l * (1 - 2 * p) for l in range(n + 1))
    sub = tuple((l + 1) * q for l in range(n))
    sup = tuple(p * (n - l) for l in range(n))
    return TridiagonalMatrix(n + 1, diag, sub, sup)


def matvec(T: TridiagonalMatrix, v: Sequence) -> list[Fraction]:
    if len(v) != T.order:
        raise ValueError(f"vector length {len(v)} does not match order {T.order}")
    v = [as_fraction(x) for x in v]
    out = [d * x for d, x in zip(T.diag, v)]
    for i in range(T.order - 1):
        out[i + 1] += T.sub[i] * v[i]
        out[i] += T.super[i] * v[i + 1]
    return out


def vecmat(v: Sequence, T: TridiagonalMatrix) -> list[Fraction]:
    """Row vector times matrix, v^T T."""
    return matvec(transpose(T), v)


def transpose(T: TridiagonalMatrix) -> TridiagonalMatrix:
    return TridiagonalMatrix(T.order, T.diag, T.super, T.sub)
