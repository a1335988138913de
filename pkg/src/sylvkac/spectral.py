"""Closed-form eigenpairs of the generator, Sylvester-Kac and Krawtchouk
matrices, and exact verifiers for each closed form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    UniPolynomial,
    as_fraction,
    binom,
    charpoly_tridiagonal,
    format_fraction,
    parse_fraction,
    poly_eval,
)
from .matrices import (
    ModelParams,
    TridiagonalMatrix,
    build_generator,
    build_krawtchouk,
    build_sylvester_kac,
    matvec,
    vecmat,
)

CLOSED_FORM = "closed-form"
ORACLE = "oracle"


# -- generator M(n, alpha, beta) ---------------------------------------------


def eigenvalues_generator(params: ModelParams) -> list[Fraction]:
    rate = params.alpha + params.beta
    return [-k * rate for k in range(params.n + 1)]


def _check_k(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise ValueError(f"mode index k={k} outside 0..{n}")


def eigenvector_generator(params: ModelParams, k: int) -> list[Fraction]:
    """Unnormalized closed-form eigenvector u_k of the generator.

    u_{k,l} = sum_j (-1)^{k+l+j} eta^{n-k-j} C(k, l-j) C(n-k, j), with
    out-of-range binomials read as zero and 0**0 = 1.
    """
    n = params.n
    _check_k(n, k)
    eta = params.eta
    a, b = eta.numerator, eta.denominator
    top = n - k
    # Work over the integers: scale every component by b**(n-k).
    a_pow = [a**e for e in range(top + 1)]
    b_pow = [b**e for e in range(top + 1)]
    denom = b_pow[top]
    out = []
    for l in range(n + 1):
        acc = 0
        for j in range(max(0, l - k), min(top, l) + 1):
            term = a_pow[top - j] * b_pow[j] * binom(k, l - j) * binom(top, j)
            acc += -term if (k + l + j) & 1 else term
        out.append(Fraction(acc, denom))
    return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues and eigenvectors (``vectors[k]`` is the column u_k)."""

    params: ModelParams
    eigenvalues: tuple[Fraction, ...]
    vectors: tuple[tuple[Fraction, ...], ...]
    source: str = CLOSED_FORM

    @property
    def n(self) -> int:
        return self.params.n

    def matrix(self) -> list[list[Fraction]]:
        """U with U[l][k] = u_{k,l}."""
        m = self.n + 1
        return [[self.vectors[k][l] for k in range(m)] for l in range(m)]

    def residuals(self) -> list[list[Fraction]]:
        M = build_generator(self.params)
        out = []
        for lam, u in zip(self.eigenvalues, self.vectors):
            Mu = matvec(M, u)
            out.append([x - lam * y for x, y in zip(Mu, u)])
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": format_fraction(self.params.alpha),
            "beta": format_fraction(self.params.beta),
            "eigenvalues": [format_fraction(v) for v in self.eigenvalues],
            "vectors": [[format_fraction(v) for v in col] for col in self.vectors],
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralDecomposition":
        params = ModelParams(int(data["n"]), parse_fraction(data["alpha"]), parse_fraction(data["beta"]))
        return cls(
            params,
            tuple(parse_fraction(v) for v in data["eigenvalues"]),
            tuple(tuple(parse_fraction(v) for v in col) for col in data["vectors"]),
            data.get("source", CLOSED_FORM),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SpectralDecomposition":
        return cls.from_dict(json.loads(text))


def decompose_generator(params: ModelParams) -> SpectralDecomposition:
    return SpectralDecomposition(
        params,
        tuple(eigenvalues_generator(params)),
        tuple(tuple(eigenvector_generator(params, k)) for k in range(params.n + 1)),
        CLOSED_FORM,
    )


def nullvector_oracle(T: TridiagonalMatrix, lam) -> list[Fraction] | None:
    """Exact null vector of T - lam*I built from the bottom row upward.

    Needs every subdiagonal entry nonzero. Returns None when the top row is
    left unsatisfied, i.e. when ``lam`` is not an eigenvalue.
    """
    lam = as_fraction(lam)
    m = T.order
    if any(s == 0 for s in T.sub):
        raise ValueError("backward recurrence needs a nonzero subdiagonal")
    v = [Fraction(0)] * m
    v[m - 1] = Fraction(1)
    for i in range(m - 1, 0, -1):
        acc = (T.diag[i] - lam) * v[i]
        if i + 1 < m:
            acc += T.super[i] * v[i + 1]
        v[i - 1] = -acc / T.sub[i - 1]
    top = (T.diag[0] - lam) * v[0] + (T.super[0] * v[1] if m > 1 else 0)
    return v if top == 0 else None


def decompose_generator_oracle(params: ModelParams) -> SpectralDecomposition:
    """Eigenpairs from the characteristic-polynomial roots and null vectors,
    with no use of the closed-form eigenvector formula."""
    M = build_generator(params)
    cp = charpoly_tridiagonal(M)
    lams = eigenvalues_generator(params)
    vecs = []
    for lam in lams:
        if poly_eval(cp, lam) != 0:
            raise ArithmeticError(f"{lam} is not a root of the characteristic polynomial")
        v = nullvector_oracle(M, lam)
        if v is None:
            raise ArithmeticError(f"no null vector for {lam}")
        vecs.append(tuple(v))
    return SpectralDecomposition(params, tuple(lams), tuple(vecs), ORACLE)


def is_colinear(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """Exact test that u and v are nonzero multiples of each other."""
    if len(u) != len(v):
        return False
    i = next((i for i, x in enumerate(u) if x != 0), None)
    if i is None or v[i] == 0:
        return False
    r = v[i] / u[i]
    return all(r * x == y for x, y in zip(u, v))


def verify_row_equation(params: ModelParams, k: int, l: int) -> Fraction:
    """Exact residual of row ``l`` of M u_k = lambda_k u_k, divided by alpha.

    Interior rows use
    (n-l+1) u_{l-1} + (k+l-n+(k-l) eta) u_l + (l+1) eta u_{l+1};
    the first and last rows use their two-term forms.
    """
    n = params.n
    _check_k(n, k)
    if not 0 <= l <= n:
        raise ValueError(f"row index l={l} outside 0..{n}")
    eta = params.eta
    u = eigenvector_generator(params, k)
    if l == 0:
        return (-n + k + k * eta) * u[0] + eta * u[1]
    if l == n:
        return u[n - 1] + (k + (k - n) * eta) * u[n]
    return (n - l + 1) * u[l - 1] + (k + l - n + (k - l) * eta) * u[l] + (l + 1) * eta * u[l + 1]


# -- Sylvester-Kac -----------------------------------------------------------


def sylvester_kac_spectrum(n: int, scale=1) -> list[Fraction]:
    if n < 1:
        raise ValueError("n must be >= 1")
    c = as_fraction(scale)
    return [c * (2 * k - n) for k in range(n + 1)]


def _det_lambda_plus(T: TridiagonalMatrix) -> UniPolynomial:
    """det(lambda*I + T) as a polynomial in lambda."""
    return charpoly_tridiagonal(T.scaled(-1))


def _progression_matrix(m: int, c: Fraction) -> TridiagonalMatrix:
    """Zero diagonal, super (c, 2c, ..., mc), sub (mc, ..., c); order m+1."""
    if m == 0:
        return TridiagonalMatrix(1, (Fraction(0),), (), ())
    return build_sylvester_kac(m, c)


def mazza_sides(n: int, c) -> tuple[UniPolynomial, UniPolynomial]:
    """Both sides of the factorization for the progression a_k = k*c."""
    if n < 2:
        raise ValueError("mazza factorization needs n >= 2")
    c = as_fraction(c)
    lhs = _det_lambda_plus(_progression_matrix(n, c))
    an = n * c
    block = UniPolynomial((-an * an, Fraction(0), Fraction(1)))
    rhs = block * _det_lambda_plus(_progression_matrix(n - 2, c))
    return lhs, rhs


def mazza_factorization_check(n: int, c) -> bool:
    lhs, rhs = mazza_sides(n, c)
    return lhs == rhs


# -- Krawtchouk K(p, n) ------------------------------------------------------


def krawtchouk_eigenvalues(n: int) -> list[Fraction]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Fraction(-k) for k in range(n + 1)]


def krawtchouk_charpoly_claim(n: int) -> UniPolynomial:
    """The printed det(K - xI) = prod_k (x + k), as a polynomial."""
    return UniPolynomial.from_roots(-k for k in range(n + 1))


def krawtchouk_det_k_minus_x(p, n: int) -> UniPolynomial:
    """det(K(p, n) - xI) = (-1)^(n+1) det(xI - K(p, n))."""
    monic = charpoly_tridiagonal(build_krawtchouk(p, n))
    return monic * (-1 if (n + 1) % 2 else 1)


def krawtchouk_charpoly_matches(p, n: int) -> bool:
    """det(K - xI) equals (-1)^(n+1) prod_k (x + k), i.e. the monic
    characteristic polynomial has roots 0, -1, ..., -n."""
    sign = -1 if (n + 1) % 2 else 1
    return krawtchouk_det_k_minus_x(p, n) == krawtchouk_charpoly_claim(n) * sign


def krawtchouk_printed_identity_holds(p, n: int) -> bool:
    """The unadjusted det(K - xI) == prod_k (x + k); true only for odd n."""
    return krawtchouk_det_k_minus_x(p, n) == krawtchouk_charpoly_claim(n)


def krawtchouk_eigenvector_thm1(p, n: int, k: int) -> list[Fraction]:
    """Evaluate the published Krawtchouk eigenvector formula verbatim.

    u_{k,l} = sum_{j=0}^{min(l,k)} (-1)^{l-j} C(l,j) C(n-j,k-j) p^{-j}.
    No eigenvector property is implied; see :func:`classify_eigvec_claim`.
    """
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    _check_k(n, k)
    inv = 1 / p
    out = []
    for l in range(n + 1):
        acc = Fraction(0)
        for j in range(min(l, k) + 1):
            term = binom(l, j) * binom(n - j, k - j) * inv**j
            acc += -term if (l - j) & 1 else term
        out.append(acc)
    return out


def krawtchouk_left_eigenvectors_via_transposition(p, n: int, k: int) -> list[Fraction]:
    """Left eigenvector of K(p, n) for eigenvalue -k, from K = M(n, p, 1-p)^T."""
    p = as_fraction(p)
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    return eigenvector_generator(ModelParams(n, p, 1 - p), k)


@dataclass(frozen=True)
class EigenClaim:
    eigenvalue: Fraction
    right: bool
    left: bool
    right_residual: Fraction
    left_residual: Fraction


@dataclass(frozen=True)
class ClassificationReport:
    vector: tuple[Fraction, ...]
    entries: tuple[EigenClaim, ...] = field(default_factory=tuple)

    @property
    def right_eigenvalues(self) -> list[Fraction]:
        return [e.eigenvalue for e in self.entries if e.right]

    @property
    def left_eigenvalues(self) -> list[Fraction]:
        return [e.eigenvalue for e in self.entries if e.left]

    def claim(self, lam) -> EigenClaim:
        lam = as_fraction(lam)
        for e in self.entries:
            if e.eigenvalue == lam:
                return e
        raise KeyError(lam)

    @property
    def is_eigenvector(self) -> bool:
        return bool(self.right_eigenvalues or self.left_eigenvalues)

    def to_dict(self) -> dict:
        return {
            "vector": [format_fraction(v) for v in self.vector],
            "entries": [
                {
                    "eigenvalue": format_fraction(e.eigenvalue),
                    "right": e.right,
                    "left": e.left,
                    "right_residual": format_fraction(e.right_residual),
                    "left_residual": format_fraction(e.left_residual),
                }
                for e in self.entries
            ],
        }


def classify_eigvec_claim(T: TridiagonalMatrix, v: Sequence, eigenvalues: Sequence) -> ClassificationReport:
    """Check ``v`` against each known eigenvalue of ``T`` on both sides.

    Residual norms are exact l1 norms of T v - lam v and v^T T - lam v^T.
    """
    v = [as_fraction(x) for x in v]
    if len(v) != T.order:
        raise ValueError("vector length does not match matrix order")
    if all(x == 0 for x in v):
        raise ValueError("zero vector cannot be an eigenvector")
    Tv = matvec(T, v)
    vT = vecmat(v, T)
    entries = []
    for lam in eigenvalues:
        lam = as_fraction(lam)
        r = sum((abs(a - lam * b) for a, b in zip(Tv, v)), Fraction(0))
        s = sum((abs(a - lam * b) for a, b in zip(vT, v)), Fraction(0))
        entries.append(EigenClaim(lam, r == 0, s == 0, r, s))
    return ClassificationReport(tuple(v), tuple(entries))


def classify_krawtchouk_thm1(p, n: int) -> list[tuple[int, ClassificationReport]]:
    """Classification of every published Krawtchouk eigenvector for (p, n)."""
    K = build_krawtchouk(p, n)
    lams = krawtchouk_eigenvalues(n)
    return [(k, classify_eigvec_claim(K, krawtchouk_eigenvector_thm1(p, n, k), lams)) for k in range(n + 1)]


__all__ = [
    "CLOSED_FORM",
    "ORACLE",
    "ClassificationReport",
    "EigenClaim",
    "SpectralDecomposition",
    "classify_eigvec_claim",
    "classify_krawtchouk_thm1",
    "decompose_generator",
    "decompose_generator_oracle",
    "eigenvalues_generator",
    "eigenvector_generator",
    "is_colinear",
    "krawtchouk_charpoly_claim",
    "krawtchouk_charpoly_matches",
    "krawtchouk_det_k_minus_x",
    "krawtchouk_eigenvalues",
    "krawtchouk_eigenvector_thm1",
    "krawtchouk_left_eigenvectors_via_transposition",
    "krawtchouk_printed_identity_holds",
    "mazza_factorization_check",
    "mazza_sides",
    "nullvector_oracle",
    "sylvester_kac_spectrum",
    "verify_row_equation",
]
