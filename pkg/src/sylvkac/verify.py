"""Exact verification sweeps over the closed forms.

Each check returns a :class:`CheckResult`; informational checks never
count toward the overall verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .dynamics import (
    coverage_closed_form,
    average_coverage,
    equilibrium,
    expansion_coefficients,
)
from .exact import UniPolynomial, binom, charpoly_tridiagonal, format_fraction, poly_eval
from .matrices import (
    ModelParams,
    build_generator,
    build_krawtchouk,
    build_sylvester_kac,
    matvec,
    transpose,
)
from .spectral import (
    classify_krawtchouk_thm1,
    decompose_generator,
    eigenvalues_generator,
    krawtchouk_charpoly_matches,
    krawtchouk_left_eigenvectors_via_transposition,
    mazza_factorization_check,
    sylvester_kac_spectrum,
    verify_row_equation,
)

RATE_PAIRS = ((1, 1), (1, 2), (3, 5), (7, 2))
ROW_RATE_PAIRS = ((1, 1), (1, 2), (3, 5))
KRAWTCHOUK_PS = (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4))
MAZZA_SCALES = (Fraction(1), Fraction(3, 2))


@dataclass
class CheckResult:
    name: str
    passed: bool
    mandatory: bool = True
    cases: int = 0
    failures: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "mandatory": self.mandatory,
            "cases": self.cases,
            "failures": self.failures[:20],
            **({"detail": self.detail} if self.detail else {}),
        }


def _sweep(name: str, cases, test: Callable[..., bool]) -> CheckResult:
    failures, count = [], 0
    for case in cases:
        count += 1
        if not test(*case):
            failures.append([str(x) for x in case])
    return CheckResult(name, not failures, True, count, failures)


def _params(max_n: int, pairs=RATE_PAIRS):
    for n in range(1, max_n + 1):
        for a, b in pairs:
            yield ModelParams(n, a, b)


def check_generator_eigenvalues(max_n: int) -> CheckResult:
    def test(P):
        cp = charpoly_tridiagonal(build_generator(P))
        return cp.is_monic() and cp.degree == P.n + 1 and all(poly_eval(cp, lam) == 0 for lam in eigenvalues_generator(P))

    return _sweep("generator-eigenvalues", ((P,) for P in _params(max_n)), test)


def check_generator_eigenvectors(max_n: int) -> CheckResult:
    def test(P):
        d = decompose_generator(P)
        return all(all(x == 0 for x in r) for r in d.residuals()) and all(any(v) for v in d.vectors)

    return _sweep("generator-eigenvectors", ((P,) for P in _params(max_n)), test)


def check_row_equations(max_n: int) -> CheckResult:
    cases = ((P, k, l) for P in _params(max_n, ROW_RATE_PAIRS) for k in range(P.n + 1) for l in range(P.n + 1))
    return _sweep("row-equations", cases, lambda P, k, l: verify_row_equation(P, k, l) == 0)


def check_mode_sums(max_n: int) -> CheckResult:
    def test(P):
        d = decompose_generator(P)
        eta = P.eta
        if sum(d.vectors[0], Fraction(0)) != (1 + eta) ** P.n:
            return False
        if any(sum(d.vectors[k], Fraction(0)) != 0 for k in range(1, P.n + 1)):
            return False
        # c_0 for a point mass and for a spread initial vector
        m = P.n + 1
        inits = [[Fraction(int(i == 0)) for i in range(m)], [Fraction(i + 1, m * (m + 1) // 2) for i in range(m)]]
        return all(expansion_coefficients(d, q)[0] == 1 / (1 + eta) ** P.n for q in inits)

    return _sweep("mode-sums", ((P,) for P in _params(max_n)), test)


def check_equilibrium(max_n: int) -> CheckResult:
    def test(P):
        q = equilibrium(P.n, P.eta)
        if any(x != 0 for x in matvec(build_generator(P), q.entries)):
            return False
        p = P.p_eq
        if any(q[k] != binom(P.n, k) * p**k * (1 - p) ** (P.n - k) for k in range(P.n + 1)):
            return False
        return average_coverage(P) == coverage_closed_form(P)

    pairs = RATE_PAIRS + ((2, 0),)
    return _sweep("equilibrium", ((P,) for P in _params(max_n, pairs)), test)


def check_sylvester_kac(max_n: int) -> CheckResult:
    def test(n, c):
        cp = charpoly_tridiagonal(build_sylvester_kac(n, c))
        return cp == UniPolynomial.from_roots(sylvester_kac_spectrum(n, c))

    cases = ((n, c) for n in range(1, max_n + 1) for c in (Fraction(1), Fraction(2), Fraction(3, 2)))
    return _sweep("sylvester-kac", cases, test)


def check_mazza(max_n: int) -> CheckResult:
    cases = ((n, c) for n in range(2, max_n + 1) for c in MAZZA_SCALES)
    return _sweep("mazza", cases, mazza_factorization_check)


def check_krawtchouk_charpoly(max_n: int) -> CheckResult:
    cases = ((p, n) for p in KRAWTCHOUK_PS for n in range(1, max_n + 1))
    return _sweep("krawtchouk-charpoly", cases, krawtchouk_charpoly_matches)


def check_transposition(max_n: int) -> CheckResult:
    def test(p, n):
        return build_krawtchouk(p, n) == transpose(build_generator(ModelParams(n, p, 1 - p)))

    cases = ((p, n) for p in KRAWTCHOUK_PS for n in range(1, max_n + 1))
    return _sweep("transposition", cases, test)


def check_krawtchouk_left_vectors(max_n: int) -> CheckResult:
    def test(p, n, k):
        KT = transpose(build_krawtchouk(p, n))
        u = krawtchouk_left_eigenvectors_via_transposition(p, n, k)
        return any(u) and matvec(KT, u) == [-k * x for x in u]

    cases = ((p, n, k) for p in KRAWTCHOUK_PS for n in range(1, max_n + 1) for k in range(n + 1))
    return _sweep("krawtchouk-left-vectors", cases, test)


def krawtchouk_thm1_report(max_n: int = 5) -> CheckResult:
    """Informational: status of every published Krawtchouk eigenvector."""
    rows = []
    for p in KRAWTCHOUK_PS:
        for n in range(1, max_n + 1):
            for k, rep in classify_krawtchouk_thm1(p, n):
                rows.append(
                    {
                        "p": format_fraction(p),
                        "n": n,
                        "k": k,
                        "claimed_eigenvalue": -k,
                        "right_eigenvalues": [format_fraction(x) for x in rep.right_eigenvalues],
                        "left_eigenvalues": [format_fraction(x) for x in rep.left_eigenvalues],
                        "claimed_right_residual": format_fraction(rep.claim(-k).right_residual),
                        "claimed_left_residual": format_fraction(rep.claim(-k).left_residual),
                    }
                )
    confirmed = sum(1 for r in rows if f"{-r['k']}/1" in r["right_eigenvalues"])
    n1 = classify_krawtchouk_thm1(Fraction(1, 2), 1)[0][1]
    detail = {
        "claimed_right_pairs_confirmed": confirmed,
        "vectors_checked": len(rows),
        "n1_p1/2_u0_right_eigenvalues": [format_fraction(x) for x in n1.right_eigenvalues],
        "rows": rows,
    }
    return CheckResult("krawtchouk-thm1-vectors", True, False, len(rows), [], detail)


SUITES: dict[str, Callable[[int], CheckResult]] = {
    "generator-eigenvalues": check_generator_eigenvalues,
    "generator-eigenvectors": check_generator_eigenvectors,
    "row-equations": check_row_equations,
    "mode-sums": check_mode_sums,
    "equilibrium": check_equilibrium,
    "sylvester-kac": check_sylvester_kac,
    "mazza": check_mazza,
    "krawtchouk": check_krawtchouk_charpoly,
    "transposition": check_transposition,
    "krawtchouk-left-vectors": check_krawtchouk_left_vectors,
    "krawtchouk-thm1-vectors": lambda max_n: krawtchouk_thm1_report(min(max_n, 5)),
}


def run_suites(names, max_n: int) -> list[CheckResult]:
    if "all" in names:
        names = list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[s](max_n) for s in names]
