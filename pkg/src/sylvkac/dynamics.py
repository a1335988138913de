"""Equilibrium, coverage and time evolution of the occupancy distribution.

Q(t) is expanded over the closed-form eigenpairs; expansion coefficients
and eigenvectors stay exact and only the exponentials are evaluated in
floating point. :func:`rk4_oracle` integrates dQ/dt = MQ directly as an
independent check.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import as_fraction, binom, solve_exact
from .matrices import ModelParams, build_generator
from .spectral import SpectralDecomposition, decompose_generator

FLOAT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ProbabilityVector:
    """Distribution over occupancy counts 0..n; ``exact`` marks rational entries."""

    entries: tuple
    exact: bool = True

    def __post_init__(self):
        if self.exact:
            vals = tuple(as_fraction(x) for x in self.entries)
            if sum(vals, Fraction(0)) != 1:
                raise ValueError("exact probability vector must sum to 1")
        else:
            vals = tuple(float(x) for x in self.entries)
            if abs(math.fsum(vals) - 1.0) > FLOAT_SUM_TOL:
                raise ValueError("probability vector must sum to 1 within 1e-12")
        if any(v < 0 for v in vals):
            raise ValueError("probabilities must be nonnegative")
        object.__setattr__(self, "entries", vals)

    @classmethod
    def point_mass(cls, n: int, k: int) -> "ProbabilityVector":
        if not 0 <= k <= n:
            raise ValueError(f"occupancy {k} outside 0..{n}")
        return cls(tuple(Fraction(int(i == k)) for i in range(n + 1)))

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def as_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.entries])

    def mean(self):
        return sum(k * q for k, q in enumerate(self.entries))


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Q(t) = sum_k coeffs[k] * u_k * exp(lambda_k t)."""

    coeffs: tuple[Fraction, ...]

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)


def equilibrium_unnormalized(n: int, eta) -> list[Fraction]:
    """Q_k = eta^{-k} C(n, k), i.e. the stationary vector scaled so Q_0 = 1."""
    eta = as_fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be > 0 for the unnormalized equilibrium")
    return [binom(n, k) / eta**k for k in range(n + 1)]


def equilibrium(n: int, eta) -> ProbabilityVector:
    """Q'_k = eta^{n-k} C(n, k) / (1 + eta)^n; eta = 0 gives all cells filled."""
    eta = as_fraction(eta)
    if eta < 0:
        raise ValueError("eta must be >= 0")
    norm = (1 + eta) ** n
    return ProbabilityVector(tuple(eta ** (n - k) * binom(n, k) / norm for k in range(n + 1)))


def normalization_sum(n: int, eta) -> Fraction:
    eta = as_fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be > 0")
    return ((1 + eta) / eta) ** n


def average_coverage(params: ModelParams) -> Fraction:
    """Mean number of filled cells at equilibrium, summed directly.

    Equals n*alpha/(alpha+beta); the tests hold the two forms against each other.
    """
    q = equilibrium(params.n, params.eta)
    return sum((k * x for k, x in enumerate(q)), Fraction(0))


def coverage_closed_form(params: ModelParams) -> Fraction:
    return params.n * params.alpha / (params.alpha + params.beta)


def expansion_coefficients(decomp: SpectralDecomposition, q0: Sequence) -> ExpansionCoefficients:
    """Solve U c = Q0 exactly, U holding the eigenvectors as columns."""
    q0 = [as_fraction(x) for x in q0]
    if len(q0) != decomp.n + 1:
        raise ValueError("initial vector has the wrong length")
    try:
        c = solve_exact(decomp.matrix(), q0)
    except ValueError as exc:
        raise ArithmeticError("eigenvector matrix is singular") from exc
    return ExpansionCoefficients(tuple(c))


def _as_vector(q0) -> list[Fraction]:
    if isinstance(q0, ProbabilityVector):
        if not q0.exact:
            raise TypeError("spectral propagation needs an exact initial vector")
        return list(q0.entries)
    return [as_fraction(x) for x in q0]


class SpectralPropagator:
    """Precomputed exact mode weights c_k u_{k,l} for repeated evaluation."""

    def __init__(self, params: ModelParams, q0):
        self.params = params
        self.q0 = _as_vector(q0)
        if len(self.q0) != params.n + 1:
            raise ValueError("initial vector has the wrong length")
        self.decomp = decompose_generator(params)
        self.coeffs = expansion_coefficients(self.decomp, self.q0)
        m = params.n + 1
        self.weights = [[self.coeffs[k] * self.decomp.vectors[k][l] for k in range(m)] for l in range(m)]
        self.rates = [float(lam) for lam in self.decomp.eigenvalues]

    def limit(self) -> ProbabilityVector:
        return ProbabilityVector(tuple(row[0] for row in self.weights))

    def __call__(self, t) -> ProbabilityVector:
        if t == math.inf:
            return self.limit()
        if t < 0:
            raise ValueError("t must be >= 0")
        if t == 0:
            return ProbabilityVector(tuple(self.q0))
        expo = [math.exp(r * float(t)) for r in self.rates]
        vals = [math.fsum(float(w) * e for w, e in zip(row, expo)) for row in self.weights]
        # tiny negative round-off near zero-probability states
        vals = [max(v, 0.0) for v in vals]
        return ProbabilityVector(tuple(vals), exact=False)


def propagate(params: ModelParams, q0, t) -> ProbabilityVector:
    """Q(t) by spectral expansion; t = 0 and t = inf return exact vectors."""
    return SpectralPropagator(params, q0)(t)


def rk4_oracle(params: ModelParams, q0, t: float, step: float) -> ProbabilityVector:
    """Fixed-step classical Runge-Kutta integration of dQ/dt = M Q."""
    if step <= 0:
        raise ValueError("step must be > 0")
    if t < 0:
        raise ValueError("t must be >= 0")
    M = np.array([[float(x) for x in row] for row in build_generator(params).to_dense()])
    q = np.array([float(x) for x in _as_vector(q0)])
    if t == 0:
        return ProbabilityVector(tuple(q), exact=False)
    nsteps = max(1, math.ceil(t / step - 1e-9))
    h = t / nsteps
    for _ in range(nsteps):
        k1 = M @ q
        k2 = M @ (q + 0.5 * h * k1)
        k3 = M @ (q + 0.5 * h * k2)
        k4 = M @ (q + h * k3)
        q = q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return ProbabilityVector(tuple(q), exact=False)


def relaxation_bound(params: ModelParams, q0) -> float:
    """Constant C with |Q(t) - Q(inf)|_1 <= C exp(-(alpha+beta) t)."""
    prop = SpectralPropagator(params, q0)
    total = Fraction(0)
    for k in range(1, params.n + 1):
        total += abs(prop.coeffs[k]) * sum((abs(x) for x in prop.decomp.vectors[k]), Fraction(0))
    return float(total)


def time_series_csv(params: ModelParams, q0, times: Iterable[float], oracle_step: float | None = None) -> str:
    """CSV with header ``t,Q0,...,Qn,sum,coverage`` (plus ``dQk`` columns
    holding spectral minus RK4 when ``oracle_step`` is given).

    A leading ``# precision=...`` comment line records how values were
    computed.
    """
    prop = SpectralPropagator(params, q0)
    n = params.n
    buf = io.StringIO()
    buf.write("# precision=float64 exponentials with exact coefficients; repr round-trip decimals\n")
    header = ["t"] + [f"Q{k}" for k in range(n + 1)] + ["sum", "coverage"]
    if oracle_step is not None:
        header += [f"dQ{k}" for k in range(n + 1)] + ["max_abs_delta"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for t in times:
        q = [float(x) for x in prop(t).entries]
        row = [repr(float(t))] + [repr(x) for x in q]
        row += [repr(math.fsum(q)), repr(math.fsum(k * x for k, x in enumerate(q)))]
        if oracle_step is not None:
            ref = rk4_oracle(params, prop.q0, float(t), oracle_step).entries if t != math.inf else q
            deltas = [a - b for a, b in zip(q, ref)]
            row += [repr(d) for d in deltas] + [repr(max(abs(d) for d in deltas))]
        writer.writerow(row)
    return buf.getvalue()
