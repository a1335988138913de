import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylvkac.dynamics import (
    ProbabilityVector,
    SpectralPropagator,
    average_coverage,
    coverage_closed_form,
    equilibrium,
    equilibrium_unnormalized,
    expansion_coefficients,
    normalization_sum,
    propagate,
    relaxation_bound,
    rk4_oracle,
    time_series_csv,
)
from sylvkac.exact import binom
from sylvkac.matrices import ModelParams, build_generator, matvec
from sylvkac.spectral import decompose_generator

from conftest import positive_rationals

F = Fraction


def stationary_by_recursion(n, a, b):
    """Q_0 = 1 and dQ_k/dt = 0 in the rate equation, solved upward for Q_{k+1}."""
    Q = [F(1), n * a / b]
    for k in range(1, n):
        Q.append((((n - k) * a + k * b) * Q[k] - (n - k + 1) * a * Q[k - 1]) / ((k + 1) * b))
    return Q[: n + 1]


def test_equilibrium_unnormalized_examples():
    assert equilibrium_unnormalized(2, 2) == [1, 1, F(1, 4)]
    assert equilibrium_unnormalized(2, 1) == [1, 2, 1]
    with pytest.raises(ValueError):
        equilibrium_unnormalized(2, 0)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 25), a=positive_rationals, b=positive_rationals)
def test_equilibrium_unnormalized_solves_recursion(n, a, b):
    P = ModelParams(n, a, b)
    assert equilibrium_unnormalized(n, P.eta) == stationary_by_recursion(n, P.alpha, P.beta)


def test_equilibrium_examples():
    assert equilibrium(2, 2).entries == (F(4, 9), F(4, 9), F(1, 9))
    assert equilibrium(2, 1).entries == (F(1, 4), F(1, 2), F(1, 4))
    assert equilibrium(3, 0).entries == (0, 0, 0, 1)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 40), a=positive_rationals, b=positive_rationals)
def test_equilibrium_is_binomial_and_stationary(n, a, b):
    P = ModelParams(n, a, b)
    q = equilibrium(n, P.eta)
    p = a / (a + b)
    assert list(q) == [binom(n, k) * p**k * (1 - p) ** (n - k) for k in range(n + 1)]
    assert matvec(build_generator(P), q.entries) == [0] * (n + 1)


def test_normalization_sum():
    assert normalization_sum(2, 2) == F(9, 4)
    assert normalization_sum(1, 1) == 2
    assert normalization_sum(5, F(3, 2)) == sum(equilibrium_unnormalized(5, F(3, 2)))


def test_average_coverage_examples():
    assert average_coverage(ModelParams(10, 1, 2)) == F(10, 3)
    assert average_coverage(ModelParams(7, 3, 3)) == F(7, 2)
    assert average_coverage(ModelParams(4, 1, 0)) == 4


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 40), a=positive_rationals, b=positive_rationals)
def test_average_coverage_identity(n, a, b):
    P = ModelParams(n, a, b)
    assert average_coverage(P) == coverage_closed_form(P)


def test_expansion_coefficients_worked_example():
    d = decompose_generator(ModelParams(2, 1, 2))
    c = expansion_coefficients(d, [1, 0, 0])
    assert c.coeffs == (F(1, 9), F(-2, 9), F(1, 9))
    # back-substitution
    U = d.matrix()
    assert [sum(U[l][k] * c[k] for k in range(3)) for l in range(3)] == [1, 0, 0]


def test_equilibrium_excites_only_mode_zero(rate_pair):
    P = ModelParams(6, *rate_pair)
    c = expansion_coefficients(decompose_generator(P), equilibrium(6, P.eta).entries)
    assert c.coeffs == (1 / (1 + P.eta) ** 6,) + (0,) * 6


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 10), a=positive_rationals, b=positive_rationals, data=st.data())
def test_c0_for_any_normalized_start(n, a, b, data):
    P = ModelParams(n, a, b)
    w = data.draw(st.lists(st.integers(0, 9), min_size=n + 1, max_size=n + 1).filter(any))
    q0 = [F(x, sum(w)) for x in w]
    c = expansion_coefficients(decompose_generator(P), q0)
    assert c[0] == 1 / (1 + P.eta) ** n


def test_propagate_limits_exact():
    P = ModelParams(2, 1, 2)
    assert propagate(P, [1, 0, 0], math.inf).entries == (F(4, 9), F(4, 9), F(1, 9))
    q0 = propagate(P, [1, 0, 0], 0)
    assert q0.exact and q0.entries == (1, 0, 0)
    with pytest.raises(ValueError):
        propagate(P, [1, 0, 0], -1)


def test_propagate_matches_two_state_closed_form():
    # one cell: P(filled, t) = p (1 - exp(-(a+b) t)) from empty
    a, b = 3, 2
    P = ModelParams(1, a, b)
    for t in (0.01, 0.3, 1.0, 4.0):
        q = propagate(P, [1, 0], t)
        assert q[1] == pytest.approx(a / (a + b) * (1 - math.exp(-(a + b) * t)), abs=1e-14)


@pytest.mark.parametrize("t", [0.05, 0.3, 1.5])
def test_propagate_against_rk4(t, rate_pair):
    P = ModelParams(8, *rate_pair)
    q0 = ProbabilityVector.point_mass(8, 3)
    a = propagate(P, q0, t).as_float()
    b = rk4_oracle(P, q0, t, 1e-4).as_float()
    assert np.max(np.abs(a - b)) <= 1e-8
    assert abs(a.sum() - 1) <= 1e-12


def test_rk4_conservation():
    P = ModelParams(5, 1, 2)
    for t in (0.0, 2.5, 10.0):
        q = rk4_oracle(P, [1, 0, 0, 0, 0, 0], t, 1e-3)
        assert abs(sum(q) - 1) <= 1e-10
    assert rk4_oracle(P, [0, 1, 0, 0, 0, 0], 0, 1e-3).entries == (0, 1, 0, 0, 0, 0)


def test_rk4_converges_at_fourth_order():
    P = ModelParams(4, 1, 2)
    exact = propagate(P, [1, 0, 0, 0, 0], 1.0).as_float()
    e1 = np.abs(rk4_oracle(P, [1, 0, 0, 0, 0], 1.0, 0.025).as_float() - exact).max()
    e2 = np.abs(rk4_oracle(P, [1, 0, 0, 0, 0], 1.0, 0.0125).as_float() - exact).max()
    assert 12 < e1 / e2 < 20


def test_relaxation_bound(rate_pair):
    P = ModelParams(7, *rate_pair)
    q0 = [1] + [0] * 7
    C = relaxation_bound(P, q0)
    eq = np.array([float(x) for x in equilibrium(7, P.eta)])
    rate = float(P.alpha + P.beta)
    for t in (0.1, 0.5, 1.0, 3.0, 6.0):
        gap = np.abs(propagate(P, q0, t).as_float() - eq).sum()
        assert gap <= C * math.exp(-rate * t) * (1 + 1e-9) + 1e-14


def test_probability_vector_validation():
    with pytest.raises(ValueError):
        ProbabilityVector((F(1, 2), F(1, 3)))
    with pytest.raises(ValueError):
        ProbabilityVector((F(3, 2), F(-1, 2)))
    with pytest.raises(ValueError):
        ProbabilityVector((0.5, 0.6), exact=False)


def test_spectral_propagator_reuse():
    prop = SpectralPropagator(ModelParams(3, 1, 1), [0, 0, 0, 1])
    assert prop.limit().entries == (F(1, 8), F(3, 8), F(3, 8), F(1, 8))


def test_time_series_csv():
    text = time_series_csv(ModelParams(2, 1, 2), [1, 0, 0], [0.0, 1.0], oracle_step=1e-3)
    lines = text.splitlines()
    assert lines[0].startswith("# precision=")
    assert lines[1].split(",")[:6] == ["t", "Q0", "Q1", "Q2", "sum", "coverage"]
    assert len(lines) == 4
