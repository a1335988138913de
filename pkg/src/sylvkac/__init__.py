"""Exact spectral toolkit for the deposition/evaporation rate matrix."""

from .exact import UniPolynomial, binom, charpoly_tridiagonal, poly_eval, scalar_normalize
from .matrices import (
    ModelParams,
    TridiagonalMatrix,
    build_generator,
    build_krawtchouk,
    build_sylvester_kac,
    matvec,
    transpose,
)
from .spectral import SpectralDecomposition, decompose_generator, eigenvalues_generator, eigenvector_generator
from .dynamics import ProbabilityVector, equilibrium, propagate, rk4_oracle

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "ProbabilityVector",
    "SpectralDecomposition",
    "TridiagonalMatrix",
    "UniPolynomial",
    "binom",
    "build_generator",
    "build_krawtchouk",
    "build_sylvester_kac",
    "charpoly_tridiagonal",
    "decompose_generator",
    "eigenvalues_generator",
    "eigenvector_generator",
    "equilibrium",
    "matvec",
    "poly_eval",
    "propagate",
    "rk4_oracle",
    "scalar_normalize",
    "transpose",
]
