"""Exact Gaussian-integer toolkit for polynomial difference-set experiments."""

from .gaussian import GaussianInt, format_gaussian, parse_gaussian
from .ideals import IdealFactorization, GaussianPrime, crt, factor_ideal
from .poly import GIPolynomial, parse_poly

__all__ = [
    "GaussianInt",
    "GaussianPrime",
    "GIPolynomial",
    "IdealFactorization",
    "crt",
    "factor_ideal",
    "format_gaussian",
    "parse_gaussian",
    "parse_poly",
]
