"""Exact arithmetic: quadratic surds, polynomials, rational functions, series, Bernoulli numbers."""

from .bernoulli import BernoulliCache, bernoulli_number, bernoulli_poly
from .laurent import LaurentSeries, laurent_div_coefficient
from .poly import Polynomial, RationalFunction, poly_gcd
from .surd import (
    QuadraticIrrational,
    SurdValue,
    fraction_str,
    frac_part,
    is_square,
    normalize_surd,
    squarefree_split,
    surd_floor,
)

__all__ = [
    "BernoulliCache",
    "LaurentSeries",
    "Polynomial",
    "QuadraticIrrational",
    "RationalFunction",
    "SurdValue",
    "bernoulli_number",
    "bernoulli_poly",
    "frac_part",
    "fraction_str",
    "is_square",
    "laurent_div_coefficient",
    "normalize_surd",
    "poly_gcd",
    "squarefree_split",
    "surd_floor",
]
