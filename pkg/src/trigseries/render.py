"""Text, LaTeX, decimal and JSON renderings of exact values ``coeff * pi^s``."""

from __future__ import annotations

import json
from fractions import Fraction

import mpmath

from .arith.surd import SurdValue, fraction_str
from .numerics import DEFAULT_PREC, decimal_string, exact_to_mpf

DECIMAL_DIGITS = 40


def text_value(coeff: SurdValue, pi_power: int) -> str:
    if not coeff:
        return "0"
    body = str(coeff)
    if coeff.x and coeff.y:
        body = f"({body})"
    return f"{body} * pi^{pi_power}"


def _latex_fraction(v: Fraction) -> str:
    v = abs(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"\\frac{{{v.numerator}}}{{{v.denominator}}}"


def _latex_surd_part(y: Fraction, d: int) -> str:
    root = f"\\sqrt{{{d}}}"
    y = abs(y)
    if y == 1:
        return root
    if y.denominator == 1:
        return f"{y.numerator}{root}"
    return f"\\frac{{{y.numerator}{root}}}{{{y.denominator}}}"


def latex_value(coeff: SurdValue, pi_power: int) -> str:
    """LaTeX using only \\frac, \\sqrt, \\pi and plain parentheses."""
    if not coeff:
        return "0"
    pi = "\\pi" if pi_power == 1 else f"\\pi^{{{pi_power}}}"
    x, y = coeff.x, coeff.y
    if x and y:
        head = ("-" if x < 0 else "") + _latex_fraction(x)
        sep = " - " if y < 0 else " + "
        return f"({head}{sep}{_latex_surd_part(y, coeff.d)}) {pi}"
    if x:
        return ("-" if x < 0 else "") + f"{_latex_fraction(x)} {pi}"
    return ("-" if y < 0 else "") + f"{_latex_surd_part(y, coeff.d)} {pi}"


def decimal_value(coeff: SurdValue, pi_power: int, digits: int = DECIMAL_DIGITS, prec: int = DEFAULT_PREC) -> str:
    with mpmath.workprec(prec):
        return decimal_string(exact_to_mpf(coeff, pi_power, prec), digits)


def value_json(coeff: SurdValue, pi_power: int) -> dict:
    return {
        "pi_power": pi_power,
        "field": {"d": coeff.d},
        "coeff": {"x": fraction_str(coeff.x), "y": fraction_str(coeff.y)},
    }


def dumps(obj) -> str:
    """Canonical JSON: insertion key order, compact separators, UTF-8 kept."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
