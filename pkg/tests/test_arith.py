from __future__ import annotations

import threading
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import root, surd
from trigseries.arith import (
    BernoulliCache,
    LaurentSeries,
    Polynomial,
    RationalFunction,
    SurdValue,
    bernoulli_number,
    bernoulli_poly,
    laurent_div_coefficient,
    normalize_surd,
    poly_gcd,
    squarefree_split,
    surd_floor,
)
from trigseries.arith.surd import frac_part, fraction_str
from trigseries.errors import InsufficientPrecision, NonRealInput, RationalInput

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def surds(d):
    return st.builds(lambda x, y: SurdValue(x, y, d), rationals, rationals)


# -- normalize_surd ----------------------------------------------------------


def test_normalize_extracts_square_factor():
    rho = normalize_surd(0, 1, 1, 8)
    assert (rho.p, rho.q, rho.r, rho.d) == (0, 2, 1, 2)
    assert (rho.A, rho.B, rho.C, rho.disc) == (1, 0, -8, 32)


def test_normalize_golden_ratio():
    rho = normalize_surd(1, 1, 2, 5)
    assert (rho.A, rho.B, rho.C, rho.disc) == (1, -1, -1, 5)


def test_normalize_rejects_rational_and_nonreal():
    with pytest.raises(RationalInput):
        normalize_surd(0, 3, 3, 9)
    with pytest.raises(RationalInput):
        normalize_surd(1, 0, 1, 5)
    with pytest.raises(NonRealInput):
        normalize_surd(0, 1, 1, -3)
    with pytest.raises(ZeroDivisionError):
        normalize_surd(1, 1, 0, 2)


def test_normalize_sign_and_gcd():
    rho = normalize_surd(-2, -4, -6, 3)
    assert (rho.p, rho.q, rho.r, rho.d) == (1, 2, 3, 3)


@given(st.integers(-30, 30), st.integers(-30, 30).filter(bool), st.integers(1, 20),
       st.integers(2, 200))
def test_minimal_polynomial_vanishes(p, q, r, d):
    try:
        rho = normalize_surd(p, q, r, d)
    except RationalInput:
        assert squarefree_split(d)[1] == 1
        return
    assert rho.minpoly_at(rho.value) == 0
    assert rho.disc > 0
    assert sympy.sqrt(rho.disc).is_irrational
    assert rho.A > 0 and sympy.gcd(sympy.gcd(rho.A, rho.B), rho.C) == 1


# -- SurdValue ----------------------------------------------------------------


@pytest.mark.parametrize("d", [2, 5])
@given(data=st.data())
def test_field_axioms(d, data):
    u, v, w = (data.draw(surds(d)) for _ in range(3))
    assert u * (v + w) == u * v + u * w
    if u:
        assert (u * v) * u.inverse() == v
        assert u / u == 1


def test_surd_mixing_with_rationals():
    x = surd(1, 2, 3)
    assert x + 1 == surd(2, 2, 3)
    assert Fraction(1, 2) * x == surd(Fraction(1, 2), 1, 3)
    assert SurdValue.rational(5, 7) == 5
    assert hash(SurdValue.rational(Fraction(1, 3), 7)) == hash(Fraction(1, 3))
    with pytest.raises(ValueError):
        surd(0, 1, 2) + surd(0, 1, 3)


def test_surd_sign_and_order():
    assert surd(-3, 2, 2).sign() < 0  # -3 + 2.83
    assert surd(3, -2, 2).sign() > 0
    assert surd(0, 1, 2) > Fraction(7, 5)
    assert surd(0, 1, 2) < Fraction(17, 12)


def test_surd_json_round_trip():
    v = surd(Fraction(-3, 4), Fraction(1, 2), 7)
    assert v.to_json() == {"d": 7, "x": "-3/4", "y": "1/2"}
    assert SurdValue.from_json(v.to_json()) == v
    assert fraction_str(Fraction(0)) == "0/1"


# -- surd_floor -----------------------------------------------------------------


def test_surd_floor_examples():
    assert surd_floor(surd(0, 1, 2)) == 1
    assert surd_floor(surd(Fraction(1, 2), Fraction(1, 2), 5)) == 1
    assert surd_floor(surd(0, -1, 2)) == -2


@given(rationals, rationals.filter(bool), st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13]))
def test_surd_floor_brackets_value(x, y, d):
    v = SurdValue(x, y, d)
    f = surd_floor(v)
    assert (v - f).sign() >= 0
    assert (f + 1 - v).sign() > 0
    fp = frac_part(v)
    assert 0 <= fp < 1


# -- Bernoulli ------------------------------------------------------------------


def test_bernoulli_examples():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(4) == Fraction(-1, 30)
    assert bernoulli_number(7) == 0


def test_bernoulli_recurrence_and_oracle():
    from math import comb

    for n in range(1, 61):
        assert sum(comb(n + 1, k) * bernoulli_number(k) for k in range(n + 1)) == 0
    for n in range(2, 61):
        assert bernoulli_number(n) == Fraction(str(sympy.bernoulli(n)))


def test_bernoulli_cache_concurrent_readers():
    cache = BernoulliCache()
    results = {}

    def work(i):
        results[i] = [cache.get(n) for n in range(80, -1, -1)]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    expected = [bernoulli_number(n) for n in range(80, -1, -1)]
    assert all(r == expected for r in results.values())


def test_bernoulli_poly_examples():
    assert bernoulli_poly(0, surd(0, 1, 2)) == 1
    assert bernoulli_poly(2, Fraction(0)) == Fraction(1, 6)
    x = surd(0, Fraction(1, 2), 2)
    assert bernoulli_poly(3, x) == surd(Fraction(-3, 4), Fraction(1, 2), 2)
    # independent symbolic oracle
    t = sympy.sqrt(2) / 2
    assert sympy.simplify(sympy.bernoulli(3, t) - (t - sympy.Rational(3, 4))) == 0


@given(rationals)
def test_bernoulli_poly_difference(x):
    for n in range(1, 13):
        assert bernoulli_poly(n, x + 1) - bernoulli_poly(n, x) == n * x ** (n - 1)


# -- polynomials and rational functions ------------------------------------------


def test_polynomial_arithmetic():
    p = Polynomial((1, 2, 1))  # (1 + x)^2
    q = Polynomial((1, 1))
    assert p.exact_div(q) == q
    assert divmod(p, Polynomial((0, 1))) == (Polynomial((2, 1)), Polynomial((1,)))
    assert poly_gcd(p, Polynomial((-1, 0, 1))) == Polynomial((1, 1))
    assert p(Fraction(1, 2)) == Fraction(9, 4)
    assert p.derivative() == Polynomial((2, 2))


def test_rational_function_canonical_form():
    x = RationalFunction.x()
    f = (x * x - 1) / (2 * x + 2)
    assert f == (x - 1) / 2
    assert f.den.lead == 1
    assert (1 / x + 1 / x) == 2 / x
    assert (x / (x + 1)).derivative() == 1 / ((x + 1) ** 2)


def test_rational_function_slash_matches_definition():
    x = RationalFunction.x()
    f = (x**3 + 1) / (x - 2)
    a, b, c, d, k = 2, 1, 1, 1, -3
    slashed = f.slash(a, b, c, d, k)
    for t in (Fraction(3), Fraction(-7, 5), Fraction(11, 2)):
        direct = (c * t + d) ** (-k) * f((a * t + b) / (c * t + d))
        assert slashed(t) == direct


def test_rational_function_at_surd():
    x = RationalFunction.x()
    f = (x * x + 1) / x
    rho = root(2).value
    assert f(rho) == rho + rho.inverse()


# -- Laurent series ------------------------------------------------------------------


def _sympy_kernel_coefficient(k):
    z, t = sympy.symbols("z tau")
    expr = sympy.sin(t * z) / (sympy.sin(z) * sympy.sin((2 * t + 1) * z))
    ser = sympy.series(expr, z, 0, k + 2).removeO()
    return sympy.factor(sympy.simplify(ser.coeff(z, k)))


def test_kernel_coefficient_matches_sympy_series():
    order = 8
    num = LaurentSeries.sin_of(Polynomial.x(), order)
    den = LaurentSeries.sin_of(1, order) * LaurentSeries.sin_of(Polynomial.linear(2, 1), order)
    got = laurent_div_coefficient(num, den, 1)
    x = RationalFunction.x()
    assert got == x * (3 * x * x + 4 * x + 2) / (6 * (2 * x + 1))
    tau = sympy.symbols("tau")
    oracle = _sympy_kernel_coefficient(1)
    for t in (Fraction(1, 3), Fraction(5, 2)):
        assert got(t) == Fraction(str(oracle.subs(tau, sympy.Rational(t.numerator, t.denominator))))
    assert laurent_div_coefficient(num, den, 2).is_zero()


def test_kernel_parity_vanishing():
    for s in range(2, 13):
        order = s + 6
        num = LaurentSeries.sin_of(Polynomial.x(), order)
        den = LaurentSeries.sin_of(1, order) * LaurentSeries.sin_of(Polynomial.linear(2, 1), order)
        # the kernel is odd in z
        for k in range(-1, s, 2):
            assert laurent_div_coefficient(num, den, k + 1).is_zero()


def test_identity_quotient_and_truncation_error():
    z = LaurentSeries.monomial(1, 5)
    assert laurent_div_coefficient(z, z, 0) == RationalFunction.const(1)
    short = LaurentSeries.sin_of(1, 3)
    with pytest.raises(InsufficientPrecision):
        laurent_div_coefficient(short, short, 5)
