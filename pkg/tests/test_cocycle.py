from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from conftest import root
from trigseries.arith import RationalFunction
from trigseries.cocycle import (
    AffineCocycle,
    SeriesKind,
    compose_cocycle,
    cot_period_generator,
    derivative_lift,
    eval_derivative_at_fixed_point,
    fixing_element,
    lifted_cocycles,
    period_of,
    sec_period_generator,
)
from trigseries.errors import ConvergenceBound, ParityError
from trigseries.modular import GENERATORS, IDENTITY, R2, S, T, T2, GeneratorWord, decompose_full
from trigseries.numerics import cocycle_residual, lifted_cocycle_residual, partial_sum
from trigseries.selftest import random_word

x = RationalFunction.x()
SEC, COT = SeriesKind.SECANT, SeriesKind.COTANGENT
WEIGHTS = {SEC: (2, 4, 6), COT: (3, 5, 7)}


def test_secant_generators():
    assert sec_period_generator("T2", 4).is_zero()
    p = sec_period_generator("R2", 2)
    assert p.body == x * (3 * x * x + 4 * x + 2) / (6 * (2 * x + 1))
    assert p.weight == -1
    with pytest.raises(ParityError):
        sec_period_generator("R2", 3)


def test_cotangent_generators():
    assert cot_period_generator("T", 5).is_zero()
    assert cot_period_generator("S", 3).body == -1 / (90 * x) + x / 18 - x**3 / 90
    with pytest.raises(ParityError):
        cot_period_generator("S", 4)


@pytest.mark.parametrize("s", [3, 5, 7, 9])
def test_cotangent_s_period_against_bernoulli_oracle(s):
    m = (s + 1) // 2
    tau = sympy.symbols("tau")
    expr = (-1) ** m * 2**s * sum(
        sympy.bernoulli(2 * n) / sympy.factorial(2 * n) * sympy.bernoulli(2 * (m - n)) / sympy.factorial(2 * (m - n))
        * tau ** (2 * n - 1) for n in range(m + 1))
    body = cot_period_generator("S", s).body
    for t in (Fraction(2, 3), Fraction(-5, 7)):
        assert body(t) == Fraction(str(expr.subs(tau, sympy.Rational(t.numerator, t.denominator))))


def test_compose_examples():
    assert compose_cocycle(GeneratorWord(()), SEC, 2).is_zero()
    p = sec_period_generator("R2", 2)
    twice = compose_cocycle(GeneratorWord((("R2", 1), ("R2", 1))), SEC, 2)
    assert twice == p.slash(R2) + p
    assert cocycle_residual(SEC, R2 @ R2, 2, (Fraction(-1, 4), Fraction(1, 4))) < 1e-20
    # the same matrix through two different words
    ts = compose_cocycle(GeneratorWord((("T", 1), ("S", 1))), COT, 3)
    assert ts == period_of(COT, T @ S, 3)


@pytest.mark.parametrize("s", [2, 4, 6])
def test_cocycle_consistency_gamma2(s):
    rng = random.Random(s)
    for _ in range(100):
        w1 = random_word(SEC, rng, 8)
        w2 = random_word(SEC, rng, 8)
        joined = GeneratorWord(w1.letters + w2.letters)
        lhs = compose_cocycle(joined, SEC, s)
        rhs = compose_cocycle(w1, SEC, s).slash(w2.product()) + compose_cocycle(w2, SEC, s)
        assert lhs == rhs


@pytest.mark.parametrize("kind", [SEC, COT], ids=lambda k: k.name)
@pytest.mark.parametrize("tau", [(0, 1), (1, 2), (Fraction(-1, 2), 3)], ids=str)
def test_generator_residuals(kind, tau):
    for s in WEIGHTS[kind]:
        for g in kind.generators:
            assert cocycle_residual(kind, GENERATORS[g], s, tau) < 1e-20


def test_secant_period_trivial_for_t2():
    assert cocycle_residual(SEC, T2, 4, (1, 2)) < 1e-60


def test_derivative_lift_bookkeeping():
    zero = AffineCocycle(-3, 0, RationalFunction.zero())
    lifted = derivative_lift(zero, T2)
    assert lifted.is_zero() and lifted.weight == -1 and lifted.level == 1
    P = AffineCocycle.from_period(period_of(SEC, R2, 4))
    assert derivative_lift(P, R2).weight == P.weight + 2


@pytest.mark.parametrize("kind,g,s,j,tau", [
    (SEC, R2, 4, 1, (1, 1)),
    (SEC, R2, 6, 2, (1, 1)),
    (SEC, R2 @ T2, 8, 3, (Fraction(-1, 2), Fraction(1, 2))),
    (COT, S, 5, 1, (0, 1)),
    (COT, S, 7, 2, (Fraction(1, 3), 1)),
], ids=str)
def test_lifted_cocycle_residual(kind, g, s, j, tau):
    assert lifted_cocycle_residual(kind, g, s, j, tau) < 1e-20


def test_cot_value_at_sqrt7_matches_direct_summation():
    v = eval_derivative_at_fixed_point(COT, 0, 3, root(7))
    assert v == Fraction(-1, 140) * root(7).value
    ps = partial_sum(-1, 1, 3, root(7), 20_000, 128).value
    with mpmath.workprec(128):
        assert abs(ps / mpmath.pi**3 - float(v)) < 1e-6


def test_cot_derivative_at_sqrt11():
    assert eval_derivative_at_fixed_point(COT, 1, 5, root(11)) == Fraction(-8, 385)


def test_preconditions():
    with pytest.raises(ParityError):
        eval_derivative_at_fixed_point(SEC, 0, 3, root(2))
    with pytest.raises(ConvergenceBound):
        eval_derivative_at_fixed_point(COT, 2, 5, root(2))
    with pytest.raises(ValueError):
        eval_derivative_at_fixed_point(COT, 0, 3, root(2), g=T)


@pytest.mark.parametrize("kind,j,s", [(SEC, 0, 4), (SEC, 1, 6), (COT, 0, 3), (COT, 1, 5), (COT, 2, 7)])
def test_value_independent_of_fixing_matrix(kind, j, s):
    rho = root(3)
    g = fixing_element(kind, rho)
    base = eval_derivative_at_fixed_point(kind, j, s, rho)
    assert eval_derivative_at_fixed_point(kind, j, s, rho, g=g @ g) == base
    assert eval_derivative_at_fixed_point(kind, j, s, rho, g=g.inverse()) == base


@pytest.mark.parametrize("d", [2, 5, 7])
def test_pure_root_containment(d):
    rho = root(d)
    for kind in (SEC, COT):
        for j in (0, 1):
            for s in range(2 * j + 2, 9):
                if (s % 2 == 0) != (kind is SEC):
                    continue
                v = eval_derivative_at_fixed_point(kind, j, s, rho)
                # (D^j psi)(rho) in pi^s rho^(s-j) Q; for even j this is (pi rho)^s Q
                assert (v / rho.value ** (s - j)).is_rational()


def test_lifted_cocycles_are_affine_in_lower_derivatives():
    levels = lifted_cocycles(SEC, 6, fixing_element(SEC, root(2)), 2)
    assert [P.level for P in levels] == [0, 1, 2]
    assert [len(P.deriv_coeffs) for P in levels] == [0, 1, 2]
    assert period_of(COT, IDENTITY, 3).is_zero()
    assert decompose_full(S).product() == S
