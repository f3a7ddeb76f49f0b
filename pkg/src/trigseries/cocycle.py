"""Period functions of the secant and cotangent Eichler integrals.

All period bodies are coefficients of ``pi^s``: the actual cocycle value of
``psi_s`` under ``gamma`` is ``pi^s * body(tau)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .arith.bernoulli import bernoulli_number
from .arith.laurent import LaurentSeries, laurent_div_coefficient
from .arith.poly import Polynomial, RationalFunction
from .arith.surd import QuadraticIrrational, SurdValue
from .errors import ConvergenceBound, DegenerateDenominator, InternalError, ParityError
from .modular import (
    GAMMA_TWO,
    GENERATORS,
    IDENTITY,
    GeneratorWord,
    UnimodularMatrix,
    decompose_full,
    decompose_gamma2,
    fixing_matrix,
    is_member,
)

# guard terms kept beyond the requested z-index in series extractions
GUARD_ORDER = 4


class SeriesKind(enum.Enum):
    """The two Eichler integrals: secant on Gamma_2 (even s), cotangent on SL2(Z) (odd s)."""

    SECANT = (1, 0)
    COTANGENT = (-1, 1)

    @property
    def trig(self) -> tuple[int, int]:
        return self.value

    @property
    def generators(self) -> tuple[str, str]:
        return ("T2", "R2") if self is SeriesKind.SECANT else ("T", "S")

    @property
    def level(self) -> int:
        """Level N of a principal congruence subgroup inside the invariance group."""
        return 4 if self is SeriesKind.SECANT else 1

    def check_weight(self, s: int):
        if self is SeriesKind.SECANT and s % 2:
            raise ParityError(f"parity: the secant series needs even s, got s = {s}")
        if self is SeriesKind.COTANGENT and s % 2 == 0:
            raise ParityError(f"parity: the cotangent series needs odd s, got s = {s}")
        if s < 2:
            raise ConvergenceBound(f"convergence: s >= 2 required, got s = {s}")

    def decompose(self, g: UnimodularMatrix) -> GeneratorWord:
        return decompose_gamma2(g) if self is SeriesKind.SECANT else decompose_full(g)


@dataclass(frozen=True)
class PeriodFunction:
    """``pi^s * body(tau)`` = ``psi |_weight [gamma - 1]``."""

    body: RationalFunction
    weight: int

    def slash(self, g: UnimodularMatrix) -> PeriodFunction:
        return PeriodFunction(self.body.slash(g.a, g.b, g.c, g.d, self.weight), self.weight)

    def __add__(self, other: PeriodFunction) -> PeriodFunction:
        return PeriodFunction(self.body + other.body, self.weight)

    def __neg__(self):
        return PeriodFunction(-self.body, self.weight)

    def is_zero(self) -> bool:
        return self.body.is_zero()


@lru_cache(maxsize=None)
def _sec_kernel(s: int) -> RationalFunction:
    # [z^(s-1)] sin(tau z) / (sin(z) sin((2 tau + 1) z))
    k = s - 1
    order = k + GUARD_ORDER + 2
    num = LaurentSeries.sin_of(Polynomial.x(), order)
    den = LaurentSeries.sin_of(1, order) * LaurentSeries.sin_of(Polynomial.linear(2, 1), order)
    return laurent_div_coefficient(num, den, k)


def sec_period_generator(g: str, s: int) -> PeriodFunction:
    SeriesKind.SECANT.check_weight(s)
    if g == "T2":
        return PeriodFunction(RationalFunction.zero(), 1 - s)
    if g == "R2":
        return PeriodFunction(_sec_kernel(s), 1 - s)
    raise ValueError(f"secant generators are T2 and R2, got {g!r}")


@lru_cache(maxsize=None)
def _cot_s_period(s: int) -> RationalFunction:
    m = (s + 1) // 2
    # (-1)^m 2^s sum_n B_2n/(2n)! B_2(m-n)/(2(m-n))! tau^(2n-1)
    coeffs = [Fraction(0)] * (2 * m + 1)  # index i <-> tau^(i-1)
    for n in range(m + 1):
        c = bernoulli_number(2 * n) / factorial(2 * n) * bernoulli_number(2 * (m - n)) / factorial(2 * (m - n))
        coeffs[2 * n] += c
    scale = (-1) ** m * 2**s
    return RationalFunction(Polynomial([scale * c for c in coeffs]), Polynomial.x())


def cot_period_generator(g: str, s: int) -> PeriodFunction:
    SeriesKind.COTANGENT.check_weight(s)
    if s < 3:
        raise ConvergenceBound("convergence: the cotangent period formula needs odd s >= 3")
    if g == "T":
        return PeriodFunction(RationalFunction.zero(), 1 - s)
    if g == "S":
        return PeriodFunction(_cot_s_period(s), 1 - s)
    raise ValueError(f"cotangent generators are T and S, got {g!r}")


def generator_period(kind: SeriesKind, g: str, s: int) -> PeriodFunction:
    if kind is SeriesKind.SECANT:
        return sec_period_generator(g, s)
    return cot_period_generator(g, s)


def _power_period(kind: SeriesKind, g: str, e: int, s: int) -> PeriodFunction:
    base = generator_period(kind, g, s)
    if base.is_zero() or e == 0:
        return PeriodFunction(RationalFunction.zero(), base.weight)
    mat = GENERATORS[g]
    if e < 0:
        mat = mat.inverse()
        # p(g^-1) = -p(g)|g^-1
        base = -base.slash(mat)
        e = -e
    total = base
    acc = base
    for _ in range(e - 1):
        # p(h^(i+1)) = p(h)|h^i + p(h^i)
        acc = acc.slash(mat)
        total = total + acc
    return total


def compose_cocycle(word: GeneratorWord, kind: SeriesKind, s: int) -> PeriodFunction:
    """``p_s(product(word); tau)`` by folding ``p(ab) = p(a)|b + p(b)`` from the right."""
    kind.check_weight(s)
    allowed = kind.generators
    total = PeriodFunction(RationalFunction.zero(), 1 - s)
    suffix = IDENTITY
    for g, e in reversed(word.letters):
        if g not in allowed:
            raise ValueError(f"generator {g} does not belong to the {kind.name.lower()} group")
        piece = _power_period(kind, g, e, s)
        if not piece.is_zero():
            total = piece.slash(suffix) + total
        suffix = GENERATORS[g] ** e @ suffix
    if word.sign < 0 and kind is SeriesKind.SECANT:
        raise ValueError("-I is not in Gamma_2")
    return total


def period_of(kind: SeriesKind, g: UnimodularMatrix, s: int) -> PeriodFunction:
    return compose_cocycle(kind.decompose(g), kind, s)


@dataclass(frozen=True)
class AffineCocycle:
    """``pi^s * free(tau) + sum_m deriv_coeffs[m](tau) * (D^m psi)(tau)``.

    ``level`` is the derivative order j of the function whose period this is;
    ``deriv_coeffs`` has one entry per ``m < level``.
    """

    weight: int
    level: int
    free: RationalFunction
    deriv_coeffs: tuple[RationalFunction, ...] = ()

    @classmethod
    def from_period(cls, p: PeriodFunction) -> AffineCocycle:
        return cls(p.weight, 0, p.body, ())

    def is_zero(self) -> bool:
        return self.free.is_zero() and all(f.is_zero() for f in self.deriv_coeffs)


def derivative_lift(P: AffineCocycle, g: UnimodularMatrix) -> AffineCocycle:
    """Period of ``D F`` at weight k+2 from the period ``P`` of ``F`` at weight k under ``g``."""
    k = P.weight
    if g.c and k:
        w = RationalFunction(Polynomial.const(g.c * k), Polynomial.linear(g.c, g.d))
    else:
        w = RationalFunction.zero()
    free = P.free.derivative() + w * P.free
    old = P.deriv_coeffs
    coeffs = []
    for m in range(P.level + 1):
        f = RationalFunction.zero()
        if m < P.level:
            f = old[m].derivative() + w * old[m]
        if m >= 1:
            f = f + old[m - 1]
        if m == P.level:
            f = f + w
        coeffs.append(f)
    return AffineCocycle(k + 2, P.level + 1, free, tuple(coeffs))


def lifted_cocycles(kind: SeriesKind, s: int, g: UnimodularMatrix, j: int) -> list[AffineCocycle]:
    """The affine cocycles of ``D^m psi_s`` under ``g`` for m = 0..j."""
    P = AffineCocycle.from_period(period_of(kind, g, s))
    out = [P]
    for _ in range(j):
        P = derivative_lift(P, g)
        out.append(P)
    return out


@lru_cache(maxsize=None)
def fixing_element(kind: SeriesKind, rho: QuadraticIrrational) -> UnimodularMatrix:
    g = fixing_matrix(rho, kind.level)
    if kind is SeriesKind.SECANT and not is_member(g, GAMMA_TWO):
        raise InternalError(f"fixing matrix {g} of {rho} is not in Gamma_2")
    return g


@lru_cache(maxsize=4096)
def _solve(kind: SeriesKind, j: int, s: int, rho: QuadraticIrrational,
           g: UnimodularMatrix | None) -> tuple[SurdValue, ...]:
    if g is None:
        g = fixing_element(kind, rho)
    x = rho.value
    u = g.c * x + g.d
    values: list[SurdValue] = []
    for m, P in enumerate(lifted_cocycles(kind, s, g, j)):
        denom = u ** (s - 2 * m - 1) - 1
        if denom == 0:
            raise DegenerateDenominator(f"(c rho + d)^{s - 2 * m - 1} = 1 for {g} at {rho}")
        rhs = P.free(x)
        for i, f in enumerate(P.deriv_coeffs):
            if not f.is_zero():
                rhs = rhs + f(x) * values[i]
        values.append(rhs / denom)
    return tuple(values)


def eval_derivative_at_fixed_point(kind: SeriesKind, j: int, s: int, rho: QuadraticIrrational,
                                   g: UnimodularMatrix | None = None) -> SurdValue:
    """``(D^j psi_s)(rho) / pi^s`` in Q(rho), with ``psi`` the secant or cotangent series.

    ``g`` overrides the fixing matrix (it must fix ``rho`` and lie in the
    invariance group of ``kind``).
    """
    if j < 0:
        raise ValueError("derivative order must be nonnegative")
    kind.check_weight(s)
    if s < 2 * j + 2:
        raise ConvergenceBound(f"convergence: s >= 2j + 2 = {2 * j + 2} required, got s = {s}")
    if g is not None and g.act(rho.value) != rho.value:
        raise ValueError(f"{g} does not fix {rho}")
    return _solve(kind, j, s, rho, g)[-1]
