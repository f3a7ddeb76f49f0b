"""High-precision numerical oracle for the exact evaluator.

Real quadratic points are summed directly with the argument pi*n*tau reduced
modulo 2*pi through an integer floor of n*tau/2, so precision does not decay
with n.  Points in the upper half-plane use q = exp(i*pi*tau), where all the
series converge geometrically (a + b >= 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
from mpmath import mpc, mpf

from .arith.poly import Polynomial, RationalFunction
from .arith.surd import QuadraticIrrational, SurdValue, surd_floor
from .cocycle import SeriesKind, lifted_cocycles, period_of
from .errors import PrecisionUnderflow
from .modular import UnimodularMatrix

DEFAULT_TERMS = 100_000
DEFAULT_PREC = 192
DEFAULT_REL_TOL = 1e-3
UHP_TOL = 1e-20
MIN_PREC = 64
GUARD_BITS = 32

TWISTS = (None, "alt", "odd", "chi4")


def _mpf(v) -> mpf:
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    return mpf(v)


def surd_to_mpf(v: SurdValue) -> mpf:
    """``x + y*sqrt(d)`` at the current working precision."""
    return _mpf(v.x) + _mpf(v.y) * mpmath.sqrt(v.d)


def _work_prec(prec: int, terms: int) -> int:
    if prec < MIN_PREC:
        raise PrecisionUnderflow(f"precision {prec} bits is below the {MIN_PREC}-bit floor")
    return prec + max(terms, 1).bit_length() + GUARD_BITS


# -- continued fractions -------------------------------------------------------


@dataclass(frozen=True)
class ConvergentSeq:
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def fractions(self) -> list[Fraction]:
        return [Fraction(p, q) for p, q in self.convergents]


def convergents(rho: QuadraticIrrational, count: int) -> ConvergentSeq:
    """First ``count`` partial quotients and convergents p_k/q_k of ``rho`` (exact)."""
    if count < 1:
        raise ValueError("count must be positive")
    x = rho.value
    quotients, pairs = [], []
    p_prev, p, q_prev, q = 0, 1, 1, 0
    for _ in range(count):
        a = surd_floor(x)
        quotients.append(a)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        pairs.append((p, q))
        x = (x - a).inverse()
    return ConvergentSeq(tuple(quotients), tuple(pairs))


# -- partial sums ----------------------------------------------------------------


@dataclass(frozen=True)
class PartialSum:
    """A truncated sum with a rounding bound; ``tail_bound`` is None when the tail is unknown."""

    value: mpf | mpc
    terms: int
    precision_bits: int
    rounding_bound: mpf
    tail_bound: mpf | None = None

    @property
    def error_bound(self) -> mpf | None:
        if self.tail_bound is None:
            return None
        return self.rounding_bound + self.tail_bound


def _twist_weight(twist: str | None, n: int) -> int:
    if twist is None:
        return 1
    if twist == "alt":
        return 1 if n % 2 else -1
    if twist == "odd":
        return n % 2
    if twist == "chi4":
        return (0, 1, 0, -1)[n % 4]
    raise ValueError(f"unknown twist {twist!r}")


def _half_multiples(rho: QuadraticIrrational, terms: int, bits: int):
    """Yield ``(n, F_n)`` with ``F_n = floor(frac(n*rho/2) * 2^bits)`` computed exactly."""
    p, q, r, d = rho.p, rho.q, rho.r, rho.d
    m = 2 * r
    one = 1 << bits
    scale2 = (one * one) * d
    for n in range(1, terms + 1):
        root = isqrt(n * n * q * q * scale2)
        if q < 0:
            root = -root - 1  # n*q*sqrt(d)*2^bits is never an integer
        yield n, ((n * p * one + root) // m) % one


def _real_partial_sum(a, b, s, rho, terms, prec, twist) -> PartialSum:
    wp = _work_prec(prec, terms)
    with mpmath.workprec(wp):
        total = mpf(0)
        magnitude = mpf(0)
        scale = mpf(2) ** (-wp)
        for n, frac in _half_multiples(rho, terms, wp):
            w = _twist_weight(twist, n)
            if not w:
                continue
            x = 2 * frac * scale  # pi*n*rho = pi*x mod 2*pi
            term = (mpmath.cospi(x) ** (-a)) * (mpmath.sinpi(x) ** (-b)) / (mpf(n) ** s)
            total += term if w > 0 else -term
            magnitude += abs(term)
        # a few ulps per term of relative error at the working precision
        bound = magnitude * (8 + abs(a) + abs(b)) * terms * scale
    with mpmath.workprec(prec):
        return PartialSum(+total, terms, prec, bound)


def _as_complex(tau) -> mpc:
    if isinstance(tau, tuple):
        return mpc(_mpf(tau[0]), _mpf(tau[1]))
    return mpc(tau)


def _i_power(k: int) -> mpc:
    return (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))[k % 4]


def _uhp_partial_sum(a, b, s, tau, terms, prec, twist) -> PartialSum:
    wp = _work_prec(prec, terms)
    with mpmath.workprec(wp):
        t = _as_complex(tau)
        if t.imag <= 0:
            raise ValueError("tau must lie in the upper half-plane")
        q = mpmath.expjpi(t)
        ib = _i_power(b)
        total = mpc(0)
        qn = mpc(1)
        for n in range(1, terms + 1):
            qn *= q
            w = _twist_weight(twist, n)
            if not w:
                continue
            q2 = qn * qn
            term = (2 * qn) ** (a + b) * ib / ((1 + q2) ** a * (q2 - 1) ** b) / mpf(n) ** s
            total += term if w > 0 else -term
        bound = abs(total) * terms * mpf(2) ** (-wp + 4)
    with mpmath.workprec(prec):
        return PartialSum(+total, terms, prec, bound)


def partial_sum(a: int, b: int, s: int, tau, terms: int = DEFAULT_TERMS, prec: int = DEFAULT_PREC,
                twist: str | None = None) -> PartialSum:
    """``sum_{n <= terms} w(n) sec^a csc^b (pi n tau) / n^s``.

    ``tau`` is a QuadraticIrrational (real line) or a point of the upper
    half-plane given as a complex number, an mpc, or a pair ``(re, im)``.
    ``twist`` selects w(n): None, ``"alt"`` ((-1)^(n+1)), ``"odd"`` (odd n
    only) or ``"chi4"`` (the character mod 4).
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    if isinstance(tau, QuadraticIrrational):
        return _real_partial_sum(a, b, s, tau, terms, prec, twist)
    return _uhp_partial_sum(a, b, s, tau, terms, prec, twist)


# -- upper half-plane values with derivatives --------------------------------------

_TAN_STEP = Polynomial((1, 0, 1))  # 1 + x^2


@dataclass(frozen=True)
class _DerivativeRule:
    """``g^(j)(z) = lead(z) * poly_j(var(z))`` for one of sec, csc, tan, cot."""

    lead: bool  # multiply by g itself (sec, csc) or not (tan, cot)
    sign: int  # var' = sign * (1 + var^2)


_RULES = {(1, 0): _DerivativeRule(True, 1), (0, 1): _DerivativeRule(True, 1),
          (1, -1): _DerivativeRule(False, 1), (-1, 1): _DerivativeRule(False, -1)}


def derivative_polynomial(trig: tuple[int, int], j: int) -> Polynomial:
    """Polynomial ``P`` with ``g^(j) = g * P(tan)`` (sec), ``csc * P(-cot)`` (csc), ``P(tan)``, ``P(cot)``."""
    rule = _RULES[trig]
    poly = Polynomial.const(1) if rule.lead else Polynomial.x()
    for _ in range(j):
        if rule.lead:
            # (g P(v))' = g v P(v) + g (1 + v^2) P'(v)
            poly = Polynomial.x() * poly + _TAN_STEP * poly.derivative()
        else:
            poly = _TAN_STEP * poly.derivative() * rule.sign
    return poly


def _poly_at(coeffs, v):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * v + c
    return acc


def _derivative_from_q(trig, coeffs, qn, q2):
    if trig == (1, 0):
        return 2 * qn / (1 + q2) * _poly_at(coeffs, mpc(0, -1) * (q2 - 1) / (q2 + 1))
    if trig == (0, 1):
        return mpc(0, 2) * qn / (q2 - 1) * _poly_at(coeffs, mpc(0, -1) * (q2 + 1) / (q2 - 1))
    if trig == (1, -1):
        return _poly_at(coeffs, mpc(0, -1) * (q2 - 1) / (q2 + 1))
    return _poly_at(coeffs, mpc(0, 1) * (q2 + 1) / (q2 - 1))


def _uhp_terms(decay_rate, y, prec) -> int:
    return max(8, math.ceil((prec + 24) * math.log(2) / (math.pi * decay_rate * float(y))) + 8)


def uhp_value(trig: tuple[int, int], s: int, tau, j: int = 0, prec: int = 256) -> PartialSum:
    """``(D^j psi^{a,b}_s)(tau)`` for Im tau > 0, summed until the geometric tail is negligible.

    Derivatives (j > 0) are available for sec, csc, tan and cot.
    """
    a, b = trig
    if a + b < 0:
        raise ValueError(f"psi^({a},{b}) diverges off the real line")
    if j and trig not in _RULES:
        raise ValueError("derivatives are only implemented for sec, csc, tan and cot")
    t0 = _as_complex(tau)
    if t0.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    y = t0.imag
    terms = _uhp_terms(max(a + b, 1), y, prec)
    wp = _work_prec(prec, terms) + 8 * j
    with mpmath.workprec(wp):
        t = _as_complex(tau)
        q = mpmath.expjpi(t)
        limit = _i_power(-b) if a + b == 0 and j == 0 else mpc(0)
        coeffs = [_mpf(c) for c in derivative_polynomial(trig, j).coeffs] if trig in _RULES else None
        ib = _i_power(b)
        total = mpc(0)
        qn = mpc(1)
        last = mpc(0)
        for n in range(1, terms + 1):
            qn *= q
            q2 = qn * qn
            if coeffs is not None:
                f = _derivative_from_q(trig, coeffs, qn, q2)
            else:
                f = (2 * qn) ** (a + b) * ib / ((1 + q2) ** a * (q2 - 1) ** b)
            last = (f - limit) * mpf(n) ** (j - s)
            total += last
        if limit:
            total += limit * mpmath.zeta(s)
        total *= mpmath.pi**j
        ratio = abs(q) ** max(a + b, 1)
        tail = abs(last) * mpmath.pi**j * ratio / (1 - ratio) * 4
        bound = (abs(total) + 1) * terms * mpf(2) ** (-wp + 8)
    with mpmath.workprec(prec):
        return PartialSum(+total, terms, prec, +bound, +tail)


# -- cocycle residuals ---------------------------------------------------------------


def rational_function_at(f: RationalFunction, t):
    """Evaluate an exact rational function at an mpmath number."""
    num = _poly_at([_mpf(c) for c in f.num.coeffs], t)
    den = _poly_at([_mpf(c) for c in f.den.coeffs], t)
    return num / den


def cocycle_residual(kind: SeriesKind, g: UnimodularMatrix, s: int, tau, prec: int = 256) -> mpf:
    """``|(c tau + d)^(s-1) psi(g tau) - psi(tau) - pi^s p_s(g; tau)|`` in the upper half-plane."""
    body = period_of(kind, g, s).body
    with mpmath.workprec(prec + 32):
        t = _as_complex(tau)
        gt = (g.a * t + g.b) / (g.c * t + g.d)
        lhs = (g.c * t + g.d) ** (s - 1) * uhp_value(kind.trig, s, gt, 0, prec + 32).value
        rhs = uhp_value(kind.trig, s, t, 0, prec + 32).value + mpmath.pi**s * rational_function_at(body, t)
        res = abs(lhs - rhs)
    with mpmath.workprec(prec):
        return +res


def lifted_cocycle_residual(kind: SeriesKind, g: UnimodularMatrix, s: int, j: int, tau,
                            prec: int = 256) -> mpf:
    """Residual of the lifted transformation law of ``D^j psi_s`` under ``g`` at ``tau``."""
    P = lifted_cocycles(kind, s, g, j)[j]
    with mpmath.workprec(prec + 32):
        t = _as_complex(tau)
        gt = (g.a * t + g.b) / (g.c * t + g.d)
        auto = g.c * t + g.d
        derivs = [uhp_value(kind.trig, s, t, m, prec + 32).value for m in range(j + 1)]
        lhs = auto ** (s - 2 * j - 1) * uhp_value(kind.trig, s, gt, j, prec + 32).value - derivs[j]
        rhs = mpmath.pi**s * rational_function_at(P.free, t)
        for m, f in enumerate(P.deriv_coeffs):
            rhs += rational_function_at(f, t) * derivs[m]
        res = abs(lhs - rhs)
    with mpmath.workprec(prec):
        return +res


# -- identity gates --------------------------------------------------------------------


def combination_value(lc, tau, prec: int = 256):
    """Numerical value of a LinearCombination at a point of the upper half-plane."""
    with mpmath.workprec(prec + 32):
        t = _as_complex(tau)
        total = mpc(0)
        for term in lc:
            point = _mpf(term.scale) * t + _mpf(term.shift)
            v = uhp_value(term.trig, term.weight, point, term.j, prec + 32).value
            total += _mpf(term.coeff) * v / mpmath.pi**term.j
    return total


def combination_residual(a: int, b: int, s: int, lc, tau=(0, 2), prec: int = 256) -> mpf:
    """``|psi^{a,b}_s(tau) - lc(tau)|``; both sides must converge at ``tau``."""
    lhs = uhp_value((a, b), s, tau, 0, prec).value
    with mpmath.workprec(prec):
        return abs(lhs - combination_value(lc, tau, prec))


def trig_derivative_at(trig: tuple[int, int], j: int, z) -> mpc:
    """``g^(j)(z)`` for any complex z (general (a, b) only for j = 0)."""
    z = mpmath.mpmathify(z)
    a, b = trig
    if j == 0:
        return mpmath.sec(z) ** a * mpmath.csc(z) ** b
    poly = [_mpf(c) for c in derivative_polynomial(trig, j).coeffs]
    if trig == (1, 0):
        return mpmath.sec(z) * _poly_at(poly, mpmath.tan(z))
    if trig == (0, 1):
        return mpmath.csc(z) * _poly_at(poly, -mpmath.cot(z))
    if trig == (1, -1):
        return _poly_at(poly, mpmath.tan(z))
    return _poly_at(poly, mpmath.cot(z))


def pointwise_residual(a: int, b: int, lc, z, prec: int = 256) -> mpf:
    """``|trig^{a,b}(z) - sum coeff * g^(j)(z)|``: a termwise check for combinations with unit scale.

    Every term of the combination must satisfy ``weight - j == s``, which is
    how the reduction and operator identities are built.
    """
    with mpmath.workprec(prec):
        lhs = trig_derivative_at((a, b), 0, z)
        rhs = 0
        for term in lc:
            if term.scale != 1 or term.shift != 0:
                raise ValueError("pointwise check needs unscaled terms")
            rhs += _mpf(term.coeff) * trig_derivative_at(term.trig, term.j, z)
        return abs(lhs - rhs) / max(abs(lhs), 1)


# -- verification reports ------------------------------------------------------------------


def exact_to_mpf(coeff: SurdValue, pi_power: int, prec: int = DEFAULT_PREC) -> mpf:
    with mpmath.workprec(prec + 16):
        v = surd_to_mpf(coeff) * mpmath.pi**pi_power
    with mpmath.workprec(prec):
        return +v


def decimal_string(v, digits: int = 40) -> str:
    return mpmath.nstr(v, digits, min_fixed=-6, max_fixed=12)


@dataclass(frozen=True)
class VerificationReport:
    terms_used: int
    precision_bits: int
    numeric_value: mpf
    exact_value: mpf
    abs_error: mpf
    rel_error: mpf
    tolerance: float
    relative: bool
    passed: bool

    def to_json(self) -> dict:
        return {
            "terms": self.terms_used,
            "precision_bits": self.precision_bits,
            "numeric": decimal_string(self.numeric_value, 30),
            "exact_decimal": decimal_string(self.exact_value, 30),
            "abs_error": mpmath.nstr(self.abs_error, 6),
            "rel_error": mpmath.nstr(self.rel_error, 6),
            "tolerance": repr(self.tolerance),
            "mode": "relative" if self.relative else "absolute",
            "pass": self.passed,
        }


_TWIST_SERIES = {"alt_csc": ((0, 1), "alt"), "odd_tan": ((1, -1), "odd"), "chi_sec": ((1, 0), "chi4")}


def numeric_for(ev, terms: int = DEFAULT_TERMS, prec: int = DEFAULT_PREC) -> PartialSum:
    """Direct partial sum of the series an Evaluation describes."""
    what, s, rho = ev.query
    if isinstance(what, str):
        trig, twist = _TWIST_SERIES[what]
        return partial_sum(*trig, s, rho, terms, prec, twist)
    ps = partial_sum(*what, s, rho, terms, prec)
    if tuple(what) == (0, 0):
        # every term is 1/n^s, so the tail is the Hurwitz zeta value zeta(s, N+1)
        with mpmath.workprec(_work_prec(prec, terms)):
            tail = mpmath.zeta(s, terms + 1)
            total = ps.value + tail
        with mpmath.workprec(prec):
            return PartialSum(+total, terms, prec, ps.rounding_bound + mpf(2) ** (-prec), mpf(0))
    return ps


def verify(ev, terms: int = DEFAULT_TERMS, prec: int = DEFAULT_PREC, tol: float = DEFAULT_REL_TOL,
           relative: bool = True) -> VerificationReport:
    """Compare an exact Evaluation with a direct partial sum (heuristic agreement on the real line)."""
    ps = numeric_for(ev, terms, prec)
    with mpmath.workprec(prec):
        exact = exact_to_mpf(ev.coeff, ev.pi_power, prec)
        err = abs(ps.value - exact)
        rel = err / abs(exact) if exact else err
        passed = bool((rel if relative else err) <= tol)
    return VerificationReport(terms, prec, ps.value, exact, err, rel, tol, relative, passed)
