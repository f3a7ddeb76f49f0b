"""Dense univariate polynomials and rational functions over Q.

Rational functions are kept in lowest terms with a monic denominator, so two
equal functions have identical coefficient tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [v if isinstance(v, Fraction) else Fraction(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True, slots=True)
class Polynomial:
    """``coeffs[i]`` is the coefficient of ``tau**i``; the zero polynomial is ``()``."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> Polynomial:
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def const(cls, v) -> Polynomial:
        return cls((v,))

    @classmethod
    def x(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def linear(cls, a, b) -> Polynomial:
        """``a*tau + b``."""
        return cls((b, a))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                other = Polynomial.const(other)
            else:
                return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(tuple(-v for v in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial()
            return Polynomial._raw(tuple(v * other for v in self.coeffs))
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    out[i + j] += u * v
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        result = Polynomial.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lead = other.lead
        if len(rem) <= db:
            return Polynomial(), self
        quo = [_ZERO] * (len(rem) - db)
        bc = other.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                c = c / lead
                quo[i - db] = c
                for j in range(db + 1):
                    rem[i - db + j] -= c * bc[j]
        return Polynomial(quo), Polynomial(rem[:db])

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def exact_div(self, other: Polynomial) -> Polynomial:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> Polynomial:
        if not self.coeffs or self.lead == 1:
            return self
        inv = 1 / self.lead
        return Polynomial._raw(tuple(v * inv for v in self.coeffs))

    def derivative(self) -> Polynomial:
        return Polynomial(i * v for i, v in enumerate(self.coeffs) if i)

    def __call__(self, t):
        """Horner evaluation; ``t`` may be any ring element supporting + and *."""
        acc = None
        for v in reversed(self.coeffs):
            acc = v if acc is None else acc * t + v
        if acc is None:
            return _ZERO
        # a constant polynomial still returns an object of t's kind
        if len(self.coeffs) == 1 and not isinstance(t, (int, Fraction)):
            return t * 0 + acc
        return acc

    def compose_mobius(self, a, b, c, d) -> Polynomial:
        """Homogenized substitution: ``(c*t+d)^n * P((a*t+b)/(c*t+d))`` with ``n = deg P``."""
        n = self.degree
        if n <= 0:
            return self
        num = Polynomial.linear(a, b)
        den = Polynomial.linear(c, d)
        num_pows = [Polynomial.const(1)]
        den_pows = [Polynomial.const(1)]
        for _ in range(n):
            num_pows.append(num_pows[-1] * num)
            den_pows.append(den_pows[-1] * den)
        out = Polynomial()
        for i, v in enumerate(self.coeffs):
            if v:
                out = out + num_pows[i] * den_pows[n - i] * v
        return out

    def to_str(self, var: str = "tau") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            v = self.coeffs[i]
            if not v:
                continue
            mag = abs(v)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if v < 0 else "+"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero if both are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return Polynomial.const(1)
    a, b = a.monic(), b.monic()
    while b:
        a, b = b, (a % b).monic()
    return a


@dataclass(frozen=True, slots=True)
class RationalFunction:
    """``num/den`` over Q, reduced, with monic denominator."""

    num: Polynomial
    den: Polynomial = Polynomial((1,))

    def __post_init__(self):
        num, den = self.num, self.den
        if not isinstance(num, Polynomial):
            num = Polynomial.const(num)
        if not isinstance(den, Polynomial):
            den = Polynomial.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial.const(1)
        elif not den.is_const():
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lead
        if lead != 1:
            num, den = num * (1 / lead), den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> RationalFunction:
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num)
        object.__setattr__(obj, "den", den)
        return obj

    @classmethod
    def const(cls, v) -> RationalFunction:
        return cls._raw(Polynomial.const(v), Polynomial.const(1))

    @classmethod
    def zero(cls) -> RationalFunction:
        return cls._raw(Polynomial(), Polynomial.const(1))

    @classmethod
    def x(cls) -> RationalFunction:
        return cls._raw(Polynomial.x(), Polynomial.const(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def __bool__(self):
        return not self.num.is_zero()

    @staticmethod
    def _lift(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction._raw(other, Polynomial.const(1))
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            if self.den.is_one():
                return RationalFunction._raw(self.num + o.num, self.den)
            return RationalFunction(self.num + o.num, self.den)
        g = poly_gcd(self.den, o.den)
        if g.is_one():
            return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)
        sd, od = self.den.exact_div(g), o.den.exact_div(g)
        return RationalFunction(self.num * od + o.num * sd, self.den * od)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalFunction.zero()
            return RationalFunction._raw(self.num * other, self.den)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RationalFunction.zero()
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num, o.den) if g1.is_one() else (self.num.exact_div(g1), o.den.exact_div(g1))
        n2, d1 = (o.num, self.den) if g2.is_one() else (o.num.exact_div(g2), self.den.exact_div(g2))
        num, den = n1 * n2, d1 * d2
        lead = den.lead
        if lead != 1:
            num, den = num * (1 / lead), den.monic()
        return RationalFunction._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction._raw(self.num**e, self.den**e)

    def derivative(self) -> RationalFunction:
        if self.den.is_one():
            return RationalFunction._raw(self.num.derivative(), self.den)
        num = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RationalFunction(num, self.den * self.den)

    def __call__(self, t):
        den = self.den(t)
        if den == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(t) / den

    def slash(self, a: int, b: int, c: int, d: int, weight: int) -> RationalFunction:
        """``(c*tau+d)^(-weight) * f((a*tau+b)/(c*tau+d))``."""
        if self.is_zero():
            return self
        num = self.num.compose_mobius(a, b, c, d)
        den = self.den.compose_mobius(a, b, c, d)
        e = max(self.den.degree, 0) - max(self.num.degree, 0) - weight
        lin = Polynomial.linear(c, d)
        if e >= 0:
            num = num * lin**e
        else:
            den = den * lin ** (-e)
        return RationalFunction(num, den)

    def to_str(self, var: str = "tau") -> str:
        if self.den.is_one():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    def __str__(self):
        return self.to_str()
