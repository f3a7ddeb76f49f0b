"""Exact arithmetic in real quadratic fields Q(sqrt(d))."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from ..errors import NonRealInput, RationalInput

Number = int | Fraction


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(f, m)`` with ``n == f*f*m`` and ``m`` squarefree (n > 0)."""
    if n <= 0:
        raise ValueError("n must be positive")
    f, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            f *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    return f, m * n


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _frac(v: Number) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True, slots=True)
class SurdValue:
    """The number ``x + y*sqrt(d)`` with rational ``x, y`` and squarefree ``d > 1``.

    Values from different fields only mix when one of them is rational.
    """

    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self):
        if not isinstance(self.x, Fraction):
            object.__setattr__(self, "x", Fraction(self.x))
        if not isinstance(self.y, Fraction):
            object.__setattr__(self, "y", Fraction(self.y))
        if self.d <= 1:
            raise ValueError(f"field discriminant must be > 1, got {self.d}")

    @classmethod
    def rational(cls, v: Number, d: int) -> SurdValue:
        return cls(_frac(v), Fraction(0), d)

    @classmethod
    def sqrt(cls, d: int) -> SurdValue:
        return cls(Fraction(0), Fraction(1), d)

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other) -> SurdValue | None:
        if isinstance(other, SurdValue):
            if other.d == self.d:
                return other
            if other.y == 0:
                return SurdValue(other.x, Fraction(0), self.d)
            if self.y == 0:
                return None  # handled by the caller swapping fields
            raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
        if isinstance(other, (int, Fraction)):
            return SurdValue(_frac(other), Fraction(0), self.d)
        return None

    def _field_of(self, other) -> SurdValue:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, SurdValue):
                # self is rational, other is not: move self into other's field
                return other
            raise TypeError(other)
        return o

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (SurdValue, int, Fraction)):
            return NotImplemented
        o = self._field_of(other)
        return SurdValue(self.x + o.x, self.y + o.y, o.d if self.y == 0 else self.d)

    __radd__ = __add__

    def __neg__(self):
        return SurdValue(-self.x, -self.y, self.d)

    def __sub__(self, other):
        if not isinstance(other, (SurdValue, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SurdValue(self.x * other, self.y * other, self.d)
        if not isinstance(other, SurdValue):
            return NotImplemented
        o = self._field_of(other)
        d = o.d if self.y == 0 else self.d
        return SurdValue(self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def conjugate(self) -> SurdValue:
        return SurdValue(self.x, -self.y, self.d)

    def inverse(self) -> SurdValue:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(d))")
        return SurdValue(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return SurdValue(self.x / other, self.y / other, self.d)
        if not isinstance(other, SurdValue):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = SurdValue(Fraction(1), Fraction(0), self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ---------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``x + y*sqrt(d)``."""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: compare x^2 with d*y^2
        diff = self.x * self.x - self.d * self.y * self.y
        return sx if diff > 0 else sy

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if not isinstance(other, SurdValue):
            return NotImplemented
        if self.y == 0 and other.y == 0:
            return self.x == other.x
        return self.d == other.d and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_rational(self) -> bool:
        return self.y == 0

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __float__(self):
        # display only; never used for decisions
        return float(self.x) + float(self.y) * self.d**0.5

    def __repr__(self):
        return f"SurdValue({self.x}, {self.y}, d={self.d})"

    def __str__(self):
        if self.y == 0:
            return str(self.x)
        root = f"sqrt({self.d})"
        ypart = root if self.y == 1 else f"-{root}" if self.y == -1 else f"{self.y}*{root}"
        if self.x == 0:
            return ypart
        sep = " - " if self.y < 0 else " + "
        return f"{self.x}{sep}{ypart.lstrip('-')}"

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {"d": self.d, "x": fraction_str(self.x), "y": fraction_str(self.y)}

    @classmethod
    def from_json(cls, obj: dict) -> SurdValue:
        return cls(Fraction(obj["x"]), Fraction(obj["y"]), int(obj["d"]))


def fraction_str(v: Fraction) -> str:
    """Canonical ``num/den`` rendering (denominator always present)."""
    return f"{v.numerator}/{v.denominator}"


def surd_floor(v: SurdValue) -> int:
    """Exact floor of ``x + y*sqrt(d)`` using integer square roots only."""
    m = v.x.denominator * v.y.denominator // gcd(v.x.denominator, v.y.denominator)
    a = v.x.numerator * (m // v.x.denominator)
    b = v.y.numerator * (m // v.y.denominator)
    # v = (a + b*sqrt(d)) / m with m > 0
    t = b * b * v.d
    s = isqrt(t)
    if s * s == t:
        return (a + (s if b >= 0 else -s)) // m
    if b > 0:
        return (a + s) // m
    return (a - s - 1) // m


def frac_part(v: SurdValue) -> SurdValue:
    return v - surd_floor(v)


@dataclass(frozen=True, slots=True)
class QuadraticIrrational:
    """A real quadratic irrationality ``(p + q*sqrt(d)) / r`` in canonical form.

    ``A*x^2 + B*x + C`` is its primitive minimal polynomial with ``A > 0`` and
    ``disc = B^2 - 4AC``.
    """

    p: int
    q: int
    r: int
    d: int
    A: int
    B: int
    C: int
    disc: int

    @property
    def value(self) -> SurdValue:
        return SurdValue(Fraction(self.p, self.r), Fraction(self.q, self.r), self.d)

    @classmethod
    def from_value(cls, v: SurdValue) -> QuadraticIrrational:
        m = v.x.denominator * v.y.denominator // gcd(v.x.denominator, v.y.denominator)
        return normalize_surd(v.x.numerator * (m // v.x.denominator),
                              v.y.numerator * (m // v.y.denominator), m, v.d)

    def affine(self, scale: Number = 1, shift: Number = 0) -> QuadraticIrrational:
        """The re-normalized point ``scale*self + shift``."""
        return QuadraticIrrational.from_value(self.value * _frac(scale) + _frac(shift))

    def conjugate(self) -> QuadraticIrrational:
        return QuadraticIrrational.from_value(self.value.conjugate())

    def is_pure_root(self) -> bool:
        """True when the square of the point is rational."""
        return self.p == 0

    def minpoly_at(self, v: SurdValue) -> SurdValue:
        return self.A * v * v + self.B * v + self.C

    def __str__(self):
        return str(self.value)


def normalize_surd(p: int, q: int, r: int, d: int) -> QuadraticIrrational:
    """Canonical representative of ``(p + q*sqrt(d)) / r``."""
    if r == 0:
        raise ZeroDivisionError("r must be nonzero")
    if d < 0:
        raise NonRealInput(f"sqrt({d}) is not real")
    if q == 0 or d == 0:
        raise RationalInput("value is rational (q = 0 or d = 0); a quadratic irrationality is required")
    f, d0 = squarefree_split(d)
    q *= f
    if d0 == 1:
        raise RationalInput(f"sqrt({d}) = {f} is rational; a quadratic irrationality is required")
    if r < 0:
        p, q, r = -p, -q, -r
    g = gcd(gcd(p, q), r)
    p, q, r = p // g, q // g, r // g
    # (x - rho)(x - rho') scaled by r^2
    A, B, C = r * r, -2 * p * r, p * p - q * q * d0
    h = gcd(gcd(A, B), C)
    A, B, C = A // h, B // h, C // h
    disc = B * B - 4 * A * C
    rho = QuadraticIrrational(p, q, r, d0, A, B, C, disc)
    assert disc > 0 and not is_square(disc)
    return rho
