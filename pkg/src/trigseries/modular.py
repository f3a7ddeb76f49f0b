"""SL2(Z) matrices, congruence subgroups, Pell equations and generator words."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith.surd import QuadraticIrrational, SurdValue, is_square
from .errors import InternalError, NotInGroup, PerfectSquare, ResourceCap

DEFAULT_MAX_PELL_DIGITS = 10**5
_LOG10_2 = math.log10(2)


@dataclass(frozen=True, slots=True)
class UnimodularMatrix:
    """``[[a, b], [c, d]]`` with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.entries()} is not 1")

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: UnimodularMatrix) -> UnimodularMatrix:
        return UnimodularMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self):
        return UnimodularMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> UnimodularMatrix:
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def __pow__(self, e: int) -> UnimodularMatrix:
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = IDENTITY
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    @property
    def trace(self) -> int:
        return self.a + self.d

    def act(self, tau):
        """Moebius action ``(a*tau + b)/(c*tau + d)``."""
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0

    def __str__(self):
        return ",".join(str(v) for v in self.entries())

    @classmethod
    def parse(cls, text: str) -> UnimodularMatrix:
        from .errors import ParseError

        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ParseError(f"matrix must be 'a,b,c,d', got {text!r}")
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"matrix entries must be integers: {text!r}") from exc
        try:
            return cls(*vals)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
T = UnimodularMatrix(1, 1, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)
R = UnimodularMatrix(1, 0, 1, 1)
T2 = UnimodularMatrix(1, 2, 0, 1)
R2 = UnimodularMatrix(1, 0, 2, 1)

GENERATORS = {"T": T, "S": S, "T2": T2, "R2": R2}
_DISPLAY = {"T": "T", "S": "S", "T2": "T^2", "R2": "R^2"}


@dataclass(frozen=True, slots=True)
class GroupId:
    """``full`` (SL2(Z)), ``principal`` (Gamma(N)) or ``gamma2`` (<T^2, R^2>)."""

    tag: str
    level: int = 1

    def __str__(self):
        if self.tag == "principal":
            return f"Gamma({self.level})"
        return {"full": "SL2(Z)", "gamma2": "Gamma_2"}[self.tag]


FULL_MODULAR = GroupId("full")
GAMMA_TWO = GroupId("gamma2", 2)


def gamma_principal(n: int) -> GroupId:
    if n < 1:
        raise ValueError("level must be positive")
    return GroupId("principal", n)


def is_member(g: UnimodularMatrix, group: GroupId) -> bool:
    if group.tag == "full":
        return True
    if group.tag == "principal":
        n = group.level
        return (g.a - 1) % n == 0 and g.b % n == 0 and g.c % n == 0 and (g.d - 1) % n == 0
    if group.tag == "gamma2":
        return g.b % 2 == 0 and g.c % 2 == 0 and g.a % 4 == 1 and g.d % 4 == 1
    raise ValueError(f"unknown group {group}")


# -- words -------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorWord:
    """``sign * prod(GENERATORS[name]**e for name, e in letters)``."""

    letters: tuple[tuple[str, int], ...] = ()
    sign: int = 1

    def product(self) -> UnimodularMatrix:
        m = IDENTITY
        for name, e in self.letters:
            m = m @ GENERATORS[name] ** e
        return -m if self.sign < 0 else m

    def __len__(self):
        return len(self.letters)

    def render(self) -> list[str]:
        out = []
        for name, e in self.letters:
            g = _DISPLAY[name]
            if e == 1:
                out.append(g)
            elif len(g) == 1:
                out.append(f"{g}^{e}")
            else:
                out.append(f"({g})^{e}")
        return out

    def __str__(self):
        body = "*".join(self.render()) or "I"
        return body if self.sign > 0 else f"-{body}"


def _nearest_quotient(a: int, c: int) -> int:
    """Integer q minimizing |a - q*c| (c != 0); ties go to the smaller |q|."""
    q, r = divmod(a, c)
    # r has the sign of c; candidates q and q+1
    if 2 * abs(r) > abs(c) or (2 * abs(r) == abs(c) and abs(q + 1) < abs(q)):
        q += 1
    return q


def decompose_full(g: UnimodularMatrix) -> GeneratorWord:
    """Write ``g`` as a word in T and S, up to a recorded factor -I."""
    letters: list[tuple[str, int]] = []
    a, b, c, d = g.entries()
    while c != 0:
        q = _nearest_quotient(a, c)
        if q:
            a, b = a - q * c, b - q * d  # T^-q on the left
            letters.append(("T", q))
        a, b, c, d = -c, -d, a, b  # S on the left
        letters.append(("S", -1))
    # remaining matrix is +-T^n
    sign = 1 if a == 1 else -1
    n = b * sign
    if n:
        letters.append(("T", n))
    word = GeneratorWord(tuple(letters), sign)
    if word.product() != g:
        raise InternalError(f"T/S decomposition of {g} failed")
    return word


def decompose_gamma2(g: UnimodularMatrix) -> GeneratorWord:
    """Write ``g`` in Gamma_2 as a word in T^2 and R^2."""
    if not is_member(g, GAMMA_TWO):
        raise NotInGroup(f"{g} is not in Gamma_2 = <T^2, R^2>")
    letters: list[tuple[str, int]] = []
    a, b, c, d = g.entries()
    # a is odd and c is even throughout, so each step strictly shrinks max(|a|, |c|)
    while c != 0:
        if abs(a) > abs(c):
            q = _nearest_quotient(a, 2 * c)
            a, b = a - 2 * q * c, b - 2 * q * d
            letters.append(("T2", q))
        else:
            q = _nearest_quotient(c, 2 * a)
            c, d = c - 2 * q * a, d - 2 * q * b
            letters.append(("R2", q))
    if a != 1 or d != 1 or b % 2:
        raise InternalError(f"Gamma_2 reduction of {g} ended at {(a, b, c, d)}")
    if b:
        letters.append(("T2", b // 2))
    word = GeneratorWord(tuple(letters), 1)
    if word.product() != g:
        raise InternalError(f"T^2/R^2 decomposition of {g} failed")
    return word


# -- Pell equations ----------------------------------------------------------


def cf_sqrt(k: int) -> tuple[int, tuple[int, ...]]:
    """Continued fraction ``[a0; (a1, ..., aL)]`` of sqrt(k)."""
    if k < 2 or is_square(k):
        raise PerfectSquare(f"{k} is a perfect square (or < 2)")
    a0 = isqrt(k)
    m, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = q * a - m
        q = (k - m * m) // q
        a = (a0 + m) // q
        period.append(a)
    return a0, tuple(period)


@dataclass(frozen=True, slots=True)
class PellSolution:
    X: int
    Y: int
    k: int

    def __post_init__(self):
        if self.X * self.X - self.k * self.Y * self.Y != 1:
            raise InternalError(f"({self.X}, {self.Y}) does not solve X^2 - {self.k} Y^2 = 1")


def max_pell_digits() -> int:
    raw = os.environ.get("TDS_MAX_PELL_DIGITS")
    return int(raw) if raw else DEFAULT_MAX_PELL_DIGITS


def _check_cap(x: int, cap: int):
    if x.bit_length() * _LOG10_2 > cap + 1:
        raise ResourceCap(f"Pell solution exceeds {cap} decimal digits (set TDS_MAX_PELL_DIGITS)")


def pell_fundamental(k: int, max_digits: int | None = None) -> PellSolution:
    """Least positive solution of ``X^2 - k*Y^2 = 1``."""
    cap = max_pell_digits() if max_digits is None else max_digits
    a0, period = cf_sqrt(k)
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    # convergent p_{L-1}/q_{L-1} sits just before the closing partial quotient 2*a0
    for a in period[:-1]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        _check_cap(p, cap)
    if len(period) % 2:
        # p^2 - k q^2 = -1: square in Z[sqrt(k)]
        p, q = p * p + k * q * q, 2 * p * q
        _check_cap(p, cap)
    return PellSolution(p, q, k)


def fixing_matrix(rho: QuadraticIrrational, level: int = 1, max_digits: int | None = None) -> UnimodularMatrix:
    """A hyperbolic element of Gamma(level) fixing ``rho``."""
    if level < 1:
        raise ValueError("level must be positive")
    k = rho.disc * level * level
    sol = pell_fundamental(k, max_digits)
    X, Y = sol.X, sol.Y
    if (X - 1) % level:
        # X' = X^2 + kY^2 = 1 + 2kY^2 is 1 mod level^2
        X, Y = X * X + k * Y * Y, 2 * X * Y
        _check_cap(X, max_pell_digits() if max_digits is None else max_digits)
    u = level * Y  # the proportionality factor is 2u' with u' = N*Y
    A, B, C = rho.A, rho.B, rho.C
    g = UnimodularMatrix(X - B * u, -2 * C * u, 2 * A * u, X + B * u)
    if not is_member(g, gamma_principal(level)) or g.is_scalar():
        raise InternalError(f"fixing matrix {g} not a nontrivial element of Gamma({level})")
    if g.act(rho.value) != rho.value:
        raise InternalError(f"{g} does not fix {rho}")
    return g


def fixing_factor(g: UnimodularMatrix, rho: QuadraticIrrational) -> int | None:
    """The ``u`` with ``(c, d - a, -b) = u*(A, B, C)``, or None if ``g`` does not fix ``rho``."""
    if g.c % rho.A:
        return None
    u = g.c // rho.A
    if (g.d - g.a, -g.b) != (u * rho.B, u * rho.C):
        return None
    return u


def automorphy_factor(g: UnimodularMatrix, tau: SurdValue | Fraction | int):
    return g.c * tau + g.d
