"""Truncated Laurent series in z with rational-function coefficients in tau."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..errors import InsufficientPrecision
from .poly import Polynomial, RationalFunction


def _rf(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return RationalFunction._raw(v, Polynomial.const(1))
    return RationalFunction.const(v)


@dataclass(frozen=True)
class LaurentSeries:
    """``sum_i coeffs[i] * z^(lowest_index + i)``, exact for indices below ``truncation_order``."""

    lowest_index: int
    coeffs: tuple[RationalFunction, ...]
    truncation_order: int

    def __post_init__(self):
        coeffs = [_rf(c) for c in self.coeffs]
        low = self.lowest_index
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            low += 1
        # drop anything at or beyond the truncation order
        coeffs = coeffs[: max(self.truncation_order - low, 0)]
        if not coeffs:
            low = self.truncation_order
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "lowest_index", low)

    @classmethod
    def monomial(cls, k: int, order: int, coeff=1) -> LaurentSeries:
        return cls(k, (coeff,), order)

    @classmethod
    def sin_of(cls, scale, order: int) -> LaurentSeries:
        """``sin(scale*z)`` known through ``z^(order-1)``; ``scale`` is a polynomial in tau."""
        scale = scale if isinstance(scale, Polynomial) else Polynomial.const(scale)
        coeffs = []
        power = Polynomial.const(1)  # scale^i
        for i in range(order):
            if i % 2:
                sign = -1 if (i // 2) % 2 else 1
                coeffs.append(power * Fraction(sign, factorial(i)))
            else:
                coeffs.append(Polynomial())
            power = power * scale
        return cls(0, tuple(coeffs), order)

    def coefficient(self, k: int) -> RationalFunction:
        if k >= self.truncation_order:
            raise InsufficientPrecision(f"coefficient of z^{k} requested beyond order {self.truncation_order}")
        i = k - self.lowest_index
        if i < 0 or i >= len(self.coeffs):
            return RationalFunction.zero()
        return self.coeffs[i]

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        if not self.coeffs or not other.coeffs:
            order = min(self.truncation_order + other.lowest_index, other.truncation_order + self.lowest_index)
            return LaurentSeries(order, (), order)
        low = self.lowest_index + other.lowest_index
        # relative precision of a product is the smaller relative precision
        rel = min(self.truncation_order - self.lowest_index, other.truncation_order - other.lowest_index)
        out = [RationalFunction.zero()] * rel
        for i, u in enumerate(self.coeffs[:rel]):
            if u.is_zero():
                continue
            for j, v in enumerate(other.coeffs[: rel - i]):
                if not v.is_zero():
                    out[i + j] = out[i + j] + u * v
        return LaurentSeries(low, tuple(out), low + rel)

    def __truediv__(self, other: LaurentSeries) -> LaurentSeries:
        if not other.coeffs:
            raise InsufficientPrecision("divisor has no known nonzero coefficient")
        if not self.coeffs:
            order = self.truncation_order - other.lowest_index
            return LaurentSeries(order, (), order)
        low = self.lowest_index - other.lowest_index
        rel = min(self.truncation_order - self.lowest_index, other.truncation_order - other.lowest_index)
        v0 = other.coeffs[0]
        inv0 = v0.inverse()
        w: list[RationalFunction] = []
        for i in range(rel):
            acc = self.coeffs[i] if i < len(self.coeffs) else RationalFunction.zero()
            for j in range(1, i + 1):
                if j < len(other.coeffs) and not other.coeffs[j].is_zero() and not w[i - j].is_zero():
                    acc = acc - other.coeffs[j] * w[i - j]
            w.append(acc * inv0)
        return LaurentSeries(low, tuple(w), low + rel)


def laurent_div_coefficient(num: LaurentSeries, den: LaurentSeries, k: int) -> RationalFunction:
    """Coefficient of ``z^k`` in ``num/den``."""
    if not den.coeffs:
        raise InsufficientPrecision("divisor has no known nonzero coefficient")
    return (num / den).coefficient(k)
