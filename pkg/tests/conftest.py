from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings

from trigseries.arith.surd import SurdValue, normalize_surd

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def root(d: int):
    return normalize_surd(0, 1, 1, d)


def golden():
    return normalize_surd(1, 1, 2, 5)


def surd(x, y, d) -> SurdValue:
    return SurdValue(Fraction(x), Fraction(y), d)
