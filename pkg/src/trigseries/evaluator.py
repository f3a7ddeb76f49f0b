"""Exact evaluation of psi^{a,b}_s(rho) = sum_n sec^a(pi n rho) csc^b(pi n rho) / n^s.

Pipeline: reduce (a, b) with sec^2 csc^2 = sec^2 + csc^2 to base families,
write each base family as a differential operator applied to sec, tan, csc
or cot, evaluate the derivatives at the fixed point of a hyperbolic matrix
and sum.  Terms with a, b <= 0 are trigonometric polynomials handled by
Bernoulli polynomials.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .arith.bernoulli import bernoulli_poly
from .arith.poly import Polynomial
from .arith.surd import QuadraticIrrational, SurdValue, frac_part
from . import cocycle
from .cocycle import SeriesKind, eval_derivative_at_fixed_point
from .errors import ConvergenceBound, InternalError, ParityError, ParseError

# (a, b) of the four series that carry derivative data
SEC = (1, 0)
CSC = (0, 1)
COT = (-1, 1)
TAN = (1, -1)

_FACTORS = {
    "sec": (1, 0),
    "csc": (0, 1),
    "tan": (1, -1),
    "cot": (-1, 1),
    "cos": (-1, 0),
    "sin": (0, -1),
}

TWISTED_VARIANTS = ("alt_csc", "odd_tan", "chi_sec")


@dataclass(frozen=True)
class TrigSpec:
    """``sec^a * csc^b``."""

    a: int
    b: int

    def __str__(self):
        return trig_name(self.a, self.b)


def trig_name(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("sec" if a == 1 else f"sec^{a}")
    if b:
        parts.append("csc" if b == 1 else f"csc^{b}")
    return "*".join(parts) or "1"


_TOKEN = re.compile(r"\s*(?:(\*)|([a-z]+)(?:\^(-?\d+))?)")


def parse_trig(text: str) -> TrigSpec:
    """Parse products such as ``"cos*cot"``, ``"sec^2"``, ``"tan^3 csc"``."""
    a = b = 0
    pos = 0
    seen = False
    expect_factor = True
    text_len = len(text.rstrip())
    if not text.strip():
        raise ParseError("empty trigonometric expression", 0)
    while pos < text_len:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            if expect_factor:
                raise ParseError("'*' without a preceding factor", m.start(1))
            expect_factor = True
        else:
            name = m.group(2)
            if name not in _FACTORS:
                raise ParseError(f"unknown function {name!r}", m.start(2))
            k = 1
            if m.group(3) is not None:
                k = int(m.group(3))
                if k <= 0:
                    raise ParseError("exponent must be a positive integer", m.start(3))
            fa, fb = _FACTORS[name]
            a += k * fa
            b += k * fb
            seen = True
            expect_factor = False
        pos = m.end()
    if expect_factor:
        raise ParseError("expression ends with '*'" if seen else "no factors", pos)
    return TrigSpec(a, b)


def check_admissible(a: int, b: int, s: int):
    bound = max(a, b, 1) + 1
    if s < bound:
        raise ConvergenceBound(f"convergence: s ≥ max(a,b,1)+1 = {bound} required")
    if (s - b) % 2:
        want = "even" if b % 2 == 0 else "odd"
        raise ParityError(f"parity: s must be {want} for b = {b}")


# -- linear combinations -------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """``coeff * pi^(-j) * (D^j psi^{trig}_{weight})(scale*tau + shift)``."""

    coeff: Fraction
    trig: tuple[int, int]
    weight: int
    j: int = 0
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def at(self, scale: Fraction = Fraction(1), shift: Fraction = Fraction(0)) -> Term:
        """This term with its argument replaced by ``scale*tau + shift``."""
        return Term(self.coeff, self.trig, self.weight, self.j,
                    self.scale * scale, self.scale * shift + self.shift)


@dataclass(frozen=True)
class LinearCombination:
    terms: tuple[Term, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def _collect(acc: dict, key, c):
    acc[key] = acc.get(key, 0) + c
    if acc[key] == 0:
        del acc[key]


def _is_base(a: int, b: int) -> bool:
    if a <= 0 and b <= 0:
        return True
    if a > 0 and b in (0, -1):
        return True
    return b > 0 and a in (0, -1)


def reduce_to_base(a: int, b: int, s: int) -> LinearCombination:
    """Express psi^{a,b}_s through nonpositive (a, b) and the families (a,0), (a,-1), (0,b), (-1,b)."""
    check_admissible(a, b, s)
    pending = {(a, b): Fraction(1)}
    done: dict[tuple[int, int], Fraction] = {}
    while pending:
        (x, y), c = pending.popitem()
        if _is_base(x, y):
            _collect(done, (x, y), c)
        elif x > 0 and y > 0:
            _collect(pending, (x - 2, y), c)
            _collect(pending, (x, y - 2), c)
        elif x < -1:
            _collect(pending, (x + 2, y), c)
            _collect(pending, (x + 2, y - 2), -c)
        else:  # y < -1
            _collect(pending, (x, y + 2), c)
            _collect(pending, (x - 2, y + 2), -c)
    terms = tuple(Term(c, key, s) for key, c in sorted(done.items()))
    return LinearCombination(terms)


def _power_operator(n: int) -> tuple[Polynomial, str]:
    """``(P, g)`` with ``f^n = P(D) g`` for f = sec (g in {sec, tan}); same shape for csc.

    The csc case differs only in the even branch, where csc^2 = -D cot.
    """
    op = Polynomial.const(Fraction(1, factorial(n - 1)))
    D2 = Polynomial((0, 0, 1))
    for k in range(n - 2, 0, -2):
        op = op * (D2 + k * k)
    if n % 2:
        return op, "odd"
    return op * Polynomial.x(), "even"


def operator_decompose(a: int, b: int, s: int) -> LinearCombination:
    """Write a base family as ``sum_j c_j pi^-j D^j psi^g_{s+j}`` with g in {sec, tan, csc, cot}."""
    if a > 0 and b == 0:
        op, par = _power_operator(a)
        g = SEC if par == "odd" else TAN
    elif a == 0 and b > 0:
        op, par = _power_operator(b)
        g = CSC if par == "odd" else COT
        if par == "even":
            op = -op
    elif a > 0 and b == -1:
        if a == 1:
            op, g = Polynomial.const(1), TAN
        else:
            # sec^(a-1) tan = D sec^(a-1) / (a-1)
            inner, par = _power_operator(a - 1)
            op = inner * Polynomial.x() * Fraction(1, a - 1)
            g = SEC if par == "odd" else TAN
    elif a == -1 and b > 0:
        if b == 1:
            op, g = Polynomial.const(1), COT
        else:
            # cot csc^(b-1) = -D csc^(b-1) / (b-1)
            inner, par = _power_operator(b - 1)
            if par == "even":
                inner = -inner
            op = inner * Polynomial.x() * Fraction(-1, b - 1)
            g = CSC if par == "odd" else COT
    else:
        raise ValueError(f"({a}, {b}) is not a base family")
    terms = tuple(Term(c, g, s + j, j) for j, c in enumerate(op.coeffs) if c)
    return LinearCombination(terms)


def cot_identity_terms(term: Term) -> LinearCombination:
    """Rewrite a csc or tan derivative term through cotangent derivatives.

    csc(z) = cot(z/2) - cot(z) and tan(z) = cot(z) - 2 cot(2z).
    """
    j = term.j
    half, two = Fraction(1, 2), Fraction(2)
    if term.trig == CSC:
        parts = [(half**j, half), (Fraction(-1), Fraction(1))]
    elif term.trig == TAN:
        parts = [(Fraction(1), Fraction(1)), (-(two ** (j + 1)), two)]
    else:
        return LinearCombination((term,))
    out = []
    for c, mu in parts:
        t = Term(term.coeff * c, COT, term.weight, j)
        out.append(t.at(term.scale * mu, term.shift))
    return LinearCombination(tuple(out))


# -- evaluation -----------------------------------------------------------------


@dataclass(frozen=True)
class Evaluation:
    """``coeff * pi^pi_power``; ``query`` records what was evaluated."""

    coeff: SurdValue
    pi_power: int
    query: tuple

    @property
    def rho(self) -> QuadraticIrrational:
        return self.query[-1]


def harmonic_expansion(p: int, q: int) -> tuple[str, dict[int, Fraction]]:
    """``cos^p sin^q`` as a cosine (q even) or sine (q odd) polynomial: ``{m: c_m}``."""
    E: dict[int, int] = {}
    for j in range(p + 1):
        for l in range(q + 1):
            k = (2 * j - p) + (2 * l - q)
            E[k] = E.get(k, 0) + comb(p, j) * comb(q, l) * (-1) ** (q - l)
    scale = Fraction(1, 2 ** (p + q))
    out: dict[int, Fraction] = {}
    if q % 2 == 0:
        sgn = (-1) ** (q // 2)
        for k, e in E.items():
            if k > 0 and e:
                out[k] = 2 * scale * sgn * e
        if E.get(0):
            out[0] = scale * sgn * E[0]
        return "cos", out
    sgn = (-1) ** ((q - 1) // 2)
    for k, e in E.items():
        if k > 0 and e:
            out[k] = 2 * scale * sgn * e
    return "sin", out


def _fourier_bernoulli(kind: str, s: int, x):
    """``sum_n trig(2 pi n x)/n^s / pi^s`` for 0 <= x < 1 (trig = cos for even s, sin for odd s)."""
    if kind == "cos":
        k = s // 2
        c = Fraction((-1) ** (k + 1) * 2 ** (2 * k - 1), factorial(2 * k))
    else:
        k = (s - 1) // 2
        c = Fraction((-1) ** (k + 1) * 2 ** (2 * k), factorial(2 * k + 1))
    return c * bernoulli_poly(s, x)


def eval_nonpositive(a: int, b: int, s: int, rho: QuadraticIrrational) -> Evaluation:
    """psi^{a,b}_s(rho) for a, b <= 0: a trigonometric polynomial summed with Bernoulli polynomials."""
    if a > 0 or b > 0:
        raise ValueError("eval_nonpositive needs a <= 0 and b <= 0")
    if s <= 1:
        raise ConvergenceBound(f"convergence: s > 1 required, got s = {s}")
    if (s - b) % 2:
        want = "even" if b % 2 == 0 else "odd"
        raise ParityError(f"parity: s must be {want} for b = {b}")
    kind, coeffs = harmonic_expansion(-a, -b)
    x = rho.value
    total = SurdValue.rational(0, x.d)
    for m, c in coeffs.items():
        # cos(m pi n rho) = cos(2 pi n (m rho / 2))
        point = frac_part(x * Fraction(m, 2)) if m else SurdValue.rational(0, x.d)
        total = total + c * _fourier_bernoulli(kind, s, point)
    return Evaluation(total, s, ((a, b), s, rho))


def eval_csc_tan_derivative(kind: str, j: int, s: int, rho: QuadraticIrrational) -> SurdValue:
    """``(D^j psi^{0,1}_s)(rho)/pi^s`` (kind 'csc') or ``(D^j psi^{1,-1}_s)(rho)/pi^s`` (kind 'tan')."""
    trig = {"csc": CSC, "tan": TAN}[kind]
    if s % 2 == 0:
        raise ParityError(f"parity: the {kind} series needs odd s, got s = {s}")
    if s < 2 * j + 2:
        raise ConvergenceBound(f"convergence: s >= 2j + 2 = {2 * j + 2} required, got s = {s}")
    total = SurdValue.rational(0, rho.d)
    for t in cot_identity_terms(Term(Fraction(1), trig, s, j)):
        point = rho.affine(t.scale, t.shift)
        v = eval_derivative_at_fixed_point(SeriesKind.COTANGENT, t.j, t.weight, point)
        total = total + t.coeff * v
    return total


def _base_derivative(trig: tuple[int, int], j: int, s: int, rho: QuadraticIrrational) -> SurdValue:
    if trig == SEC:
        return eval_derivative_at_fixed_point(SeriesKind.SECANT, j, s, rho)
    if trig == COT:
        return eval_derivative_at_fixed_point(SeriesKind.COTANGENT, j, s, rho)
    if trig == CSC:
        return eval_csc_tan_derivative("csc", j, s, rho)
    if trig == TAN:
        return eval_csc_tan_derivative("tan", j, s, rho)
    raise ValueError(f"no derivative data for trig {trig}")


def _containment_check(coeff: SurdValue, a: int, b: int, s: int, rho: QuadraticIrrational):
    if coeff.d != rho.d and not coeff.is_rational():
        raise InternalError(f"value {coeff} left Q(sqrt({rho.d}))")
    if rho.is_pure_root() and a + b >= 0:
        ratio = coeff / rho.value**s
        if not ratio.is_rational():
            raise InternalError(f"psi^({a},{b})_{s}({rho}) = {coeff} pi^{s} is not in (pi rho)^s Q")


@lru_cache(maxsize=4096)
def evaluate(a: int, b: int, s: int, rho: QuadraticIrrational) -> Evaluation:
    """``psi^{a,b}_s(rho)`` as an exact element of pi^s Q(rho)."""
    check_admissible(a, b, s)
    total = SurdValue.rational(0, rho.d)
    for term in reduce_to_base(a, b, s):
        x, y = term.trig
        if x <= 0 and y <= 0:
            total = total + term.coeff * eval_nonpositive(x, y, s, rho).coeff
            continue
        for sub in operator_decompose(x, y, s):
            total = total + term.coeff * sub.coeff * _base_derivative(sub.trig, sub.j, sub.weight, rho)
    _containment_check(total, a, b, s, rho)
    return Evaluation(total, s, ((a, b), s, rho))


def eval_twisted(variant: str, s: int, rho: QuadraticIrrational) -> Evaluation:
    """The alternating csc, odd-index tan and chi_{-4} sec series at ``rho``.

    alt_csc = sum (-1)^(n+1) csc(pi n rho)/n^s
    odd_tan = sum_{n odd} tan(pi n rho)/n^s
    chi_sec = sum chi_{-4}(n) sec(pi n rho)/n^s
    """
    variant = variant.replace("-", "_")
    if variant not in TWISTED_VARIANTS:
        raise ValueError(f"unknown twisted series {variant!r}")
    if s % 2 == 0:
        raise ParityError(f"parity: s must be odd for {variant.replace('_', '-')}")
    half = Fraction(1, 2)
    two_s = Fraction(1, 2**s)
    if variant == "alt_csc":
        coeff = -evaluate(*CSC, s, rho.affine(1, 1)).coeff
    elif variant == "odd_tan":
        coeff = (two_s * evaluate(*COT, s, rho.affine(2)).coeff
                 - evaluate(*COT, s, rho.affine(1, half)).coeff)
    else:
        coeff = (evaluate(*CSC, s, rho.affine(1, half)).coeff
                 - two_s * evaluate(*CSC, s, rho.affine(2, 1)).coeff)
    return Evaluation(coeff, s, (variant, s, rho))


def clear_caches():
    """Drop every memoized exact result (used after swapping arithmetic back ends in tests)."""
    evaluate.cache_clear()
    cocycle._solve.cache_clear()
    cocycle.fixing_element.cache_clear()
    cocycle._sec_kernel.cache_clear()
    cocycle._cot_s_period.cache_clear()
