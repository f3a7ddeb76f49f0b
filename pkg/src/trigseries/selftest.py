"""Embedded acceptance table used by ``tds selftest``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith.surd import QuadraticIrrational, SurdValue, normalize_surd
from .cocycle import SeriesKind, period_of
from .evaluator import Evaluation, eval_twisted, evaluate
from .modular import GENERATORS, GeneratorWord, UnimodularMatrix, fixing_matrix, is_member, gamma_principal
from .numerics import DEFAULT_PREC, DEFAULT_REL_TOL, DEFAULT_TERMS, UHP_TOL, cocycle_residual, verify
from .render import text_value

SEED = 20240611


def root(d: int) -> QuadraticIrrational:
    return normalize_surd(0, 1, 1, d)


def surd(x, y, d) -> SurdValue:
    return SurdValue(Fraction(x), Fraction(y), d)


@dataclass(frozen=True)
class Case:
    """An exact value ``expected * pi^pi_power`` for one query."""

    name: str
    compute: Callable[[], Evaluation]
    expected: SurdValue
    pi_power: int
    note: str = ""


REFERENCE_CASES: tuple[Case, ...] = (
    Case("cot s=3 tau=sqrt(7)", lambda: evaluate(-1, 1, 3, root(7)), surd(0, Fraction(-1, 140), 7), 3,
         "the value -sqrt(7)/20 sometimes quoted is 7 times too large"),
    Case("sec^2 s=4 tau=sqrt(5)", lambda: evaluate(2, 0, 4, root(5)), surd(Fraction(14, 135), 0, 5), 4),
    Case("cot^2 s=4 tau=sqrt(5)", lambda: evaluate(-2, 2, 4, root(5)), surd(Fraction(13, 945), 0, 5), 4),
    Case("csc^2 s=4 tau=sqrt(11)", lambda: evaluate(0, 2, 4, root(11)), surd(Fraction(8, 385), 0, 11), 4),
    Case("sec^3 s=4 tau=sqrt(2)", lambda: evaluate(3, 0, 4, root(2)), surd(Fraction(-2483, 5220), 0, 2), 4),
    Case("cos*cot s=3 tau=sqrt(2)", lambda: evaluate(-2, 1, 3, root(2)),
         surd(Fraction(1, 2), Fraction(-253, 720), 2), 3),
    Case("tan^3 s=5 tau=sqrt(6)", lambda: evaluate(3, -3, 5, root(6)), surd(0, Fraction(35159, 106920), 6), 5,
         "homogeneous of degree 5, so the power is pi^5, not pi^4"),
    Case("alt-csc s=3 tau=sqrt(13)", lambda: eval_twisted("alt_csc", 3, root(13)),
         surd(0, Fraction(-1, 156), 13), 3),
    Case("odd-tan s=5 tau=sqrt(5)", lambda: eval_twisted("odd_tan", 5, root(5)),
         surd(0, Fraction(23, 17280), 5), 5),
    Case("chi-sec s=3 tau=sqrt(7)", lambda: eval_twisted("chi_sec", 3, root(7)), surd(Fraction(-7, 96), 0, 7), 3),
)


@dataclass
class RowResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def random_word(kind: SeriesKind, rng: random.Random, max_len: int = 6) -> GeneratorWord:
    """A random word in the generators of ``kind`` with exponents +-1 and no cancelling neighbours."""
    gens = kind.generators
    letters: list[tuple[str, int]] = []
    for _ in range(rng.randint(1, max_len)):
        choices = [g for g in gens if not letters or g != letters[-1][0]]
        letters.append((rng.choice(choices), rng.choice((-1, 1))))
    return GeneratorWord(tuple(letters))


def residual_point(g: UnimodularMatrix):
    """A point tau with Im(tau) = Im(g tau), the best possible for both sums."""
    if g.c == 0:
        return (Fraction(1, 3), Fraction(1))
    return (Fraction(-g.d, g.c), Fraction(1, abs(g.c)))


def cocycle_rows(kinds=tuple(SeriesKind), words: int = 5, pairs: int = 100, prec: int = 256) -> list[tuple]:
    """``(name, check)`` pairs covering generators, random words and the exact cocycle relation."""
    rows = []
    weights = {SeriesKind.SECANT: (2, 4, 6), SeriesKind.COTANGENT: (3, 5, 7)}
    for kind in kinds:
        label = kind.name.lower()
        for s in weights[kind]:
            def gen_check(kind=kind, s=s):
                worst = 0
                for g in kind.generators:
                    mat = GENERATORS[g]
                    worst = max(worst, cocycle_residual(kind, mat, s, residual_point(mat), prec))
                return worst < UHP_TOL, f"max residual {float(worst):.2e}"

            def word_check(kind=kind, s=s):
                rng = random.Random(f"{SEED}-{kind.name}-{s}")
                worst = 0
                for _ in range(words):
                    g = random_word(kind, rng).product()
                    worst = max(worst, cocycle_residual(kind, g, s, residual_point(g), prec))
                return worst < UHP_TOL, f"max residual {float(worst):.2e} over {words} words"

            rows.append((f"cocycle {label} generators s={s}", gen_check))
            rows.append((f"cocycle {label} random words s={s}", word_check))

        def relation_check(kind=kind):
            rng = random.Random(f"{SEED}-{kind.name}-pairs")
            bad = 0
            for i in range(pairs):
                s = weights[kind][i % 3]
                alpha = random_word(kind, rng).product()
                beta = random_word(kind, rng).product()
                lhs = period_of(kind, alpha @ beta, s)
                rhs = period_of(kind, alpha, s).slash(beta) + period_of(kind, beta, s)
                bad += lhs.body != rhs.body
            return bad == 0, f"{pairs - bad}/{pairs} pairs exact"

        rows.append((f"cocycle {label} relation p(ab) = p(a)|b + p(b)", relation_check))
    return rows


def property_rows() -> list[tuple]:
    def shift_coherence():
        cases = [(2, 0, 4, root(5)), (-1, 1, 3, root(7)), (0, 1, 3, root(2))]
        ok = all(evaluate(a, b, s, rho).coeff == evaluate(a, b, s, rho.affine(1, 2)).coeff
                 for a, b, s, rho in cases)
        return ok, "evaluate(rho + 2) == evaluate(rho)"

    def fixing_matrices():
        pts = [root(2), root(3), root(5), root(7), normalize_surd(1, 1, 2, 5)]
        ok = True
        for rho in pts:
            for n in (1, 2, 4):
                g = fixing_matrix(rho, n)
                ok &= g.act(rho.value) == rho.value and is_member(g, gamma_principal(n))
        return ok, "fixes rho and lies in Gamma(N), N = 1, 2, 4"

    def route_consistency():
        # csc^2 through D cot versus csc^2 = sec^2 csc^2 - sec^2 evaluated independently
        rho = root(11)
        via_operator = evaluate(0, 2, 4, rho).coeff
        via_reduction = evaluate(2, 2, 4, rho).coeff - evaluate(2, 0, 4, rho).coeff
        return via_operator == via_reduction, "psi^(0,2) by two routes"

    return [("property shift coherence", shift_coherence),
            ("property fixing matrices", fixing_matrices),
            ("property csc^2 route consistency", route_consistency)]


def _case_check(case: Case, numeric: bool, terms: int, prec: int, tol: float):
    def check():
        ev = case.compute()
        exact_ok = ev.coeff == case.expected and ev.pi_power == case.pi_power
        detail = text_value(ev.coeff, ev.pi_power)
        if not exact_ok:
            return False, f"got {detail}, expected {text_value(case.expected, case.pi_power)}"
        if numeric:
            report = verify(ev, terms, prec, tol)
            detail += f"; rel err {float(report.rel_error):.1e} at N={terms}"
            return report.passed, detail
        return True, detail

    return check


def selftest_rows(numeric: bool = True, terms: int = DEFAULT_TERMS, prec: int = DEFAULT_PREC,
                  tol: float = DEFAULT_REL_TOL, cocycles: bool = True) -> list[tuple]:
    rows = [(f"eval {c.name}", _case_check(c, numeric, terms, prec, tol)) for c in REFERENCE_CASES]
    if cocycles:
        rows += cocycle_rows()
    rows += property_rows()
    return rows


def run_selftest(rows, name_filter: str | None = None, emit: Callable[[str], None] = print) -> list[RowResult]:
    results = []
    for name, check in rows:
        if name_filter and name_filter not in name:
            continue
        start = time.perf_counter()
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing row is a failing row
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        res = RowResult(name, bool(ok), detail, time.perf_counter() - start)
        results.append(res)
        emit(f"{'PASS' if res.passed else 'FAIL'}  {res.name:<48} {res.seconds:6.2f}s  {res.detail}")
    return results
