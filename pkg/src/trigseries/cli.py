"""``tds``: exact evaluation of trigonometric Dirichlet series at real quadratic points.

Exit codes: 0 ok, 1 selftest failure, 2 parse error, 3 domain error, 4 internal error.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from . import __version__
from .arith.surd import QuadraticIrrational, SurdValue, fraction_str, squarefree_split
from .cocycle import SeriesKind
from .errors import DomainError, InternalError, NonRealInput, ParseError, RationalInput, TDSError
from .evaluator import eval_twisted, evaluate, parse_trig
from .modular import UnimodularMatrix, decompose_full, decompose_gamma2, fixing_matrix, pell_fundamental
from .numerics import DEFAULT_PREC, DEFAULT_REL_TOL, DEFAULT_TERMS, verify
from .render import decimal_value, dumps, latex_value, text_value, value_json
from .selftest import run_selftest, selftest_rows

EXIT_OK, EXIT_SELFTEST, EXIT_PARSE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3, 4

# -- surd grammar ------------------------------------------------------------------------

_SURD_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([()+\-*/]))")


class _Val:
    """``x + y*sqrt(d)`` while parsing; ``d`` is None until a root appears."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y=Fraction(0), d=None):
        self.x, self.y, self.d = Fraction(x), Fraction(y), d

    def _field(self, o, pos):
        if self.d and o.d and self.d != o.d:
            raise ParseError(f"sqrt({self.d}) and sqrt({o.d}) do not lie in one quadratic field", pos)
        return self.d or o.d

    def add(self, o, pos):
        return _Val(self.x + o.x, self.y + o.y, self._field(o, pos))

    def neg(self):
        return _Val(-self.x, -self.y, self.d)

    def mul(self, o, pos):
        d = self._field(o, pos)
        return _Val(self.x * o.x + (d or 0) * self.y * o.y, self.x * o.y + self.y * o.x, d)

    def div(self, o, pos):
        norm = o.x * o.x - (o.d or 0) * o.y * o.y
        if norm == 0:
            raise ParseError("division by zero", pos)
        inv = _Val(o.x / norm, -o.y / norm, o.d)
        return self.mul(inv, pos)


class _SurdParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        end = len(text.rstrip())
        while pos < end:
            m = _SURD_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r} in {text!r}", pos)
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = f"{expected!r}" if expected else "a value"
            raise ParseError(f"expected {want} in {self.text!r}", self.pos())
        self.i += 1
        return tok

    def expression(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            pos = self.pos()
            op = self.take()
            rhs = self.term()
            val = val.add(rhs if op == "+" else rhs.neg(), pos)
        return val

    def term(self):
        val = self.factor()
        while self.peek() in ("*", "/"):
            pos = self.pos()
            op = self.take()
            rhs = self.factor()
            val = val.mul(rhs, pos) if op == "*" else val.div(rhs, pos)
        return val

    def factor(self):
        tok = self.peek()
        if tok == "-":
            self.take()
            return self.factor().neg()
        if tok == "(":
            self.take()
            val = self.expression()
            self.take(")")
            return val
        if tok == "sqrt":
            self.take()
            self.take("(")
            pos = self.pos()
            inner = self.expression()
            self.take(")")
            if inner.y or inner.x.denominator != 1:
                raise ParseError("sqrt() takes an integer", pos)
            n = inner.x.numerator
            if n < 0:
                raise NonRealInput(f"sqrt({n}) is not real")
            if n == 0:
                return _Val(0)
            f, m = squarefree_split(n)
            return _Val(f) if m == 1 else _Val(0, f, m)
        if tok is not None and tok.isdigit():
            self.take()
            return _Val(int(tok))
        raise ParseError(f"expected a number, sqrt(...) or '(' in {self.text!r}", self.pos())

    def parse(self) -> _Val:
        if not self.tokens:
            raise ParseError("empty value", 0)
        val = self.expression()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r} in {self.text!r}", self.pos())
        return val


def parse_surd(text: str) -> QuadraticIrrational:
    """Parse ``sqrt(D)``, ``(P + Q*sqrt(D))/R``, ``P/R + Q/R*sqrt(D)`` and similar forms."""
    val = _SurdParser(text).parse()
    if not val.y or val.d is None:
        raise RationalInput(f"tau = {text} is rational; the evaluation needs a real quadratic irrationality")
    return QuadraticIrrational.from_value(SurdValue(val.x, val.y, val.d))


# -- commands -------------------------------------------------------------------------------


def _emit_value(args, query: dict, ev) -> None:
    if args.latex:
        print(latex_value(ev.coeff, ev.pi_power))
        return
    report = verify(ev, args.terms, args.prec, args.tol) if args.verify else None
    if args.json:
        out = {"query": query, "value": value_json(ev.coeff, ev.pi_power),
               "decimal": decimal_value(ev.coeff, ev.pi_power)}
        if report is not None:
            out["verification"] = report.to_json()
        print(dumps(out))
        return
    print(f"value   = {text_value(ev.coeff, ev.pi_power)}")
    print(f"decimal = {decimal_value(ev.coeff, ev.pi_power)}")
    if report is not None:
        r = report.to_json()
        status = "pass" if report.passed else "FAIL"
        print(f"numeric = {r['numeric']}  (N = {r['terms']}, {r['precision_bits']} bits)")
        print(f"check   = {status}: rel error {r['rel_error']} vs tolerance {r['tolerance']} (heuristic on the real line)")


def cmd_eval(args) -> int:
    spec = parse_trig(args.trig)
    rho = parse_surd(args.tau)
    ev = evaluate(spec.a, spec.b, args.s, rho)
    query = {"command": "eval", "trig": args.trig, "a": spec.a, "b": spec.b,
             "s": args.s, "tau": str(rho)}
    _emit_value(args, query, ev)
    return EXIT_OK


def cmd_special(args) -> int:
    rho = parse_surd(args.tau)
    ev = eval_twisted(args.variant.replace("-", "_"), args.s, rho)
    query = {"command": "special", "variant": args.variant, "s": args.s, "tau": str(rho)}
    _emit_value(args, query, ev)
    return EXIT_OK


def cmd_pell(args) -> int:
    sol = pell_fundamental(args.k)
    print(dumps({"X": str(sol.X), "Y": str(sol.Y)}))
    return EXIT_OK


def cmd_fix(args) -> int:
    rho = parse_surd(args.tau)
    g = fixing_matrix(rho, args.level)
    print(dumps({"tau": str(rho), "level": args.level, "matrix": str(g)}))
    return EXIT_OK


def _word_json(word) -> list[str]:
    return (["-I"] if word.sign < 0 else []) + word.render()


def cmd_decompose(args) -> int:
    g = UnimodularMatrix.parse(args.matrix)
    word = decompose_gamma2(g) if args.group == "gamma2" else decompose_full(g)
    print(dumps(_word_json(word)))
    return EXIT_OK


def cmd_cocycle(args) -> int:
    from .cocycle import period_of

    kind = SeriesKind[args.kind.upper()]
    g = UnimodularMatrix.parse(args.matrix)
    word = kind.decompose(g)
    body = period_of(kind, g, args.s).body
    print(dumps({"kind": args.kind, "s": args.s, "matrix": str(g), "word": _word_json(word),
                 "pi_power": args.s, "period": body.to_str("tau"),
                 "numerator": [fraction_str(c) for c in body.num.coeffs],
                 "denominator": [fraction_str(c) for c in body.den.coeffs]}))
    return EXIT_OK


def cmd_selftest(args) -> int:
    rows = selftest_rows(numeric=not args.exact_only, terms=args.terms, prec=args.prec, tol=args.tol)
    results = run_selftest(rows, args.filter)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_OK if results and not failed else EXIT_SELFTEST


# -- parser -------------------------------------------------------------------------------


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable output")
    fmt.add_argument("--latex", action="store_true", help="LaTeX output")
    common.add_argument("--verify", action="store_true", help="cross-check by direct summation")
    common.add_argument("--terms", type=int, default=DEFAULT_TERMS, help="terms for --verify (default %(default)s)")
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="bits for --verify (default %(default)s)")
    common.add_argument("--tol", type=float, default=DEFAULT_REL_TOL,
                        help="relative tolerance for --verify (default %(default)s)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="tds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="sum of sec^a csc^b (pi n tau) / n^s")
    p.add_argument("trig", help='product of sin, cos, tan, cot, sec, csc, e.g. "cos*cot" or "sec^3"')
    p.add_argument("--tau", required=True, help='real quadratic point, e.g. "sqrt(7)" or "(1 + sqrt(5))/2"')
    p.add_argument("-s", type=int, required=True, help="exponent of n in the denominator")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("special", parents=[common], help="alternating, odd-index and chi_-4 twisted series")
    p.add_argument("variant", choices=["alt-csc", "odd-tan", "chi-sec"])
    p.add_argument("--tau", required=True)
    p.add_argument("-s", type=int, required=True)
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("pell", parents=[common], help="fundamental solution of X^2 - k Y^2 = 1")
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("fix", parents=[common], help="hyperbolic matrix in Gamma(N) fixing tau")
    p.add_argument("--tau", required=True)
    p.add_argument("--level", type=int, default=1)
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("decompose", parents=[common], help="word in T, S (full) or T^2, R^2 (gamma2)")
    p.add_argument("--matrix", required=True, help="a,b,c,d")
    p.add_argument("--group", choices=["full", "gamma2"], default="full")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("cocycle", parents=[common], help="period function p_s(gamma; tau) as a multiple of pi^s")
    p.add_argument("kind", choices=["secant", "cotangent"])
    p.add_argument("-s", type=int, required=True)
    p.add_argument("--matrix", required=True, help="a,b,c,d")
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("selftest", parents=[common], help="run the embedded acceptance table")
    p.add_argument("--filter", help="only rows whose name contains this text")
    p.add_argument("--exact-only", action="store_true", help="skip the numerical cross-checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def _fail(args, exc: TDSError, code: int) -> int:
    if getattr(args, "json", False):
        print(dumps({"error": {"reason": exc.reason, "message": str(exc)}}))
    print(f"tds: error [{exc.reason}]: {exc}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(args, exc, EXIT_PARSE)
    except DomainError as exc:
        return _fail(args, exc, EXIT_DOMAIN)
    except InternalError as exc:
        return _fail(args, exc, EXIT_INTERNAL)
    except (ValueError, ZeroDivisionError) as exc:
        # well-formed arguments the machinery rejects (level 0, matrix outside a group, ...)
        return _fail(args, _Wrapped("domain", exc), EXIT_DOMAIN)
    except Exception as exc:  # pragma: no cover - a bug, reported without a traceback
        return _fail(args, _Wrapped("internal", exc), EXIT_INTERNAL)


class _Wrapped(TDSError):
    def __init__(self, reason: str, exc: Exception):
        super().__init__(str(exc))
        self.reason = reason


if __name__ == "__main__":
    sys.exit(main())
