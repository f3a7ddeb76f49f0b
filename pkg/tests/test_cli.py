from __future__ import annotations

import json
import re
from fractions import Fraction

import pytest

from trigseries import cli, evaluator
from trigseries.arith import bernoulli
from trigseries.errors import DegenerateDenominator
from trigseries.render import dumps, latex_value
from trigseries.selftest import REFERENCE_CASES


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_json(capsys):
    code, out, err = run(capsys, "eval", "cot", "--tau", "sqrt(7)", "-s", "3", "--json")
    assert code == 0 and not err
    data = json.loads(out)
    assert data["value"] == {"pi_power": 3, "field": {"d": 7}, "coeff": {"x": "0/1", "y": "-1/140"}}
    assert data["query"] == {"command": "eval", "trig": "cot", "a": -1, "b": 1, "s": 3, "tau": "sqrt(7)"}
    assert data["decimal"].startswith("-0.585963551272390")


@pytest.mark.parametrize("argv,reason", [
    (("eval", "sec", "--tau", "sqrt(5)", "-s", "3"), "parity: s must be even for b = 0"),
    (("eval", "sec^3", "--tau", "sqrt(2)", "-s", "3"), "convergence: s ≥ max(a,b,1)+1 = 4 required"),
    (("special", "alt-csc", "--tau", "sqrt(13)", "-s", "4"), "parity"),
    (("eval", "sec^2", "--tau", "4/2", "-s", "4"), "rational"),
    (("eval", "sec^2", "--tau", "sqrt(-3)", "-s", "4"), "nonreal"),
    (("pell", "16"), "square"),
    (("decompose", "--matrix", "0,-1,1,0", "--group", "gamma2"), "group"),
    (("fix", "--tau", "sqrt(2)", "--level", "0"), "domain"),
])
def test_domain_errors_exit_3(capsys, argv, reason):
    code, out, err = run(capsys, *argv)
    assert code == 3
    assert reason in err and "Traceback" not in err


def test_domain_error_json(capsys):
    code, out, err = run(capsys, "eval", "sec", "--tau", "sqrt(5)", "-s", "3", "--json")
    assert code == 3
    assert json.loads(out)["error"]["reason"] == "parity"


@pytest.mark.parametrize("argv", [
    ("eval", "sek", "--tau", "sqrt(2)", "-s", "4"),
    ("eval", "sec^2", "--tau", "sqrt(2", "-s", "4"),
    ("decompose", "--matrix", "1,2,3"),
])
def test_parse_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "Traceback" not in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["eval", "sec^2", "-s", "4"])
    assert info.value.code == 2


def test_internal_errors_exit_4(capsys, monkeypatch):
    def boom(*args):
        raise DegenerateDenominator("(c rho + d)^k - 1 vanished")

    monkeypatch.setattr(cli, "evaluate", boom)
    code, out, err = run(capsys, "eval", "sec^2", "--tau", "sqrt(5)", "-s", "4")
    assert code == 4 and "degenerate" in err


def test_special_examples(capsys):
    code, out, _ = run(capsys, "special", "chi-sec", "--tau", "sqrt(7)", "-s", "3")
    assert code == 0 and "value   = -7/96 * pi^3" in out
    code, out, _ = run(capsys, "special", "odd-tan", "--tau", "sqrt(5)", "-s", "5", "--json")
    assert json.loads(out)["value"]["coeff"] == {"x": "0/1", "y": "23/17280"}


def test_inspect_examples(capsys):
    assert run(capsys, "pell", "28")[1].strip() == '{"X":"127","Y":"24"}'
    out = run(capsys, "fix", "--tau", "sqrt(7)", "--level", "1")[1]
    assert json.loads(out)["matrix"] == "127,336,48,127"
    assert run(capsys, "decompose", "--matrix", "5,2,2,1", "--group", "gamma2")[1].strip() == '["T^2","R^2"]'
    data = json.loads(run(capsys, "cocycle", "secant", "-s", "2", "--matrix", "1,0,2,1")[1])
    assert data["word"] == ["R^2"] and data["pi_power"] == 2


def test_tau_grammar(capsys):
    for tau in ("sqrt(5)", "(1 + 3*sqrt(5))/2", "1/2 + 3/2*sqrt(5)", "(2+6*sqrt(5))/4"):
        out = run(capsys, "eval", "sec^2", "--tau", tau, "-s", "4", "--json")[1]
        assert json.loads(out)["query"]["tau"] == "1/2 + 3/2*sqrt(5)" or tau == "sqrt(5)"


@pytest.mark.parametrize("argv", [
    ("eval", "cos*cot", "--tau", "sqrt(2)", "-s", "3", "--json"),
    ("special", "alt-csc", "--tau", "sqrt(13)", "-s", "3", "--json"),
    ("pell", "61"),
    ("cocycle", "cotangent", "-s", "5", "--matrix", "2,1,1,1"),
])
def test_json_round_trip_and_determinism(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert dumps(json.loads(first)) + "\n" == first


def test_verify_flag(capsys):
    code, out, _ = run(capsys, "eval", "sec^2", "--tau", "sqrt(5)", "-s", "4", "--json", "--verify",
                       "--terms", "5000", "--prec", "96")
    report = json.loads(out)["verification"]
    assert code == 0 and report["pass"] is True and report["terms"] == 5000


_LATEX_TOKEN = re.compile(r"\\[A-Za-z]+")


@pytest.mark.parametrize("case", REFERENCE_CASES, ids=lambda c: c.name)
def test_latex_is_standalone(case):
    text = latex_value(case.compute().coeff, case.pi_power)
    depth = 0
    for ch in text:
        depth += {"{": 1, "}": -1}.get(ch, 0)
        assert depth >= 0
    assert depth == 0
    assert set(_LATEX_TOKEN.findall(text)) <= {"\\frac", "\\sqrt", "\\pi"}


def test_latex_output(capsys):
    out = run(capsys, "special", "odd-tan", "--tau", "sqrt(5)", "-s", "5", "--latex")[1]
    assert out.strip() == r"\frac{23\sqrt{5}}{17280} \pi^{5}"


def test_selftest_filter(capsys):
    code, out, _ = run(capsys, "selftest", "--exact-only", "--filter", "cot")
    rows = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert code == 0 and rows
    assert all("cot" in line for line in rows)


def test_selftest_exact_table(capsys):
    code, out, _ = run(capsys, "selftest", "--exact-only")
    rows = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert code == 0 and len(rows) >= 10


class _SabotagedCache(bernoulli.BernoulliCache):
    def get(self, n):
        value = super().get(n)
        return value + Fraction(1, 1000) if n >= 2 and n % 2 == 0 else value


def test_selftest_detects_sabotaged_bernoulli(capsys, monkeypatch):
    monkeypatch.setattr(bernoulli, "_CACHE", _SabotagedCache())
    evaluator.clear_caches()
    try:
        code, out, _ = run(capsys, "selftest", "--exact-only")
        assert code == 1 and "FAIL" in out
    finally:
        monkeypatch.undo()
        evaluator.clear_caches()
    assert run(capsys, "selftest", "--exact-only", "--filter", "eval")[0] == 0
