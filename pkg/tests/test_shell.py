import json
import os
from fractions import Fraction

import mpmath as mpm
import pytest

from mmvkit import shell
from mmvkit.shell import (
    DomainError,
    ParseError,
    eval_expr,
    format_digits,
    parse,
    render,
)

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir,
                        "fixtures", "identities.jsonl")


def test_parse_shapes():
    assert parse("3") == ("num", Fraction(3))
    assert parse("-3/4") == ("num", Fraction(-3, 4))
    assert parse("log2") == ("const", "log2")
    assert parse("M(1,-2)") == ("val", "M", (1, -2))
    assert parse("psi(1,2;3)") == ("val", "psi", ((1, 2), 3))
    assert parse("Tconv(2|1,1)") == ("val", "Tconv", ((2,), (1, 1)))
    assert parse("1 + 2*3") == ("add", ("num", Fraction(1)),
                                ("mul", ("num", Fraction(2)), ("num", Fraction(3))))
    assert parse("(1 + 2)*3") == ("mul",
                                  ("add", ("num", Fraction(1)), ("num", Fraction(2))),
                                  ("num", Fraction(3)))


def test_parse_errors():
    for bad in ("M(2) +", "M(2", "foo", "foo(2)", "M(2)|T(2)", "2//3",
                "-M(2)", "pi(2)"):
        with pytest.raises(ParseError):
            parse(bad)


def test_render_round_trip_examples():
    for src in ("M(1,-2)", "2*T(3) - psi(1;2)", "1/2*pi*pi",
                "Tconv(2|1,1,1)", "HHsum(1,2;3)", "zeta(-1,2)",
                "(M(2) - M(-2))*(M(2) + M(-2))"):
        ast = parse(src)
        assert parse(render(ast)) == ast


def test_eval_expr_arithmetic():
    with mpm.workdps(30):
        assert abs(eval_expr("1/2 + 1/3", 20) - mpm.mpf(5) / 6) < 1e-18
        assert abs(eval_expr("pi*pi - 6*zeta(2)", 25)) < mpm.mpf(10) ** -20
        assert abs(eval_expr("2*T(3) - psi(1;2)", 30)) < mpm.mpf(10) ** -25


def test_eval_expr_domain_errors():
    with pytest.raises(DomainError):
        eval_expr("M(1)", 20)  # not admissible
    with pytest.raises(DomainError):
        eval_expr("zeta(2,1)", 20)  # divergent
    with pytest.raises(DomainError):
        eval_expr("T(0)", 20)
    with pytest.raises(DomainError):
        eval_expr("THsum(2;2)", 20)


def test_format_digits_truncates():
    with mpm.workdps(40):
        assert format_digits(mpm.mpf("1.23456789"), 5) == "1.2345 (+-1ulp)"
        assert format_digits(mpm.mpf("-0.001234"), 3).startswith("-0.00123")
        assert format_digits(mpm.mpf(0), 4) == "0.000 (+-1ulp)"
        out = format_digits(mpm.pi, 30)
        assert out.startswith("3.14159265358979323846264338327")


def test_cli_eval_and_digits_env(capsys, monkeypatch):
    assert shell.run(["eval", "M(-2)", "--digits", "12"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "2.46740110027 (+-1ulp)"
    monkeypatch.setenv("MMV_KIT_DIGITS", "8")
    assert shell.run(["eval", "M(-2)"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "2.4674011 (+-1ulp)"


def test_cli_dual_and_product(capsys):
    assert shell.run(["dual", "M(-1,1,2)"]) == 0
    assert capsys.readouterr().out.strip() == \
        "M(-1,1,2) = M(-4) + M(-1,-3) - M(-1,3)"
    assert shell.run(["product", "--mode", "st", "M(2)", "M(-2)"]) == 0
    assert capsys.readouterr().out.strip() == \
        "M(2) * M(-2) = M(-2,2) + M(2,-2)"
    assert shell.run(["product", "--mode", "sha", "M(2)", "M(-2)"]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("M(2) * M(-2) = ")
    assert shell.run(["dual", "M(2)"]) == 3  # even signature
    assert shell.run(["dual", "M(2) + M(3)"]) == 3  # not a single value
    assert shell.run(["product", "--mode", "st", "M(1)", "M(2)"]) == 3


def test_cli_relations_writes_json(tmp_path, capsys):
    out = tmp_path / "w3.json"
    assert shell.run(["relations", "--weight", "3", "--out", str(out)]) == 0
    capsys.readouterr()
    doc = json.loads(out.read_text())
    assert doc["weight"] == 3 and doc["bound"] == 2
    assert shell.run(["relations", "--weight", "1"]) == 3
    assert shell.run(["dim", "--weight", "1"]) == 3


def test_cli_verify_fixture_file(capsys):
    assert shell.run(["verify", FIXTURES]) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out
