"""Tests for the arithmetic expression language.

Covers tokenizing, parsing, evaluation, error reporting, and the
round-trip guarantee that printing and reparsing rebuilds the exact
same tree.
"""

import math

import numpy as np
import pytest

from hilferbvp.exprlang import (
    Binary,
    Call,
    EvalError,
    Number,
    ParseError,
    Unary,
    UnknownIdentifier,
    Var,
    evaluate,
    parse,
    to_string,
)


def test_number_forms():
    assert evaluate(parse("1e-3"), 0.0, 0.0) == pytest.approx(1e-3)
    assert evaluate(parse(".5"), 0.0, 0.0) == pytest.approx(0.5)
    assert evaluate(parse("2."), 0.0, 0.0) == pytest.approx(2.0)
    assert evaluate(parse("3.25E2"), 0.0, 0.0) == pytest.approx(325.0)


def test_unicode_minus_accepted():
    tree = parse("−2 + t")
    assert evaluate(tree, 5.0, 0.0) == pytest.approx(3.0)


def test_variables_and_case():
    assert evaluate(parse("t + 2*z"), 1.5, 0.25) == pytest.approx(2.0)
    with pytest.raises(UnknownIdentifier):
        parse("T + z")


def test_power_binds_tighter_than_unary_minus():
    # -t^2 parses as -(t^2)
    assert evaluate(parse("-t^2"), 3.0, 0.0) == pytest.approx(-9.0)
    tree = parse("-t^2")
    assert isinstance(tree, Unary)
    assert isinstance(tree.operand, Binary)
    assert tree.operand.op == "^"


def test_power_right_associative():
    assert evaluate(parse("2^3^2"), 0.0, 0.0) == pytest.approx(512.0)


def test_subtraction_left_associative():
    assert evaluate(parse("1-2-3"), 0.0, 0.0) == pytest.approx(-4.0)
    assert evaluate(parse("8/4/2"), 0.0, 0.0) == pytest.approx(1.0)


def test_mixed_precedence():
    assert evaluate(parse("2+3*4"), 0.0, 0.0) == pytest.approx(14.0)
    assert evaluate(parse("(2+3)*4"), 0.0, 0.0) == pytest.approx(20.0)
    assert evaluate(parse("2*3^2"), 0.0, 0.0) == pytest.approx(18.0)


def test_function_calls():
    assert evaluate(parse("sin(t)"), 0.5, 0.0) == pytest.approx(math.sin(0.5))
    assert evaluate(parse("cos(z)"), 0.0, 0.7) == pytest.approx(math.cos(0.7))
    assert evaluate(parse("exp(ln(t))"), 2.5, 0.0) == pytest.approx(2.5)
    assert evaluate(parse("sqrt(t^2)"), 3.0, 0.0) == pytest.approx(3.0)
    assert evaluate(parse("abs(-t)"), 4.0, 0.0) == pytest.approx(4.0)


def test_negative_base_integer_power():
    assert evaluate(parse("(-2)^3"), 0.0, 0.0) == pytest.approx(-8.0)
    assert evaluate(parse("(-2)^2"), 0.0, 0.0) == pytest.approx(4.0)
    assert evaluate(parse("(-1)^0"), 0.0, 0.0) == pytest.approx(1.0)


MALFORMED = [
    "",
    "   ",
    "2 +",
    "+ 2",
    "(",
    ")",
    "(2",
    "2)",
    "sin(",
    "sin()",
    "sin(2",
    "2 ** 3",
    "2 // 3",
    "2 2",
    "t z",
    "2 + * 3",
    "^2",
    "2^",
    "1.2.3",
    "sin 2",
    "2 @ 3",
    "foo(2)",
    "2 + bar",
]


@pytest.mark.parametrize("text", MALFORMED)
def test_malformed_inputs_raise(text):
    with pytest.raises(ParseError):
        parse(text)


def test_unknown_identifier_subclass():
    with pytest.raises(UnknownIdentifier):
        parse("foo(2)")
    with pytest.raises(UnknownIdentifier):
        parse("2 + bar")
    # UnknownIdentifier is still catchable as ParseError
    assert issubclass(UnknownIdentifier, ParseError)


def test_parse_error_offsets():
    with pytest.raises(ParseError) as exc:
        parse("2 + * 3")
    assert exc.value.offset == 4
    with pytest.raises(ParseError) as exc:
        parse("sin(2")
    assert exc.value.offset == 5
    with pytest.raises(ParseError) as exc:
        parse("2 2")
    assert exc.value.offset == 2


def test_parse_error_fields():
    with pytest.raises(ParseError) as exc:
        parse("2 +")
    err = exc.value
    assert isinstance(err.offset, int)
    assert err.expected
    assert "offset" in str(err)


DOMAIN_CASES = [
    ("1/z", 0.0, 0.0),
    ("ln(t)", 0.0, 0.0),
    ("ln(-t)", 1.0, 0.0),
    ("sqrt(-t)", 1.0, 0.0),
    ("(-2)^0.5", 0.0, 0.0),
    ("0^(-1)", 0.0, 0.0),
    ("exp(t)", 1e6, 0.0),
]


@pytest.mark.parametrize("text,t,z", DOMAIN_CASES)
def test_evaluation_domain_errors(text, t, z):
    tree = parse(text)
    with pytest.raises(EvalError):
        evaluate(tree, t, z)


def test_eval_error_is_arithmetic_error():
    assert issubclass(EvalError, ArithmeticError)


def _random_tree(rng, depth):
    """Build a random expression tree for round-trip testing."""
    if depth <= 0 or rng.random() < 0.25:
        kind = rng.integers(0, 3)
        if kind == 0:
            return Number(float(abs(rng.normal()) + 0.1))
        if kind == 1:
            return Var("t")
        return Var("z")
    kind = rng.integers(0, 3)
    if kind == 0:
        return Unary("-", _random_tree(rng, depth - 1))
    if kind == 1:
        op = ["+", "-", "*", "/", "^"][int(rng.integers(0, 5))]
        return Binary(op, _random_tree(rng, depth - 1), _random_tree(rng, depth - 1))
    fn = ["sin", "cos", "exp", "sqrt", "abs"][int(rng.integers(0, 5))]
    return Call(fn, _random_tree(rng, depth - 1))


def test_round_trip_exact_tree():
    """Printing then reparsing must rebuild the identical tree, 500 times."""
    rng = np.random.default_rng(7)
    for _ in range(500):
        tree = _random_tree(rng, int(rng.integers(1, 6)))
        text = to_string(tree)
        assert parse(text) == tree


def test_round_trip_preserves_values():
    rng = np.random.default_rng(11)
    trees = 0
    while trees < 50:
        tree = _random_tree(rng, 4)
        text = to_string(tree)
        evals = 0
        for _ in range(10):
            t = float(rng.uniform(0.1, 2.0))
            z = float(rng.uniform(-1.0, 1.0))
            try:
                want = evaluate(tree, t, z)
            except EvalError:
                continue
            got = evaluate(parse(text), t, z)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
            evals += 1
        if evals:
            trees += 1


def test_printer_parenthesizes_structure():
    # a*(b+c) must not print as a*b+c
    tree = Binary("*", Var("t"), Binary("+", Var("z"), Number(1.0)))
    assert parse(to_string(tree)) == tree
    # (a-b)-c vs a-(b-c) must stay distinct
    left = Binary("-", Binary("-", Number(1.0), Number(2.0)), Number(3.0))
    right = Binary("-", Number(1.0), Binary("-", Number(2.0), Number(3.0)))
    assert parse(to_string(left)) == left
    assert parse(to_string(right)) == right
    assert to_string(left) != to_string(right)


def test_whitespace_insensitive():
    assert parse("2+3*t") == parse("  2 + 3 * t  ")
