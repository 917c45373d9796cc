import math
import random
from fractions import Fraction

import pytest

from logconcave.errors import (
    ExprDivByZero,
    MissingParam,
    NegativeBinomialArg,
    NonIntegerExponent,
    ParseError,
    UnknownFamily,
)
from logconcave.seqspec import (
    FAMILIES,
    BinOp,
    Binomial,
    Const,
    Neg,
    Param,
    SeqSpec,
    VarK,
    builtin_family,
    closed_form,
    eval_expr,
    explicit,
    parse_seqspec,
    to_source,
)

CORPUS = [
    "(-1)^k", "1 + 1/2^k", "-1^k", "binomial(8, k)", "factorial(k) / factorial(k+2)",
    "3*(1/2)^k", "r^k", "2^3^2", "2^-k", "k*(k-1)/2", "--k", "1 - -1", "(k)", "c", "1/(k+1)",
    "binomial(2*k, k) / (k+1)", "-(k+1)^2", "a*k + b", "1 + 1/(k+1)", "((((k))))",
]


def test_parse_shapes():
    assert parse_seqspec("(-1)^k") == BinOp("^", Const(Fraction(-1)), VarK())
    assert parse_seqspec("1 + 1/2^k") == BinOp(
        "+", Const(Fraction(1)), BinOp("/", Const(Fraction(1)), BinOp("^", Const(Fraction(2)), VarK())))
    assert parse_seqspec("-1^k") == Neg(BinOp("^", Const(Fraction(1)), VarK()))
    assert parse_seqspec("2^3^2") == BinOp("^", Const(Fraction(2)), BinOp("^", Const(Fraction(3)), Const(Fraction(2))))
    assert parse_seqspec("binomial(n, k)") == Binomial(Param("n"), VarK())


def test_unicode_minus():
    assert parse_seqspec("(−1)^k") == parse_seqspec("(-1)^k")


def test_parse_error_at_end_of_input():
    text = "binomial(8, k"
    with pytest.raises(ParseError) as info:
        parse_seqspec(text)
    assert info.value.offset == len(text)
    assert "')'" in info.value.expected


@pytest.mark.parametrize("text", ["", "1 +", "k k", "foo(1)", "binomial(1)", "1 $ 2", ")"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_seqspec(text)


def test_error_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        parse_seqspec("−1 + $")
    assert info.value.offset == len("−1 + ".encode())


@pytest.mark.parametrize("text", CORPUS)
def test_round_trip(text):
    ast = parse_seqspec(text)
    assert parse_seqspec(to_source(ast)) == ast


def test_eval_examples():
    assert eval_expr(parse_seqspec("(-1)^k"), 3) == -1
    assert eval_expr(parse_seqspec("1 + 1/2^k"), 2) == Fraction(5, 4)
    # independent: 8!/(3! 5!)
    expected = math.factorial(8) // (math.factorial(3) * math.factorial(5))
    assert expected == 56
    assert eval_expr(parse_seqspec("binomial(8,k)"), 3) == expected


def test_binomial_above_n_is_zero():
    assert eval_expr(parse_seqspec("binomial(4, k)"), 6) == 0


def test_eval_errors_name_k_and_subexpression():
    with pytest.raises(ExprDivByZero) as info:
        eval_expr(parse_seqspec("1/(k-2)"), 2)
    assert info.value.k == 2 and info.value.subexpr == "(1/(k-2))"
    with pytest.raises(NonIntegerExponent):
        eval_expr(parse_seqspec("2^(k/2)"), 1)
    with pytest.raises(NegativeBinomialArg):
        eval_expr(parse_seqspec("binomial(k-3, 1)"), 0)
    with pytest.raises(NegativeBinomialArg):
        eval_expr(parse_seqspec("factorial(k/2)"), 1)
    with pytest.raises(ExprDivByZero):
        eval_expr(parse_seqspec("k^-1"), 0)


def test_params():
    assert eval_expr(parse_seqspec("r^k"), 3, {"r": Fraction(1, 2)}) == Fraction(1, 8)
    with pytest.raises(MissingParam):
        closed_form("r^k")


def test_builtin_examples():
    assert builtin_family("alternating").value_at(5) == -1
    assert builtin_family("perturbed_const").value_at(3) == Fraction(9, 8)
    row = builtin_family("binomial_row", {"n": 4})
    assert row.is_explicit and row.terms == tuple(map(Fraction, (1, 4, 6, 4, 1)))


def test_builtin_errors():
    with pytest.raises(UnknownFamily):
        builtin_family("fibonacci")
    with pytest.raises(MissingParam):
        builtin_family("geometric")


CLOSED_FORMS = {
    "constant": ("7/3", {"c": Fraction(7, 3)}),
    "geometric": ("(2/3)^k", {"r": Fraction(2, 3)}),
    "alternating": ("(-1)^k", {}),
    "perturbed_const": ("1 + 2^(-k)", {}),
    "harmonic_shift": ("(k+2)/(k+1)", {}),
    "linear": ("k", {}),
}


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_builtin_matches_closed_form(name):
    text, params = CLOSED_FORMS[name]
    fam = builtin_family(name, params)
    ast = parse_seqspec(text)
    for k in range(129):
        assert fam.value_at(k) == eval_expr(ast, k)


def test_binomial_row_matches_closed_form():
    ast = parse_seqspec("binomial(9, k)")
    fam = builtin_family("binomial_row", {"n": 9})
    assert all(fam.value_at(k) == eval_expr(ast, k) for k in range(20))


def test_registry_is_complete():
    assert set(FAMILIES) == {"constant", "geometric", "alternating", "perturbed_const",
                             "harmonic_shift", "binomial_row", "linear"}


@pytest.mark.parametrize("obj", [
    {"kind": "expr", "expr": "r^k", "params": {"r": "1/2"}},
    {"kind": "builtin", "name": "geometric", "params": {"r": "1/2"}},
    {"kind": "explicit", "terms": ["1", "4", "6", "4", "1"]},
])
def test_spec_json_round_trip(obj):
    spec = SeqSpec.from_json(obj)
    assert spec.to_json() == obj
    assert SeqSpec.from_json(spec.to_json()) == spec


def test_explicit_parses_rationals():
    assert explicit(["1/2", "-3"]).terms == (Fraction(1, 2), Fraction(-3))


def test_parser_never_crashes_on_random_bytes():
    rng = random.Random(2024)
    alphabet = b"0123456789k()+-*/^, abrnxyz_$\t\xe2\x88\x92binomialfactorial"
    for _ in range(100_000):
        raw = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        text = raw.decode("utf-8", errors="replace")
        try:
            parse_seqspec(text)
        except ParseError:
            pass


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_seqspec("(" * 5000 + "k" + ")" * 5000)
