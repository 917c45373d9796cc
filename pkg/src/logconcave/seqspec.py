"""Closed-form sequence DSL and the registry of built-in families.

Grammar (``-`` may also be written as U+2212)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := INTEGER | 'k' | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'

so ``-1^k`` is ``-(1^k)``, ``(-1)^k`` is ``(-1)^k`` and ``2^3^2`` is ``2^(3^2)``.
A negated integer literal is folded into a single constant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    EvalError,
    ExprDivByZero,
    MissingParam,
    NegativeBinomialArg,
    NonIntegerExponent,
    ParseError,
    UnknownFamily,
)
from .exactnum import format_scalar, parse_scalar


# --------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class VarK:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    child: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Binomial:
    n: "Expr"
    k: "Expr"


@dataclass(frozen=True)
class Factorial:
    child: "Expr"


Expr = Union[Const, VarK, Param, Neg, BinOp, Binomial, Factorial]

FUNCTIONS = {"binomial": 2, "factorial": 1}


def to_source(node: Expr) -> str:
    """Render an AST as DSL text that parses back to the same AST."""
    if isinstance(node, Const):
        v = node.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        return f"({format_scalar(v)})"
    if isinstance(node, VarK):
        return "k"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Neg):
        return "-" + to_source(node.child)
    if isinstance(node, BinOp):
        return f"({to_source(node.left)}{node.op}{to_source(node.right)})"
    if isinstance(node, Binomial):
        return f"binomial({to_source(node.n)},{to_source(node.k)})"
    if isinstance(node, Factorial):
        return f"factorial({to_source(node.child)})"
    raise TypeError(f"not an expression node: {node!r}")


def params_of(node: Expr) -> set[str]:
    if isinstance(node, Param):
        return {node.name}
    if isinstance(node, (Neg, Factorial)):
        return params_of(node.child)
    if isinstance(node, BinOp):
        return params_of(node.left) | params_of(node.right)
    if isinstance(node, Binomial):
        return params_of(node.n) | params_of(node.k)
    return set()


# --------------------------------------------------------------------------
# Lexer / parser

_TOKEN = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),−]))")


@dataclass
class _Tok:
    kind: str  # "int", "name", "op", "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0

    def byte_at(i: int) -> int:
        return len(text[:i].encode("utf-8"))

    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", byte_at(bad),
                             frozenset({"integer", "identifier", "operator"}))
        kind = m.lastgroup
        tok = m.group(kind)
        if tok == "−":
            tok = "-"
        toks.append(_Tok(kind, tok, byte_at(m.start(kind))))
        pos = m.end()
    toks.append(_Tok("end", "", byte_at(len(text))))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def expect(self, op: str) -> None:
        if not self.at(op):
            self.fail({repr(op)})
        self.advance()

    def fail(self, expected):
        t = self.tok
        what = "end of input" if t.kind == "end" else f"token {t.text!r}"
        raise ParseError(f"unexpected {what}", t.offset, frozenset(expected))

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.at("-"):
            self.advance()
            child = self.factor()
            if isinstance(child, Const):
                return Const(-child.value)
            return Neg(child)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Const(Fraction(int(t.text)))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                args = self.call_args()
                if len(args) != FUNCTIONS[t.text]:
                    raise ParseError(f"{t.text} takes {FUNCTIONS[t.text]} argument(s), got {len(args)}",
                                     t.offset, frozenset())
                return Binomial(*args) if t.text == "binomial" else Factorial(args[0])
            if self.at("("):
                raise ParseError(f"unknown function {t.text!r}", t.offset,
                                 frozenset(repr(f) for f in FUNCTIONS))
            return VarK() if t.text == "k" else Param(t.text)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail({"integer", "identifier", "'('", "'-'"})

    def call_args(self) -> list[Expr]:
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        if not self.at(")"):
            self.fail({"','", "')'"})
        self.advance()
        return args


def parse_seqspec(text: str) -> Expr:
    """Parse DSL text into an AST, raising :class:`ParseError` on bad input."""
    parser = _Parser(text)
    try:
        return parser.parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", parser.tok.offset) from None


# --------------------------------------------------------------------------
# Evaluation


def _as_nonneg_int(v: Fraction, node: Expr, k: int, what: str) -> int:
    if v.denominator != 1 or v < 0:
        raise NegativeBinomialArg(f"{what} argument {format_scalar(v)} is not a nonnegative integer",
                                  k, to_source(node))
    return v.numerator


def eval_expr(node: Expr, k: int, params: Mapping[str, Fraction] | None = None) -> Fraction:
    """Exact value of ``node`` at index ``k``."""
    params = params or {}

    def ev(n: Expr) -> Fraction:
        if isinstance(n, Const):
            return n.value
        if isinstance(n, VarK):
            return Fraction(k)
        if isinstance(n, Param):
            try:
                return Fraction(params[n.name])
            except KeyError:
                raise MissingParam(f"parameter {n.name!r} is not bound") from None
        if isinstance(n, Neg):
            return -ev(n.child)
        if isinstance(n, BinOp):
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            if n.op == "/":
                if b == 0:
                    raise ExprDivByZero("division by zero", k, to_source(n))
                return a / b
            if b.denominator != 1:
                raise NonIntegerExponent(f"exponent {format_scalar(b)} is not an integer", k, to_source(n))
            if a == 0 and b < 0:
                raise ExprDivByZero("zero raised to a negative power", k, to_source(n))
            return a ** b.numerator
        if isinstance(n, Binomial):
            top = _as_nonneg_int(ev(n.n), n, k, "binomial")
            bot = _as_nonneg_int(ev(n.k), n, k, "binomial")
            return Fraction(math.comb(top, bot))
        if isinstance(n, Factorial):
            return Fraction(math.factorial(_as_nonneg_int(ev(n.child), n, k, "factorial")))
        raise TypeError(f"not an expression node: {n!r}")

    return ev(node)


# --------------------------------------------------------------------------
# Sequence descriptions


@dataclass(frozen=True)
class SeqSpec:
    """Declarative description of a sequence.

    ``kind`` is ``"explicit"``, ``"builtin"`` or ``"expr"``.  Built-ins are
    resolved at construction into either ``terms`` or ``ast``.
    """

    kind: str
    terms: tuple[Fraction, ...] | None = None
    ast: Expr | None = None
    expr: str | None = None
    name: str | None = None
    params: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.ast is not None:
            missing = params_of(self.ast) - set(self.params)
            if missing:
                raise MissingParam(f"unbound parameter(s): {', '.join(sorted(missing))}")

    @property
    def is_explicit(self) -> bool:
        return self.terms is not None

    def value_at(self, k: int) -> Fraction:
        if self.terms is not None:
            return self.terms[k] if 0 <= k < len(self.terms) else Fraction(0)
        return eval_expr(self.ast, k, self.params)

    def to_json(self) -> dict:
        params = {name: format_scalar(v) for name, v in sorted(self.params.items())}
        if self.kind == "explicit":
            return {"kind": "explicit", "terms": [format_scalar(t) for t in self.terms]}
        if self.kind == "builtin":
            return {"kind": "builtin", "name": self.name, "params": params}
        return {"kind": "expr", "expr": self.expr, "params": params}

    @classmethod
    def from_json(cls, obj: Mapping) -> SeqSpec:
        kind = obj.get("kind")
        params = {n: parse_scalar(str(v)) for n, v in (obj.get("params") or {}).items()}
        if kind == "explicit":
            return explicit(obj["terms"])
        if kind == "builtin":
            return builtin_family(obj["name"], params)
        if kind == "expr":
            return closed_form(obj["expr"], params)
        raise ValueError(f"unknown spec kind {kind!r}")


def explicit(terms) -> SeqSpec:
    vals = tuple(parse_scalar(t) if isinstance(t, str) else Fraction(t) for t in terms)
    if not vals:
        raise ValueError("explicit sequence needs at least one term")
    return SeqSpec("explicit", terms=vals)


def closed_form(text: str, params: Mapping[str, Fraction] | None = None) -> SeqSpec:
    return SeqSpec("expr", ast=parse_seqspec(text), expr=text, params=dict(params or {}))


# name -> (closed form or None, required params)
FAMILIES: dict[str, tuple[str | None, tuple[str, ...]]] = {
    "constant": ("c", ("c",)),
    "geometric": ("r^k", ("r",)),
    "alternating": ("(-1)^k", ()),
    "perturbed_const": ("1 + 1/2^k", ()),
    "harmonic_shift": ("1 + 1/(k+1)", ()),
    "binomial_row": (None, ("n",)),
    "linear": ("k", ()),
}


def builtin_family(name: str, params: Mapping[str, Fraction] | None = None) -> SeqSpec:
    try:
        form, required = FAMILIES[name]
    except KeyError:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None
    params = {p: Fraction(v) for p, v in (params or {}).items()}
    for p in required:
        if p not in params:
            raise MissingParam(f"family {name!r} requires parameter {p!r}")
    if name == "binomial_row":
        n = params["n"]
        if n.denominator != 1 or n < 0:
            raise EvalError(f"binomial_row needs a nonnegative integer n, got {format_scalar(n)}")
        n = n.numerator
        terms = tuple(Fraction(math.comb(n, j)) for j in range(n + 1))
        return SeqSpec("builtin", terms=terms, name=name, params=params)
    return SeqSpec("builtin", ast=parse_seqspec(form), expr=form, name=name, params=params)
