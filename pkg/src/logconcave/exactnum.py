"""Rational scalars and the exact/float numeric modes.

Exact values are :class:`fractions.Fraction`, which already keeps every
result in lowest terms with a positive denominator.  Float mode uses plain
``float`` together with an absolute tolerance for sign decisions.
"""

from __future__ import annotations

import enum
import operator
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

from .errors import DivByZero, ModeMixError, ZeroDenominator

Scalar = Union[Fraction, float]

# exact reports routinely carry integers far beyond the default 4300-digit cap
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class NumericMode:
    """``NumericMode()`` is exact; ``NumericMode.float_(eps)`` compares with tolerance."""

    exact: bool = True
    eps: float | None = None

    def __post_init__(self):
        if self.exact and self.eps is not None:
            raise ValueError("exact mode takes no tolerance")
        if not self.exact and (self.eps is None or not self.eps > 0):
            raise ValueError("float mode requires eps > 0")

    @classmethod
    def float_(cls, eps: float = DEFAULT_EPS) -> NumericMode:
        return cls(exact=False, eps=float(eps))

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def coerce(self, x) -> Scalar:
        """Convert a literal (int, Fraction, float, "p/q") into this mode's scalar."""
        if isinstance(x, str):
            x = parse_scalar(x)
        if self.exact:
            if isinstance(x, float):
                raise ModeMixError("float value supplied in exact mode")
            return Fraction(x)
        return float(x)


EXACT = NumericMode()


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def make_rational(p: int, q: int = 1) -> Fraction:
    if q == 0:
        raise ZeroDenominator(f"{p}/0")
    return Fraction(p, q)


def _check_same_kind(x: Scalar, y: Scalar) -> None:
    if isinstance(x, float) != isinstance(y, float):
        raise ModeMixError(f"cannot combine {type(x).__name__} and {type(y).__name__}")


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def rat_arith(op: str, x: Scalar, y: Scalar) -> Scalar:
    _check_same_kind(x, y)
    if op == "div" and y == 0:
        raise DivByZero(f"{x} / 0")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(x, y)


def rat_pow_int(x: Scalar, e: int) -> Scalar:
    if e < 0 and x == 0:
        raise DivByZero(f"0 ** {e}")
    if isinstance(x, float):
        return x**e
    return Fraction(x) ** int(e)


def rat_compare(x: Scalar, y: Scalar, mode: NumericMode = EXACT) -> Ordering:
    _check_same_kind(x, y)
    if not mode.exact and abs(x - y) <= mode.eps:
        return Ordering.EQUAL
    if x < y:
        return Ordering.LESS
    if x > y:
        return Ordering.GREATER
    return Ordering.EQUAL


def sign(x: Scalar, mode: NumericMode = EXACT) -> int | None:
    """Sign of ``x``; ``None`` when float mode cannot decide (|x| <= eps)."""
    if mode.exact:
        return (x > 0) - (x < 0)
    if abs(x) <= mode.eps:
        return None
    return 1 if x > 0 else -1


def numerator_digits(x: Scalar) -> int:
    """Cheap upper estimate of the decimal digit count of numerator and denominator."""
    if isinstance(x, float):
        return 0
    bits = max(abs(x.numerator).bit_length(), x.denominator.bit_length())
    return bits * 30103 // 100000 + 1


def format_scalar(x: Scalar) -> str:
    """Serialize as ``"p/q"`` (``"p"`` when q == 1) or the shortest round-trip float."""
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_scalar(text: str) -> Fraction:
    """Inverse of :func:`format_scalar` for exact values; also accepts decimals like ``1e-6``."""
    text = text.strip()
    if "/" in text:
        p, _, q = text.partition("/")
        return make_rational(int(p), int(q))
    return Fraction(text)


def approx(x: Scalar, digits: int = 12) -> str:
    """Decimal rendering to ``digits`` significant digits, safe for huge rationals."""
    if isinstance(x, float):
        return format(x, f".{digits}g")
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return format(d, f".{digits}g") if d != 0 else "0"
