"""Exception hierarchy shared by every module of the package."""


class LcoError(Exception):
    """Base class for all errors raised by logconcave."""


class ZeroDenominator(LcoError, ZeroDivisionError):
    pass


class DivByZero(LcoError, ZeroDivisionError):
    pass


class ModeMixError(LcoError, TypeError):
    """Exact and float values were combined in one computation."""


class ParseError(LcoError, ValueError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class EvalError(LcoError, ValueError):
    """A closed form could not be evaluated at index ``k``."""

    def __init__(self, message: str, k: int | None = None, subexpr: str | None = None):
        self.k = k
        self.subexpr = subexpr
        where = []
        if subexpr is not None:
            where.append(f"in {subexpr!r}")
        if k is not None:
            where.append(f"at k={k}")
        super().__init__(" ".join([message, *where]))


class ExprDivByZero(EvalError, ZeroDivisionError):
    pass


class NonIntegerExponent(EvalError):
    pass


class NegativeBinomialArg(EvalError):
    pass


class UnknownFamily(LcoError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class MissingParam(LcoError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class HorizonExceeded(LcoError, IndexError):
    """A truncated sequence was read at or beyond its horizon."""


class RangeError(LcoError, IndexError):
    pass


class DepthTooDeep(LcoError):
    """Iterating the operator would exceed the digit budget."""


class NonPositiveTerm(LcoError, ValueError):
    def __init__(self, k: int, value):
        self.k = k
        self.value = value
        super().__init__(f"term a_{k} = {value} is not strictly positive")


class InvalidEstimate(LcoError, ValueError):
    pass
