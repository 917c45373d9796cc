"""Finite and horizon-truncated sequences with zero padding outside the support."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import EvalError, HorizonExceeded, ModeMixError, RangeError
from .exactnum import EXACT, NumericMode, Scalar, parse_scalar
from .seqspec import SeqSpec


@dataclass(frozen=True)
class Sequence:
    """Terms ``a_0 .. a_{len-1}``.

    A finite sequence is genuinely zero outside its support.  A truncated one
    is a prefix of an infinite family: reads at ``k >= horizon`` raise
    :class:`HorizonExceeded` instead of inventing zeros.
    """

    terms: tuple
    truncated: bool = False
    provenance: SeqSpec | None = None
    offset: int = 0
    mode: NumericMode = EXACT

    def __post_init__(self):
        if len(self.terms) < 1:
            raise ValueError("a sequence needs at least one term")
        want = Fraction if self.mode.exact else float
        for t in self.terms:
            if not isinstance(t, want):
                raise ModeMixError(f"{type(t).__name__} term in {self.mode.name} sequence")

    @property
    def kind(self) -> str:
        return "truncated" if self.truncated else "finite"

    @property
    def horizon(self) -> int | None:
        return len(self.terms) if self.truncated else None

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, k: int):
        return self.term_at(k)

    def zero(self) -> Scalar:
        return Fraction(0) if self.mode.exact else 0.0

    def term_at(self, k: int) -> Scalar:
        return term_at(self, k)

    def replace_terms(self, terms: Iterable[Scalar], truncated: bool | None = None) -> Sequence:
        return Sequence(tuple(terms), self.truncated if truncated is None else truncated,
                        self.provenance, self.offset, self.mode)


def term_at(seq: Sequence, k: int) -> Scalar:
    if k < 0:
        return seq.zero()
    if k < len(seq.terms):
        return seq.terms[k]
    if seq.truncated:
        raise HorizonExceeded(f"read at k={k} beyond horizon {len(seq.terms)}")
    return seq.zero()


def from_terms(terms: Iterable, mode: NumericMode = EXACT) -> Sequence:
    """Finite sequence from numbers or ``"p/q"`` strings."""
    vals = tuple(mode.coerce(parse_scalar(t) if isinstance(t, str) else t) for t in terms)
    return Sequence(vals, mode=mode)


def materialize(spec: SeqSpec, horizon: int, mode: NumericMode = EXACT) -> Sequence:
    """Evaluate ``spec`` exactly on ``0..horizon-1`` (explicit lists ignore the horizon)."""
    if spec.is_explicit:
        return Sequence(tuple(mode.coerce(t) for t in spec.terms), False, spec, mode=mode)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    terms = []
    for k in range(horizon):
        try:
            terms.append(mode.coerce(spec.value_at(k)))
        except EvalError as exc:
            if exc.k is None:
                exc.k = k
            raise
    return Sequence(tuple(terms), True, spec, mode=mode)


def window(seq: Sequence, start: int, stop: int) -> Sequence:
    """Inclusive slice ``start..stop`` as a finite sequence reindexed from 0."""
    if not 0 <= start <= stop < len(seq.terms):
        raise RangeError(f"window [{start}, {stop}] outside 0..{len(seq.terms) - 1}")
    return Sequence(seq.terms[start:stop + 1], False, seq.provenance,
                    seq.offset + start, seq.mode)
