"""Partial sums, the series of operator images, and geometric comparison bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import accumulate

from .analysis import DecayEstimate, predict_iterated_decay
from .errors import HorizonExceeded, InvalidEstimate
from .exactnum import Scalar, approx, format_scalar
from .lco import iterate_L
from .sequence_model import Sequence


def partial_sums(seq: Sequence) -> list[Scalar]:
    return list(accumulate(seq.terms))


def split_sums(seq: Sequence) -> tuple[Scalar, Scalar, tuple[int, int]]:
    """``sum a_k^2`` and ``sum a_{k+1} a_{k-1}`` over the index range of ``L(seq)``."""
    m = len(seq) - 1 if seq.truncated else len(seq)
    squares = sum((seq[k] * seq[k] for k in range(m)), seq.zero())
    cross = sum((seq[k + 1] * seq[k - 1] for k in range(m)), seq.zero())
    return squares, cross, (0, m - 1)


def comparison_bound(est: DecayEstimate, depth: int = 1) -> Scalar:
    """Geometric-series bound on ``sum_k L^depth(a)_k`` from a decay envelope.

    ``L^i(a)_k <= C_i r_i^k`` so the sum is at most ``C_i / (1 - r_i)``; at
    depth 1 this is ``C^2 / (1 - r^2)``.
    """
    if not est.valid:
        raise InvalidEstimate("comparison bound needs a valid decay estimate")
    env = predict_iterated_decay(est, depth)
    return env.C / (1 - env.r)


def _num(x: Scalar) -> dict:
    return {"exact": format_scalar(x), "approx": approx(x)}


@dataclass
class SeriesReport:
    horizon: int
    partial: list[Scalar]
    per_depth: list[list[Scalar]]
    split_squares: Scalar
    split_cross: Scalar
    split_window: tuple[int, int]
    comparison_bounds: dict[int, Scalar] = field(default_factory=dict)

    @property
    def total(self) -> Scalar:
        return self.partial[-1]

    @property
    def l_total(self) -> Scalar:
        return self.per_depth[1][-1]

    @property
    def comparison_bound(self) -> Scalar | None:
        return self.comparison_bounds.get(1)

    @property
    def bound_holds(self) -> bool | None:
        if 1 not in self.comparison_bounds:
            return None
        return self.l_total <= self.comparison_bounds[1]

    def to_json(self) -> dict:
        return {
            "horizon": self.horizon,
            "total": _num(self.total),
            "partialSums": [format_scalar(s) for s in self.partial],
            "lSeries": [
                {"depth": i, "window": [0, len(sums) - 1], "total": _num(sums[-1]),
                 "partialSums": [format_scalar(s) for s in sums]}
                for i, sums in enumerate(self.per_depth)
            ],
            "splitSums": {
                "window": list(self.split_window),
                "squares": _num(self.split_squares),
                "cross": _num(self.split_cross),
            },
            "comparisonBound": None if self.comparison_bound is None else _num(self.comparison_bound),
            "comparisonBoundsPerDepth": {str(i): _num(b) for i, b in sorted(self.comparison_bounds.items())},
            "boundHolds": self.bound_holds,
            "boundHoldsPerDepth": {str(i): self.per_depth[i][-1] <= b
                                   for i, b in sorted(self.comparison_bounds.items())},
        }


def l_series_report(seq: Sequence, max_depth: int, decay: DecayEstimate | None = None) -> SeriesReport:
    """Partial sums of ``L^i(seq)`` for ``i = 0..max_depth`` plus the split-sum identity.

    With a valid decay estimate, geometric comparison bounds are attached for
    every depth ``1..max_depth``.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if seq.truncated and len(seq) <= max_depth:
        raise HorizonExceeded(f"window of length {len(seq)} cannot support depth {max_depth}")
    if decay is not None and not decay.valid:
        raise InvalidEstimate("decay estimate supplied but not valid")
    per_depth = [partial_sums(seq)]
    current = seq
    for i in range(1, max_depth + 1):
        current = iterate_L(current, 1)
        per_depth.append(partial_sums(current))
    squares, cross, win = split_sums(seq)
    # finite rearrangement of sum(b_k); exact for every input
    if seq.mode.exact and per_depth[1][-1] != squares - cross:
        raise ArithmeticError("split-sum identity violated")
    bounds = {}
    if decay is not None:
        bounds = {i: comparison_bound(decay, i) for i in range(1, max_depth + 1)}
    return SeriesReport(len(seq), per_depth[0], per_depth, squares, cross, win, bounds)
