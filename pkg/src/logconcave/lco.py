"""The operator ``L(a)_k = a_k^2 - a_{k+1} a_{k-1}``, its iterates, and depth probing."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import DepthTooDeep, HorizonExceeded
from .exactnum import Scalar, format_scalar, numerator_digits, sign
from .sequence_model import Sequence

DEFAULT_DIGIT_BUDGET = 10**6


def digit_budget() -> int:
    env = os.environ.get("LCO_DIGIT_BUDGET")
    return int(env) if env else DEFAULT_DIGIT_BUDGET


def apply_L(seq: Sequence) -> Sequence:
    """One application of the operator.

    Finite input keeps its support length (padding supplies both ends).
    Truncated input loses its last index, since ``b_{H-1}`` would need ``a_H``.
    """
    a = seq.terms
    n = len(a)
    z = seq.zero()
    if seq.truncated:
        if n < 2:
            raise HorizonExceeded(f"truncated window of length {n} is too short to apply L")
        out = [a[0] * a[0]]
        out += [a[k] * a[k] - a[k + 1] * a[k - 1] for k in range(1, n - 1)]
        return seq.replace_terms(out)
    if n == 1:
        return seq.replace_terms([a[0] * a[0]])
    out = [a[0] * a[0] - a[1] * z]
    out += [a[k] * a[k] - a[k + 1] * a[k - 1] for k in range(1, n - 1)]
    out.append(a[n - 1] * a[n - 1] - z * a[n - 2])
    return seq.replace_terms(out)


def iterate_L(seq: Sequence, i: int, budget: int | None = None) -> Sequence:
    if i < 0:
        raise ValueError("iteration count must be nonnegative")
    if seq.truncated and len(seq) <= i:
        raise HorizonExceeded(f"window of length {len(seq)} cannot support {i} applications")
    budget = digit_budget() if budget is None else budget
    for depth in range(1, i + 1):
        seq = apply_L(seq)
        _guard_digits(seq, depth, budget)
    return seq


def _guard_digits(seq: Sequence, depth: int, budget: int) -> None:
    if not seq.mode.exact:
        return
    worst = max(numerator_digits(t) for t in seq.terms)
    if worst > budget:
        raise DepthTooDeep(f"depth {depth} produced a term with ~{worst} digits (budget {budget})")


def boundary_indices(image: Sequence) -> list[int]:
    """Indices of an operator image that touch padding or the truncation cut."""
    return sorted({0, len(image) - 1})


@dataclass(frozen=True)
class LcWitness:
    depth: int
    index: int
    value: Scalar

    def to_json(self) -> dict:
        return {"depth": self.depth, "k": self.index, "value": format_scalar(self.value)}


@dataclass(frozen=True)
class LcCheck:
    """Sign scan of one operator image.

    ``status`` is ``"nonneg"``, ``"fails"`` or ``"indeterminate"`` (float mode only).
    """

    status: str
    image: Sequence
    boundary: list[int]
    witness: LcWitness | None = None
    indeterminate_index: int | None = None

    @property
    def nonnegative(self) -> bool:
        return self.status == "nonneg"


def _scan(image: Sequence, depth: int) -> LcCheck:
    boundary = boundary_indices(image)
    first_unknown = None
    for k, b in enumerate(image.terms):
        s = sign(b, image.mode)
        if s is None:
            if first_unknown is None:
                first_unknown = k
        elif s < 0:
            return LcCheck("fails", image, boundary, LcWitness(depth, k, b))
    if first_unknown is not None:
        return LcCheck("indeterminate", image, boundary, indeterminate_index=first_unknown)
    return LcCheck("nonneg", image, boundary)


def check_log_concave(seq: Sequence) -> LcCheck:
    """Scan ``L(seq)`` left to right for the first negative entry."""
    return _scan(apply_L(seq), 1)


@dataclass
class DepthStatus:
    depth: int
    status: str
    witness: LcWitness | None = None
    boundary: list[int] = field(default_factory=list)
    indeterminate_index: int | None = None

    def to_json(self) -> dict:
        out = {"i": self.depth, "status": self.status}
        if self.indeterminate_index is not None:
            out["indeterminateK"] = self.indeterminate_index
        return out


@dataclass
class DepthReport:
    probed_depth: int
    statuses: list[DepthStatus]

    @property
    def witness(self) -> LcWitness | None:
        return self.statuses[-1].witness

    @property
    def verdict(self) -> tuple[str, int]:
        last = self.statuses[-1]
        if last.status == "fails":
            return ("FailsAtDepth", last.depth)
        if last.status == "indeterminate":
            return ("Indeterminate", last.depth)
        return ("IFoldLogConcave", self.probed_depth)

    @property
    def boundary_indices(self) -> list[int]:
        return sorted({k for s in self.statuses for k in s.boundary})

    def to_json(self) -> dict:
        name, depth = self.verdict
        return {
            "probedDepth": self.probed_depth,
            "depths": [s.to_json() for s in self.statuses],
            "witness": self.witness.to_json() if self.witness else None,
            "boundaryIndices": self.boundary_indices,
            "verdict": {"kind": name, "depth": depth},
        }


def probe_depth(seq: Sequence, max_depth: int, budget: int | None = None) -> DepthReport:
    """Check nonnegativity of ``L^i(seq)`` for ``i = 1..max_depth``, stopping at the first failure.

    A clean report only says "up to depth ``max_depth``"; it is not a proof
    of infinite log-concavity.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if seq.truncated and len(seq) <= max_depth:
        raise HorizonExceeded(f"window of length {len(seq)} cannot be probed to depth {max_depth}")
    budget = digit_budget() if budget is None else budget
    statuses = []
    current = seq
    for depth in range(1, max_depth + 1):
        current = apply_L(current)
        _guard_digits(current, depth, budget)
        check = _scan(current, depth)
        statuses.append(DepthStatus(depth, check.status, check.witness, check.boundary,
                                    check.indeterminate_index))
        if check.status != "nonneg":
            break
    return DepthReport(statuses[-1].depth, statuses)
