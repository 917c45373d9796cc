"""Monotonicity, boundedness, convergence and exponential-decay diagnostics.

Everything here looks at a finite window.  Verdicts are evidence about that
window, never proofs about the infinite sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidEstimate, NonPositiveTerm
from .exactnum import Scalar, format_scalar
from .lco import apply_L
from .sequence_model import Sequence

DEFAULT_WINDOW = 16
DEFAULT_EPS = Fraction(1, 10**6)
DEFAULT_MAGNITUDE_BOUND = Fraction(100)
MIN_TAIL = 3


@dataclass(frozen=True)
class Monotone:
    direction: str  # "increasing" | "decreasing"
    start: int

    def to_json(self) -> dict:
        return {"direction": self.direction, "N": self.start}


def _monotone_tail_start(terms, ok) -> int:
    j = len(terms) - 1
    while j > 0 and ok(terms[j - 1], terms[j]):
        j -= 1
    return j


def detect_monotone(seq: Sequence, start: int = 0) -> Monotone | None:
    """Smallest ``N >= start`` from which the window is weakly monotone.

    Needs at least three trailing terms.  A constant tail counts as decreasing.
    """
    a = seq.terms
    if len(a) < 2:
        raise ValueError("detect_monotone needs at least two terms")
    candidates = []
    for direction, ok in (("decreasing", lambda x, y: x >= y), ("increasing", lambda x, y: x <= y)):
        n = max(_monotone_tail_start(a, ok), start)
        if len(a) - n >= MIN_TAIL:
            candidates.append((n, direction))
    if not candidates:
        return None
    n, direction = min(candidates, key=lambda c: c[0])
    return Monotone(direction, n)


@dataclass(frozen=True)
class BoundCertificate:
    M: Scalar
    derived_bound: Scalar

    def holds_for(self, seq: Sequence) -> bool:
        """Check ``|L(seq)_k| <= 2 M^2`` at every index of the image."""
        if len(seq) < 2 and seq.truncated:
            return True
        return all(abs(b) <= self.derived_bound for b in apply_L(seq).terms)

    def to_json(self) -> dict:
        return {"M": format_scalar(self.M), "derivedBound": format_scalar(self.derived_bound)}


def bound_certificate(seq: Sequence) -> BoundCertificate:
    m = max(abs(t) for t in seq.terms)
    return BoundCertificate(m, 2 * m * m)


@dataclass(frozen=True)
class ConvergenceDiagnosis:
    verdict: str  # Converges | DivergesUnbounded | Oscillates | Indeterminate
    window: int
    eps: Scalar
    limit_estimate: Scalar | None = None
    threshold_index: int | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "limitEstimate": None if self.limit_estimate is None else format_scalar(self.limit_estimate),
            "W": self.window,
            "eps": format_scalar(self.eps),
            "thresholdIndex": self.threshold_index,
        }


def _weakly_monotone(xs) -> bool:
    return all(x <= y for x, y in zip(xs, xs[1:])) or all(x >= y for x, y in zip(xs, xs[1:]))


def diagnose_convergence(seq: Sequence, W: int = DEFAULT_WINDOW, eps=DEFAULT_EPS,
                         magnitude_bound=DEFAULT_MAGNITUDE_BOUND) -> ConvergenceDiagnosis:
    """Finite-horizon classifier of the tail behaviour.

    * ``Converges``: the last ``W`` terms lie within ``eps`` of each other.
    * ``DivergesUnbounded``: ``|a_k|`` is non-decreasing over the last ``W``
      terms, ends above ``magnitude_bound``, and its growth is not slowing
      down between the last two blocks of ``W`` terms.
    * ``Oscillates``: the tail is not monotone.
    * ``Indeterminate``: anything else (e.g. slow monotone drift).
    """
    a = seq.terms
    if not 2 <= W <= len(a):
        raise ValueError(f"need 2 <= W <= {len(a)}, got W={W}")
    if seq.mode.exact:
        eps = Fraction(eps)
        magnitude_bound = Fraction(magnitude_bound)
    else:
        eps, magnitude_bound = float(eps), float(magnitude_bound)
    tail = a[-W:]
    lo, hi = min(tail), max(tail)
    if hi - lo <= eps:
        # first index from which the whole remaining tail fits in an eps band
        n = len(a) - 1
        run_lo = run_hi = a[-1]
        while n > 0:
            nlo, nhi = min(run_lo, a[n - 1]), max(run_hi, a[n - 1])
            if nhi - nlo > eps:
                break
            run_lo, run_hi, n = nlo, nhi, n - 1
        return ConvergenceDiagnosis("Converges", W, eps, (lo + hi) / 2, n)

    mags = [abs(x) for x in tail]
    if all(x <= y for x, y in zip(mags, mags[1:])) and mags[-1] > magnitude_bound and mags[-1] > mags[0]:
        growing = True
        if len(a) >= 2 * W - 1:
            before = abs(a[-2 * W + 1])
            growing = mags[-1] - mags[0] >= mags[0] - before
        if growing:
            return ConvergenceDiagnosis("DivergesUnbounded", W, eps)
    if not _weakly_monotone(tail):
        return ConvergenceDiagnosis("Oscillates", W, eps)
    return ConvergenceDiagnosis("Indeterminate", W, eps)


@dataclass(frozen=True)
class MonotoneCriterion:
    """Monotone + bounded window with a convergent operator image."""

    satisfied: bool
    monotone: Monotone | None
    bounded: bool
    image: ConvergenceDiagnosis | None
    limit_near_zero: bool | None

    def to_json(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "monotone": self.monotone.to_json() if self.monotone else None,
            "bounded": self.bounded,
            "imageConvergence": self.image.to_json() if self.image else None,
            "imageLimitNearZero": self.limit_near_zero,
            "statement": "a_k convergent with L-limit 0" if self.satisfied else None,
        }


def monotone_criterion(seq: Sequence, W: int = DEFAULT_WINDOW, eps=DEFAULT_EPS) -> MonotoneCriterion:
    """Combined check: eventually monotone, bounded, and ``L(seq)`` converging to 0.

    Boundedness is required explicitly; over a window it means the sequence
    is not diagnosed as ``DivergesUnbounded``.
    """
    mono = detect_monotone(seq) if len(seq) >= 2 else None
    bounded = len(seq) >= W and diagnose_convergence(seq, W, eps).verdict != "DivergesUnbounded"
    image = None
    near_zero = None
    if mono is not None and bounded:
        img = apply_L(seq)
        if len(img) >= W:
            image = diagnose_convergence(img, W, eps)
            if image.verdict == "Converges":
                near_zero = abs(image.limit_estimate) <= image.eps
    satisfied = bool(image is not None and image.verdict == "Converges" and near_zero)
    return MonotoneCriterion(satisfied, mono, bounded, image, near_zero)


@dataclass(frozen=True)
class DecayEstimate:
    """Envelope ``a_k <= C r^k`` with ``C = max(a_0..a_N) / r^N``."""

    C: Fraction
    r: Fraction
    N: int
    valid: bool
    residual: Fraction | None = None
    depth: int = 0
    reason: str | None = None

    def envelope(self, k: int) -> Fraction:
        return self.C * self.r**k

    def to_json(self) -> dict:
        return {
            "C": format_scalar(self.C),
            "r": format_scalar(self.r),
            "N": self.N,
            "valid": self.valid,
            "residual": None if self.residual is None else format_scalar(self.residual),
            "depth": self.depth,
            "reason": self.reason,
        }


def estimate_decay(seq: Sequence) -> DecayEstimate:
    """Build the exponential-decay certificate from the ratio tail.

    ``N`` is where the ratios ``a_{k+1}/a_k`` start being non-increasing
    through the end of the window (at least two ratios are required, so a
    single trailing ratio is not evidence).  ``r = a_{N+1}/a_N`` is the
    largest tail ratio.  The certificate is checked exactly at every index.
    """
    a = [Fraction(t) for t in seq.terms]
    for k, t in enumerate(a):
        if t <= 0:
            raise NonPositiveTerm(k, format_scalar(t))
    if len(a) < 2:
        raise ValueError("estimate_decay needs at least two terms")
    ratios = [a[k + 1] / a[k] for k in range(len(a) - 1)]
    n = len(ratios) - 1
    while n > 0 and ratios[n - 1] >= ratios[n]:
        n -= 1
    r = ratios[n]
    C = max(a[: n + 1]) / r**n
    residual = max(t - C * r**k for k, t in enumerate(a))
    reason = None
    if len(ratios) - n < 2:
        reason = "NoDecay: no non-increasing ratio tail"
    elif r >= 1:
        reason = "NoDecay: tail ratio r >= 1"
    elif residual > 0:
        reason = "certificate violated"
    return DecayEstimate(C, r, n, reason is None, residual, 0, reason)


def predict_iterated_decay(est: DecayEstimate, i: int) -> DecayEstimate:
    """Envelope for ``L^i``: ``C`` and ``r`` are squared ``i`` times."""
    if not est.valid:
        raise InvalidEstimate("cannot iterate an invalid decay estimate")
    if i < 0:
        raise ValueError("i must be nonnegative")
    C, r = est.C, est.r
    for _ in range(i):
        C, r = C * C, r * r
    return DecayEstimate(C, r, est.N, True, None, est.depth + i)
