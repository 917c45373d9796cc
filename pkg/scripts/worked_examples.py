"""Print operator images, probes and decay certificates for the built-in families."""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from logconcave.analysis import diagnose_convergence, estimate_decay
from logconcave.errors import NonPositiveTerm
from logconcave.exactnum import approx, format_scalar
from logconcave.lco import check_log_concave, iterate_L
from logconcave.seqspec import builtin_family
from logconcave.sequence_model import materialize


@dataclass
class Config:
    horizon: int = 32
    show: int = 6
    families: list = field(default_factory=lambda: [
        ("alternating", {}),
        ("perturbed_const", {}),
        ("harmonic_shift", {}),
        ("geometric", {"r": Fraction(1, 2)}),
        ("constant", {"c": Fraction(1)}),
        ("linear", {}),
    ])


def describe(name, params, cfg):
    seq = materialize(builtin_family(name, params), cfg.horizon)
    check = check_log_concave(seq)
    head = ", ".join(format_scalar(b) for b in check.image.terms[: cfg.show])
    print(f"== {name} {dict((k, format_scalar(v)) for k, v in params.items()) or ''}")
    print(f"   L(a)   = {head}, ...   boundary={check.boundary}")
    print(f"   status = {check.status}"
          + (f", witness k={check.witness.index} value={format_scalar(check.witness.value)}" if check.witness else ""))
    for i in (1, 2, 3):
        tail = iterate_L(seq, i).terms[-1]
        print(f"   L^{i} last valid term ~ {approx(tail, 6)}")
    print(f"   convergence: {diagnose_convergence(seq).verdict}")
    try:
        est = estimate_decay(seq)
        print(f"   decay: valid={est.valid} C~{approx(est.C, 6)} r={format_scalar(est.r)} N={est.N}"
              + (f" ({est.reason})" if est.reason else ""))
    except NonPositiveTerm as exc:
        print(f"   decay: n/a ({exc})")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--horizon", type=int, default=Config.horizon)
    cfg = Config(horizon=p.parse_args().horizon)
    for name, params in cfg.families:
        describe(name, params, cfg)


if __name__ == "__main__":
    main()
