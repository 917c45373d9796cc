"""Exact analysis of the log-concave operator ``L(a)_k = a_k^2 - a_{k+1} a_{k-1}``."""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    BoundCertificate,
    ConvergenceDiagnosis,
    DecayEstimate,
    bound_certificate,
    detect_monotone,
    diagnose_convergence,
    estimate_decay,
    monotone_criterion,
    predict_iterated_decay,
)
from .exactnum import EXACT, NumericMode, format_scalar, make_rational, parse_scalar  # noqa: E402
from .lco import DepthReport, LcWitness, apply_L, check_log_concave, iterate_L, probe_depth  # noqa: E402
from .seqspec import SeqSpec, builtin_family, closed_form, eval_expr, explicit, parse_seqspec  # noqa: E402
from .sequence_model import Sequence, from_terms, materialize, term_at, window  # noqa: E402
from .series import SeriesReport, comparison_bound, l_series_report, partial_sums  # noqa: E402
