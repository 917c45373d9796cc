"""``lco`` command-line front end.

Exit codes: 0 clean, 1 internal/IO error, 2 spec parse or evaluation error,
3 witness found under ``--expect-nonneg``, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .analysis import (
    DEFAULT_EPS,
    DEFAULT_WINDOW,
    bound_certificate,
    detect_monotone,
    diagnose_convergence,
    estimate_decay,
    monotone_criterion,
    predict_iterated_decay,
)
from .errors import EvalError, LcoError, MissingParam, NonPositiveTerm, ParseError, UnknownFamily
from .exactnum import EXACT, NumericMode, format_scalar, parse_scalar
from .lco import apply_L, check_log_concave, probe_depth
from .seqspec import SeqSpec, builtin_family, closed_form, explicit
from .sequence_model import Sequence, materialize
from .series import l_series_report

EXIT_OK, EXIT_INTERNAL, EXIT_SPEC, EXIT_WITNESS, EXIT_USAGE = 0, 1, 2, 3, 64
COMMANDS = ("eval", "apply", "probe", "analyze", "series")
SPEC_ERRORS = (ParseError, EvalError, UnknownFamily, MissingParam)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="closed form in k, e.g. '1 + 1/2^k'")
    src.add_argument("--builtin", help="built-in family name")
    src.add_argument("--explicit", help="comma-separated terms, e.g. '1,4,6,4,1'")
    src.add_argument("--spec-file", help="JSON spec, or one JSON spec per line for batch runs")
    common.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--horizon", type=int, default=128)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--eps", help="float sign tolerance (float mode) or convergence tolerance (exact mode)")
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    common.add_argument("--expect-nonneg", action="store_true")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batch spec files")

    parser = _Parser(prog="lco", description="Log-concave operator analysis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _params(pairs: list[str]) -> dict[str, Fraction]:
    out = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"--param expects NAME=VALUE, got {pair!r}")
        out[name.strip()] = parse_scalar(value)
    return out


def load_specs(args) -> list[SeqSpec]:
    params = _params(args.param)
    if args.expr is not None:
        return [closed_form(args.expr, params)]
    if args.builtin is not None:
        return [builtin_family(args.builtin, params)]
    if args.explicit is not None:
        return [explicit([t for t in args.explicit.split(",")])]
    with open(args.spec_file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return [SeqSpec.from_json(json.loads(text))]
    except json.JSONDecodeError:
        return [SeqSpec.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def _terms(seq: Sequence) -> list[str]:
    return [format_scalar(t) for t in seq.terms]


def _seq_json(seq: Sequence) -> dict:
    return {"kind": seq.kind, "horizon": seq.horizon, "length": len(seq), "terms": _terms(seq)}


def _check_json(check) -> dict:
    return {
        "status": check.status,
        "witness": check.witness.to_json() if check.witness else None,
        "indeterminateK": check.indeterminate_index,
        "boundaryIndices": check.boundary,
    }


def _ratio_nonincreasing(seq: Sequence) -> bool:
    a = seq.terms
    ratios = [a[k + 1] / a[k] for k in range(len(a) - 1)]
    return all(x >= y for x, y in zip(ratios, ratios[1:]))


def analyze(seq: Sequence, depth: int, W: int, eps) -> dict:
    check = check_log_concave(seq)
    mono = detect_monotone(seq) if len(seq) >= 2 else None
    cert = bound_certificate(seq)
    W = min(W, len(seq))
    conv = diagnose_convergence(seq, W, eps) if W >= 2 else None
    image = apply_L(seq)
    img_w = min(W, len(image))
    img_conv = diagnose_convergence(image, img_w, eps) if img_w >= 2 else None
    crit = monotone_criterion(seq, W, eps) if W >= 2 else None
    positive = all(t > 0 for t in seq.terms)
    decay, decay_json = None, {"valid": False, "reason": "too few terms"}
    try:
        if len(seq) >= 2:
            decay = estimate_decay(seq)
            decay_json = decay.to_json()
    except NonPositiveTerm as exc:
        decay_json = {"valid": False, "reason": f"NonPositiveTerm: k={exc.k}"}
    iterated = []
    if decay is not None and decay.valid:
        iterated = [predict_iterated_decay(decay, i).to_json() for i in range(1, depth + 1)]
    criteria = {
        "log_concave": check.nonnegative,
        "bounded_image_within_2M2": cert.holds_for(seq),
        "eventually_monotone": mono is not None,
        "operator_image_converges_to_zero": bool(
            img_conv is not None and img_conv.verdict == "Converges"
            and abs(img_conv.limit_estimate) <= img_conv.eps),
        "monotone_bounded_criterion": bool(crit and crit.satisfied),
        "ratio_nonincreasing": (_ratio_nonincreasing(seq) if positive and check.nonnegative and len(seq) > 2
                                else None),
        "exponential_decay_certificate": bool(decay and decay.valid),
        "summable_and_eventually_monotone": bool(decay and decay.valid and mono is not None),
    }
    return {
        "logConcavity": _check_json(check),
        "monotone": mono.to_json() if mono else None,
        "bound": {**cert.to_json(), "holds": criteria["bounded_image_within_2M2"]},
        "convergence": conv.to_json() if conv else None,
        "imageConvergence": img_conv.to_json() if img_conv else None,
        "monotoneCriterion": crit.to_json() if crit else None,
        "decay": decay_json,
        "iteratedDecay": iterated,
        "criteria": criteria,
    }


def run_one(command: str, spec: SeqSpec, opts: dict) -> dict:
    """Run one command on one spec; returns ``{"results": ..., "witness": bool}``."""
    mode = opts["mode"]
    seq = materialize(spec, opts["horizon"], mode)
    depth = opts["depth"]
    witness = False
    if command == "eval":
        results = _seq_json(seq)
    elif command == "apply":
        image = apply_L(seq)
        check = check_log_concave(seq)
        witness = check.witness is not None
        results = {**_seq_json(image), "window": [0, len(image) - 1], "check": _check_json(check)}
        results["boundaryIndices"] = check.boundary
    elif command == "probe":
        report = probe_depth(seq, depth)
        witness = report.witness is not None
        results = report.to_json()
    elif command == "analyze":
        results = analyze(seq, depth, opts["window"], opts["conv_eps"])
        witness = results["logConcavity"]["witness"] is not None
    elif command == "series":
        decay = None
        decay_json = None
        if mode.exact and all(t > 0 for t in seq.terms) and len(seq) >= 2:
            est = estimate_decay(seq)
            decay_json = est.to_json()
            decay = est if est.valid else None
        results = {**l_series_report(seq, depth, decay).to_json(), "decay": decay_json}
    else:
        raise UsageError(f"unknown command {command!r}")
    return {"results": results, "witness": witness}


def _run_one_packed(job):
    return run_one(*job)


def _csv(results: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "value"])
    for k, v in enumerate(results["terms"]):
        w.writerow([k, v])
    return buf.getvalue()


def emit_report(specs: list[SeqSpec], outcomes: list[dict], fmt: str = "json") -> str:
    """Serialize deterministically; identical inputs give byte-identical text."""
    if fmt == "csv":
        if len(outcomes) != 1:
            raise UsageError("csv output supports a single sequence only")
        return _csv(outcomes[0]["results"])
    if len(specs) == 1:
        doc = {"input": specs[0].to_json(), "results": outcomes[0]["results"], "version": __version__}
    else:
        doc = {"input": [s.to_json() for s in specs],
               "results": [o["results"] for o in outcomes], "version": __version__}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _validate(args) -> dict:
    if args.horizon < 1 or args.depth < 1 or args.window < 2 or args.jobs < 1:
        raise UsageError("--horizon and --depth must be >= 1, --window >= 2, --jobs >= 1")
    if args.command in ("probe", "series") and args.horizon <= args.depth:
        raise UsageError("--horizon must exceed --depth")
    if args.format == "csv" and args.command not in ("eval", "apply"):
        raise UsageError("csv output is only available for eval and apply")
    try:
        eps = parse_scalar(args.eps) if args.eps is not None else None
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--eps expects a rational, got {args.eps!r}") from None
    if eps is not None and eps <= 0:
        raise UsageError("--eps must be positive")
    if args.mode == "float":
        mode = NumericMode.float_(float(eps)) if eps is not None else NumericMode.float_()
        conv_eps = DEFAULT_EPS
    else:
        mode = EXACT
        conv_eps = eps if eps is not None else DEFAULT_EPS
    return {"mode": mode, "horizon": args.horizon, "depth": args.depth,
            "window": args.window, "conv_eps": conv_eps}


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _validate(args)
        specs = load_specs(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"lco: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SPEC_ERRORS + (ValueError, KeyError) as exc:
        print(f"lco: spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"lco: cannot read spec: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    try:
        jobs = [(args.command, spec, opts) for spec in specs]
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                outcomes = list(pool.map(_run_one_packed, jobs))
        else:
            outcomes = [run_one(*job) for job in jobs]
        text = emit_report(specs, outcomes, args.format)
    except SPEC_ERRORS as exc:
        print(f"lco: spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except UsageError as exc:
        print(f"lco: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LcoError as exc:
        print(f"lco: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"lco: IoError: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    if args.expect_nonneg and any(o["witness"] for o in outcomes):
        return EXIT_WITNESS
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
