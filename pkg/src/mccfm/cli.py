"""Command-line interface.

Subcommands::

    mccfm metrics --tp N --fp N --fn N [--tn N] [--digits D] [--undefined-mcc-as-zero] [--strict]
    mccfm verify-limit [--show-steps]
    mccfm converge --tp N --fp N --fn N --tn-list a,b,c [--digits D]
    mccfm detect-eval --input PATH --iou-threshold T [--digits D]

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 undefined
metric under ``--strict``, 4 symbolic verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from mccfm.detection import DetectionInputError, evaluate_dataset, parse_dataset
from mccfm.exact import Surd, rational_to_decimal, surd_to_decimal
from mccfm.metrics import (
    NOT_COMPUTABLE,
    ConfusionMatrix,
    MetricReport,
    PartialCounts,
    UndefinedMetricError,
    convergence_table,
    metric_report,
)
from mccfm.symbolic import canonicalize, is_identically_equal, limit_at_infinity

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_UNDEFINED = 3
EXIT_REFUTED = 4

DEFAULT_DIGITS = 6

MCC_TEXT = "(tp*tn - fp*fn)/sqrt((tp+fp)*(tp+fn)*(tn+fp)*(tn+fn))"
FM_TEXT = "sqrt((tp/(tp+fn))*(tp/(tp+fp)))"
CLAIM_TEXT = "tp/sqrt((tp+fn)*(tp+fp))"
# successive rewrites of the limit body
REWRITE_CHAIN = (
    ("mcc", MCC_TEXT),
    ("distributed", "(tp - fp*(fn/tn))/sqrt((tp+fp)*(tp+fn)*((tn+fp)/tn)*((tn+fn)/tn))"),
    ("cancelled", "(tp - fp*(fn/tn))/sqrt((tp+fp)*(tp+fn)*(1 + fp/tn)*(1 + fn/tn))"),
)
VANISHING_TERMS = ("fn/tn", "fp/tn", "fn*fp/tn")

NOT_COMPUTABLE_TN_ABSENT = "not-computable (TN absent)"
NOT_COMPUTABLE_OPEN_WORLD = "not-computable (TN unbounded in open-world detection)"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"counts must be nonnegative, got {value}")
    return value


def _digits(text: str) -> int:
    value = _count(text)
    if value < 1:
        raise argparse.ArgumentTypeError("digits must be at least 1")
    return value


def _tn_list(text: str) -> list[int]:
    parts = text.split(",")
    if not text.strip() or any(not p.strip() for p in parts):
        raise argparse.ArgumentTypeError(f"malformed tn list: {text!r}")
    return [_count(p.strip()) for p in parts]


def _threshold(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"IoU threshold must satisfy 0 < T <= 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mccfm", description="Exact confusion-matrix metrics and the MCC -> FM limit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metrics", help="exact PPV, TPR, F1, FM and MCC for given counts")
    for name in ("tp", "fp", "fn"):
        p.add_argument(f"--{name}", type=_count, required=True)
    p.add_argument("--tn", type=_count)
    p.add_argument("--digits", type=_digits, default=DEFAULT_DIGITS)
    p.add_argument("--undefined-mcc-as-zero", action="store_true",
                   help="report an undefined MCC as 0 (labelled as a convention)")
    p.add_argument("--strict", action="store_true", help="exit 3 if any reported metric is undefined")

    p = sub.add_parser("verify-limit", help="symbolically check lim_{tn->oo} MCC == FM")
    p.add_argument("--show-steps", action="store_true")

    p = sub.add_parser("converge", help="CSV table of MCC, FM and their gap for several tn")
    for name in ("tp", "fp", "fn"):
        p.add_argument(f"--{name}", type=_count, required=True)
    p.add_argument("--tn-list", type=_tn_list, required=True)
    p.add_argument("--digits", type=_digits, default=DEFAULT_DIGITS)

    p = sub.add_parser("detect-eval", help="match boxes and report metrics from pooled TP/FP/FN")
    p.add_argument("--input", required=True)
    p.add_argument("--iou-threshold", type=_threshold, required=True)
    p.add_argument("--digits", type=_digits, default=DEFAULT_DIGITS)
    return parser


def _decimal_text(value: Fraction | Surd, digits: int) -> str:
    if isinstance(value, Surd):
        return surd_to_decimal(value, digits)
    return rational_to_decimal(value, digits)


def _metric_entry(value, digits: int):
    if value is None:
        return "undefined"
    return {"exact": str(value), "decimal": _decimal_text(value, digits)}


def _report_document(
    counts: dict, report: MetricReport, digits: int, *, mcc_zero: bool, not_computable_text: str
) -> tuple[dict, bool]:
    """Key/value document for a report plus whether any reported metric is undefined."""
    doc = dict(counts)
    undefined = False
    for key in ("ppv", "tpr", "f1", "fm"):
        value = getattr(report, key)
        undefined |= value is None
        doc[key] = _metric_entry(value, digits)
    if report.mcc is NOT_COMPUTABLE:
        doc["mcc"] = not_computable_text
    elif report.mcc is None and mcc_zero:
        doc["mcc"] = {
            "exact": "0",
            "decimal": rational_to_decimal(0, digits),
            "convention": "undefined MCC reported as 0",
        }
    else:
        undefined |= report.mcc is None
        doc["mcc"] = _metric_entry(report.mcc, digits)
    return doc, undefined


def _emit(doc: dict, out: TextIO) -> None:
    out.write(json.dumps(doc, indent=2) + "\n")


def run_metrics(args: argparse.Namespace, out: TextIO) -> int:
    if args.tn is None:
        c: ConfusionMatrix | PartialCounts = PartialCounts(args.tp, args.fp, args.fn)
        counts = {"tp": args.tp, "fp": args.fp, "fn": args.fn, "tn": None}
    else:
        c = ConfusionMatrix(args.tp, args.fp, args.fn, args.tn)
        counts = {"tp": args.tp, "fp": args.fp, "fn": args.fn, "tn": args.tn}
    doc, undefined = _report_document(
        counts, metric_report(c), args.digits,
        mcc_zero=args.undefined_mcc_as_zero, not_computable_text=NOT_COMPUTABLE_TN_ABSENT,
    )
    _emit(doc, out)
    if args.strict and undefined:
        return EXIT_UNDEFINED
    return EXIT_OK


def verify_limit(out: TextIO, show_steps: bool = False, claim_text: str = CLAIM_TEXT) -> int:
    """Print the derivation transcript and return the exit code."""
    mcc = canonicalize(MCC_TEXT)
    fm = canonicalize(FM_TEXT)
    claim = canonicalize(claim_text)
    limit = limit_at_infinity(mcc, "tn")

    print(f"mcc   := {MCC_TEXT}", file=out)
    print(f"fm    := {FM_TEXT}", file=out)
    print(f"claim := {claim_text}", file=out)
    print(f"canonical(mcc)   = {mcc}", file=out)
    print(f"canonical(fm)    = {fm}", file=out)
    print(f"canonical(claim) = {claim}", file=out)
    print(f"limit(mcc, tn -> oo) = {limit}", file=out)

    verdicts = []
    if show_steps:
        forms = [(name, canonicalize(text)) for name, text in REWRITE_CHAIN]
        for name, text in REWRITE_CHAIN:
            print(f"step {name}: {text}", file=out)
        for i in range(len(forms)):
            for j in range(i + 1, len(forms)):
                v = is_identically_equal(forms[i][1], forms[j][1])
                verdicts.append(v)
                print(f"step {forms[i][0]} == step {forms[j][0]}: {v}", file=out)
        for text in VANISHING_TERMS:
            print(f"limit({text}, tn -> oo) = {limit_at_infinity(canonicalize(text), 'tn')}", file=out)

    v_fm = is_identically_equal(claim, fm)
    print(f"claim == fm: {v_fm}", file=out)
    if limit.kind == "finite":
        v_lim = is_identically_equal(claim, limit.value)
    else:
        v_lim = "not_equal"
    print(f"claim == limit(mcc): {v_lim}", file=out)
    verdicts += [v_fm, v_lim]

    if all(v == "equal" for v in verdicts):
        print("VERIFIED", file=out)
        return EXIT_OK
    print("REFUTED" if "not_equal" in verdicts else "INDETERMINATE", file=out)
    return EXIT_REFUTED


def run_converge(args: argparse.Namespace, out: TextIO) -> int:
    try:
        rows = convergence_table(PartialCounts(args.tp, args.fp, args.fn), args.tn_list, args.digits)
    except UndefinedMetricError as exc:
        raise UsageError(f"{exc}; the convergence table needs a defined FM") from None
    out.write("tn,mcc,fm,gap_upper_bound\n")
    for row in rows:
        out.write(f"{row.tn},{row.mcc},{row.fm},{row.gap_upper_bound}\n")
    return EXIT_OK


def run_detect_eval(args: argparse.Namespace, out: TextIO) -> int:
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DetectionInputError(f"cannot read {args.input}: {exc.strerror}") from None
    counts, report = evaluate_dataset(parse_dataset(text), args.iou_threshold)
    doc, _ = _report_document(
        {"tp": counts.tp, "fp": counts.fp, "fn": counts.fn}, report, args.digits,
        mcc_zero=False, not_computable_text=NOT_COMPUTABLE_OPEN_WORLD,
    )
    _emit(doc, out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "metrics":
            return run_metrics(args, out)
        if args.command == "verify-limit":
            return verify_limit(out, show_steps=args.show_steps)
        if args.command == "converge":
            return run_converge(args, out)
        return run_detect_eval(args, out)
    except UsageError as exc:
        print(f"mccfm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DetectionInputError as exc:
        print(f"mccfm: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
