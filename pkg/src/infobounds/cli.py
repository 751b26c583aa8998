"""Command-line entry point: ``infobounds <command> ...``.

Exit codes: 0 success, 1 violation or failed ordering, 2 parse/validation error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .bounds import Method, evaluate_all
from .compare import ComparisonRow, figure1_rows, ratio_rows, remark1
from .dist import load_instance
from .errors import InfoBoundsError, MissingEvent
from .harness import run_suite
from .measures import all_measures

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def fmt(x: float) -> str:
    return f"{x:.9g}"


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _method(text: str) -> Method:
    for m in Method:
        if text in (m.value, m.name):
            return m
    raise argparse.ArgumentTypeError(f"unknown method {text!r}")


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _write_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def cmd_measures(args, out) -> int:
    joint, _ = load_instance(args.file)
    ms = all_measures(joint)
    for name, value in ms.as_dict().items():
        out.write(f"{name:<20}{fmt(value)}\n")
    return EXIT_OK


def cmd_bound(args, out) -> int:
    joint, event = load_instance(args.file)
    if event is None:
        raise MissingEvent(f"{args.file} has no 'event' field")
    betas = None if args.beta is None else [args.beta]
    reports = evaluate_all(joint, event, beta_grid=betas, alpha=args.alpha)
    if args.method is not None:
        reports = [r for r in reports if r.method is args.method]
    out.write(f"{'method':<17}{'raw':>16}{'value':>16}  {'applicable':<11}note\n")
    for r in reports:
        out.write(
            f"{r.method.name:<17}{fmt(r.raw_value):>16}{fmt(r.value):>16}  "
            f"{'yes' if r.applicable else 'no':<11}{r.condition_note}\n"
        )
    return EXIT_OK


def cmd_verify(args, out) -> int:
    summary = run_suite(
        args.count,
        args.seed,
        size_range=(2, args.max_size),
        density_range=(args.density, args.density),
        workers=args.workers,
    )
    out.write(summary.to_json() + "\n")
    return EXIT_OK if summary.total_violations == 0 else EXIT_FAIL


def cmd_fig1(args, out) -> int:
    rows = figure1_rows(args.k, args.qmin, args.qmax, args.steps)
    _write_csv(ComparisonRow.header(), (r.values() for r in rows), out)
    return EXIT_OK


def cmd_ratio(args, out) -> int:
    rows = ratio_rows(args.q)
    header = ["q", "eq7_value", "cor1_value", "ratio", "inverse_ratio"]
    _write_csv(header, ((r.q, r.eq7_value, r.cor1_value, r.ratio, r.inverse_ratio) for r in rows), out)
    return EXIT_OK


def cmd_remark1(args, out) -> int:
    res = remark1(args.q)
    out.write(f"q                   {fmt(res.q)}\n")
    out.write(f"d = -log(q)/2       {fmt(res.d)}\n")
    out.write(f"eq11 raw            {fmt(res.eq11_raw)}  (expected > 1)\n")
    out.write(f"eq7                 {fmt(res.eq7)}  (expected < 1)\n")
    out.write(f"cor1                {fmt(res.cor1)}  (expected < 1)\n")
    out.write(f"ordering holds      {'yes' if res.holds else 'no'}\n")
    return EXIT_OK if res.holds else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infobounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="I, L, maximal leakage and J_inf of an instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("bound", help="evaluate every bound on an instance with an event")
    p.add_argument("file")
    p.add_argument("--method", type=_method, help="one of: " + ", ".join(m.value for m in Method))
    p.add_argument("--beta", type=float, help="single beta instead of the default grid")
    p.add_argument("--alpha", type=float, help="alpha for the leakage and J_inf bounds")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="seeded soundness suite; JSON summary")
    p.add_argument("--count", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-size", type=int, default=6)
    p.add_argument("--density", type=float, default=0.4)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fig1", help="CSV of the bounds along d = -k log(1-q)")
    p.add_argument("--k", type=float, choices=(2.0, 3.0, 4.0), required=True)
    p.add_argument("--qmin", type=float, default=1e-4)
    p.add_argument("--qmax", type=float, default=0.5)
    p.add_argument("--steps", type=_positive_int, default=50)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("ratio", help="CSV of eq7/cor1 near d = 0")
    p.add_argument("--q", type=_float_list, required=True, help="comma- or space-separated q values")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("remark1", help="subgaussian bound vs the others at d = -log(q)/2")
    p.add_argument("--q", type=float, required=True)
    p.set_defaults(func=cmd_remark1)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except json.JSONDecodeError as exc:
        print(f"error: cannot parse instance: {exc}", file=sys.stderr)
    except (InfoBoundsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
