"""Command-line front end.

Every subcommand maps 1:1 onto a library operation and adds no
computation of its own; outputs are deterministic byte-for-byte given
identical arguments. Exit codes: 0 success, 1 domain/infeasible errors,
2 usage errors. Errors are one-line and machine-parsable with the
prefixes ``error: usage:``, ``error: domain:``, ``error: infeasible:``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .construct import (
    beatty_construct,
    blockspec_to_csv,
    build_oscillating_schedule,
    construct_mean_without_frequency,
    floor_weighted_average,
    no_mean_example,
    quota_construct,
)
from .core import DigitStream, expand_rational, format_expansion
from .errors import DomainError, Infeasible
from .rationals import decimal_str, parse_rational, ratio_str
from .simulate import ExperimentConfig, normality_experiment, summary_to_json
from .stats import (
    FrequencyProfile,
    PartialStats,
    geometric_checkpoints,
    running_stats,
    stats_to_csv,
    stats_to_json,
)

__all__ = ["main", "run_cli"]


class _UsageError(Exception):
    """Bad flag combination detected after argparse."""


class _Parser(argparse.ArgumentParser):
    # one-line machine-parsable usage errors, exit code 2
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(2, f"error: usage: {message}\n")


def _rational(text: str) -> Fraction:
    return parse_rational(text)


def _rational_list(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",") if p.strip() != ""]
    if not parts:
        raise argparse.ArgumentTypeError("expected comma-separated rationals")
    return tuple(parse_rational(p) for p in parts)


def _checkpoint_spec(text: str):
    kind, _, rest = text.partition(":")
    if kind == "geometric":
        parts = rest.split(",")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("expected geometric:start,factor,max")
        return ("geometric", int(parts[0]), parse_rational(parts[1]), int(parts[2]))
    if kind == "list":
        try:
            depths = sorted({int(p) for p in rest.split(",") if p.strip() != ""})
        except ValueError:
            raise argparse.ArgumentTypeError("expected list:n1,n2,...") from None
        if not depths:
            raise argparse.ArgumentTypeError("expected at least one depth")
        return ("list", depths)
    raise argparse.ArgumentTypeError("expected geometric:start,factor,max or list:n1,n2,...")


def _resolve_checkpoints(spec) -> list[int]:
    if spec[0] == "geometric":
        _, start, factor, max_depth = spec
        return geometric_checkpoints(start, factor, max_depth)
    return spec[1]


def _digits_text(digits: Sequence[int], base: int) -> str:
    if base <= 10:
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def _parse_digit_text(text: str, base: int) -> list[int]:
    if base <= 10:
        digits = []
        for ch in text:
            if ch.isspace():
                continue
            if not ch.isdigit():
                raise DomainError(f"invalid digit character {ch!r}")
            digits.append(int(ch))
    else:
        tokens = text.replace(",", " ").split()
        try:
            digits = [int(tok) for tok in tokens]
        except ValueError:
            raise DomainError(f"invalid digit token in input") from None
    for d in digits:
        if not 0 <= d < base:
            raise DomainError(f"digit {d} out of range for base {base}")
    return digits


def _format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _kv_csv(pairs: Sequence[tuple[str, str]]) -> str:
    lines = ["field,value"]
    for key, value in pairs:
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def _json_dumps(payload) -> str:
    import json

    return json.dumps(payload, indent=2) + "\n"


def _emit_digit_list(digits: list[int], base: int, fmt: str) -> str:
    if fmt == "table":
        return _digits_text(digits, base) + "\n"
    if fmt == "json":
        return _json_dumps({"base": base, "count": len(digits), "digits": _digits_text(digits, base)})
    raise _UsageError("digit output supports --format table or json")


def _stats_table(rows: Sequence[PartialStats]) -> str:
    base = rows[0].base
    header = (
        ["n"]
        + [f"N{i}" for i in range(base)]
        + [f"v{i}" for i in range(base)]
        + ["r", "r_dec", "truncated"]
    )
    body = []
    for row in rows:
        body.append(
            [str(row.n)]
            + [str(c) for c in row.counts]
            + [ratio_str(v) for v in row.freqs]
            + [ratio_str(row.mean), decimal_str(row.mean), str(row.truncated).lower()]
        )
    return _format_table(header, body)


# ---------------------------------------------------------------- handlers


def _cmd_digits(args) -> str:
    value = args.rational
    expansion = expand_rational(value.numerator, value.denominator, args.base)
    digits = None
    if args.count is not None:
        digits = DigitStream.from_expansion(expansion).take(args.count)
    if args.format == "table":
        lines = [
            f"expansion: {format_expansion(expansion)}",
            f"value: {ratio_str(value)}",
        ]
        if digits is not None:
            lines.append(f"digits: {_digits_text(digits, expansion.base)}")
        return "\n".join(lines) + "\n"
    if args.format == "json":
        return _json_dumps(
            {
                "base": expansion.base,
                "value": ratio_str(value),
                "expansion": format_expansion(expansion),
                "preperiod": list(expansion.preperiod),
                "period": list(expansion.period),
                "digits": None if digits is None else _digits_text(digits, expansion.base),
            }
        )
    pairs = [
        ("base", str(expansion.base)),
        ("value", ratio_str(value)),
        ("expansion", format_expansion(expansion)),
    ]
    if digits is not None:
        pairs.append(("digits", _digits_text(digits, expansion.base)))
    return _kv_csv(pairs)


def _cmd_stats(args) -> str:
    if args.digits_file is None or args.digits_file == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.digits_file).read_text()
    digits = _parse_digit_text(text, args.base)
    stream = DigitStream.from_digits(digits, args.base)
    if args.checkpoints is None:
        if not digits:
            raise DomainError("no digits in input")
        marks = [len(digits)]
    else:
        marks = _resolve_checkpoints(args.checkpoints)
    rows = running_stats(stream, marks)
    if args.format == "csv":
        return stats_to_csv(rows)
    if args.format == "json":
        return stats_to_json(rows)
    return _stats_table(rows)


def _cmd_construct_freq(args) -> str:
    if args.rule == "quota":
        if args.tau is None:
            raise _UsageError("--rule quota requires --tau")
        profile = FrequencyProfile(len(args.tau), args.tau)
        digits = quota_construct(profile, args.count)
        return _emit_digit_list(digits, profile.base, args.format)
    if args.a is None or args.b is None:
        raise _UsageError("--rule beatty requires --a and --b")
    digits = beatty_construct(args.a, args.b, args.count)
    return _emit_digit_list(digits, 3, args.format)


def _cmd_construct_mean_nofreq(args) -> str:
    spec, stream = construct_mean_without_frequency(
        args.theta, args.x1, args.x2, args.eps, args.blocks
    )
    if args.emit == "digits":
        return _emit_digit_list(stream.take(stream.length), 3, args.format)
    if args.format == "csv":
        return blockspec_to_csv(spec)
    if args.format == "json":
        return _json_dumps(
            {
                "theta": ratio_str(spec.theta),
                "blocks": spec.blocks,
                "rows": [
                    {"k": k, "a_k1": row[0], "a_k2": row[1], "a_k3": row[2], "alpha_k": ratio_str(alpha)}
                    for k, (alpha, row) in enumerate(zip(spec.alphas, spec.rows), start=1)
                ],
            }
        )
    header = ["k", "a_k1", "a_k2", "a_k3", "alpha_k"]
    body = [
        [str(k), str(row[0]), str(row[1]), str(row[2]), ratio_str(alpha)]
        for k, (alpha, row) in enumerate(zip(spec.alphas, spec.rows), start=1)
    ]
    return _format_table(header, body)


def _cmd_no_mean_example(args) -> str:
    return _emit_digit_list(no_mean_example(args.count), 2, args.format)


def _cmd_floor_average(args) -> str:
    w = floor_weighted_average(args.x, args.k, args.n)
    if args.format == "json":
        return _json_dumps(
            {
                "x": ratio_str(args.x),
                "k": args.k,
                "n": args.n,
                "w": ratio_str(w),
                "w_decimal": decimal_str(w),
            }
        )
    if args.format == "csv":
        return _kv_csv(
            [("x", ratio_str(args.x)), ("k", str(args.k)), ("n", str(args.n)), ("w", ratio_str(w)), ("w_decimal", decimal_str(w))]
        )
    return f"w: {ratio_str(w)} = {decimal_str(w)}\n"


def _cmd_schedule(args) -> str:
    schedule = build_oscillating_schedule(args.x1, args.x2, args.eps, args.n)
    rows = list(zip(schedule.breakpoints, schedule.w_at_breakpoints))
    if args.format == "json":
        return _json_dumps(
            {
                "x1": ratio_str(schedule.x1),
                "x2": ratio_str(schedule.x2),
                "epsilon": ratio_str(schedule.epsilon),
                "horizon": schedule.horizon,
                "breakpoints": [
                    {"k": k, "n": n, "w": ratio_str(w), "w_decimal": decimal_str(w)}
                    for k, (n, w) in enumerate(rows, start=1)
                ],
            }
        )
    header = ["k", "n_k", "w", "w_dec"]
    body = [
        [str(k), str(n), ratio_str(w), decimal_str(w)] for k, (n, w) in enumerate(rows, start=1)
    ]
    if args.format == "csv":
        lines = [",".join(header)] + [",".join(row) for row in body]
        return "\n".join(lines) + "\n"
    return _format_table(header, body)


def _cmd_simulate(args) -> str:
    cfg = ExperimentConfig(base=args.base, depth=args.n, trials=args.trials, master_seed=args.seed)
    summary = normality_experiment(cfg, args.band, workers=args.workers)
    if args.format == "json":
        return summary_to_json(summary)
    if args.format == "csv":
        lines = ["trial,r,r_dec"]
        for i, r in enumerate(summary.r_values):
            lines.append(f"{i},{ratio_str(r)},{decimal_str(r)}")
        return "\n".join(lines) + "\n"
    center = Fraction(cfg.base - 1, 2)
    return (
        f"trials: {cfg.trials}\n"
        f"depth: {cfg.depth}\n"
        f"center: {ratio_str(center)}\n"
        f"band: {ratio_str(summary.band)}\n"
        f"mean: {decimal_str(summary.mean)}\n"
        f"stddev: {summary.stddev_decimal()}\n"
        f"fraction_in_band: {decimal_str(summary.fraction_in_band)}\n"
    )


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="digitstats", description="Exact digit statistics and constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument(
            "--format",
            choices=["table", "csv", "json"],
            default="table",
            help="output format (default table)",
        )
        return p

    p = add("digits", _cmd_digits, "expand a rational into its digit string")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--rational", type=_rational, required=True, help="value in [0,1), e.g. 1/4 or 0.25")
    p.add_argument("--count", type=int, help="also print this many leading digits")

    p = add("stats", _cmd_stats, "running digit statistics of a digit file or stdin")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--digits-file", help="digit text file ('-' or omitted: stdin)")
    p.add_argument(
        "--checkpoints",
        type=_checkpoint_spec,
        help="geometric:start,factor,max or list:n1,n2,... (default: full length)",
    )

    p = add("construct-freq", _cmd_construct_freq, "digits with prescribed digit frequencies")
    p.add_argument("--rule", choices=["quota", "beatty"], default="quota")
    p.add_argument("--tau", type=_rational_list, help="target frequencies t0,t1,... (quota rule)")
    p.add_argument("--a", type=_rational, help="digit-0 density (beatty rule, ternary)")
    p.add_argument("--b", type=_rational, help="digit-1 target density (beatty rule, ternary)")
    p.add_argument("--count", type=int, required=True)

    p = add(
        "construct-mean-nofreq",
        _cmd_construct_mean_nofreq,
        "ternary stream with digit mean theta but no digit-0 frequency",
    )
    p.add_argument("--theta", type=_rational, required=True)
    p.add_argument("--x1", type=_rational, required=True)
    p.add_argument("--x2", type=_rational, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--emit", choices=["spec", "digits"], default="spec")

    p = add("no-mean-example", _cmd_no_mean_example, "digits whose running mean has no limit")
    p.add_argument("--count", type=int, required=True)

    p = add("floor-average", _cmd_floor_average, "floor-weighted average ([kx]+...+[nx])/(n(n+1)/2)")
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, required=True)

    p = add("schedule", _cmd_schedule, "oscillating value schedule and its breakpoints")
    p.add_argument("--x1", type=_rational, required=True)
    p.add_argument("--x2", type=_rational, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True, help="schedule horizon (positions 1..n)")

    p = add("simulate", _cmd_simulate, "seeded uniform-digit Monte Carlo experiment")
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="digits per trial")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--band", type=_rational, default=Fraction(33, 1000))
    p.add_argument("--workers", type=int, default=1)

    return parser


def run_cli(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run the subcommand, write its output; return exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except Infeasible as exc:
        print(f"error: infeasible: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: domain: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
