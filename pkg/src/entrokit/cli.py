"""Command-line interface: estimate | gen | bench.

estimate  read a sample (counts file or token stream) and print estimates,
          one `name value` pair per line, in nats by default
gen       draw a sample from a synthetic source and write it in counts format
bench     run a Monte-Carlo benchmark grid and write CSV (plus optional
          gnuplot tables and figures)

Exit codes: 0 success, 1 usage/config errors, 2 malformed input data,
3 I/O failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import (
    ConfigError,
    ExperimentGrid,
    format_summary,
    parse_config,
    run_grid,
    write_gnuplot,
    write_results,
)
from .core import CountTable, nats_to_bits
from .datagen import SOURCE_KINDS, SourceSpec, draw_sample, make_source, true_entropy
from .estimators import ESTIMATOR_NAMES, EstimatorConfig, estimate_by_name

__all__ = ["main"]


class UsageError(Exception):
    """Bad flags or option combinations: exit code 1."""


class DataError(Exception):
    """Malformed input data: exit code 2."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this CLI reserves 2 for
    # data errors, so route usage problems through UsageError instead
    def error(self, message: str):
        raise UsageError(message)


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _parse_counts(text: str) -> CountTable:
    """Counts format: one nonnegative integer per line, line index = symbol id."""
    counts: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            value = int(stripped)
        except ValueError:
            raise DataError(f"line {lineno}: not an integer count: {stripped!r}") from None
        if value < 0:
            raise DataError(f"line {lineno}: negative count: {value}")
        if value > 0:
            counts[lineno - 1] = value
    if not counts:
        raise DataError("empty sample: no positive counts in input")
    return CountTable(counts)


def _parse_tokens(text: str) -> CountTable:
    tokens = text.split()
    if not tokens:
        raise DataError("empty sample: no tokens in input")
    return CountTable.from_tokens(tokens)


def _add_estimate_parser(subparsers) -> None:
    p = subparsers.add_parser(
        "estimate",
        help="estimate entropy from a counts file or token stream",
        description="Read a sample and print `name value` lines (nats unless --bits). "
        "Default input is the counts format: one nonnegative integer per line, "
        "the line index being the symbol id (zeros allowed and ignored).",
    )
    p.add_argument("input", help="input file, or - for stdin")
    p.add_argument(
        "--tokens",
        action="store_true",
        help="treat input as whitespace-separated tokens and count them",
    )
    p.add_argument(
        "-e",
        "--estimator",
        action="append",
        choices=ESTIMATOR_NAMES,
        help="estimator to run (repeatable); default: proposed",
    )
    p.add_argument("--all", action="store_true", help="run every estimator")
    p.add_argument(
        "--support",
        type=_positive_int,
        help="true support size (required by shrinkage)",
    )
    p.add_argument(
        "--lam",
        type=_positive_int,
        default=3,
        help="largest count still treated as rare (default 3)",
    )
    p.add_argument("--bits", action="store_true", help="print bits instead of nats")
    p.add_argument(
        "--breakdown",
        action="store_true",
        help="also print the partition estimator's terms and diagnostics",
    )


def _add_gen_parser(subparsers) -> None:
    p = subparsers.add_parser(
        "gen",
        help="draw a sample from a synthetic source",
        description="Draw one multinomial sample and write it in counts format "
        "(one line per symbol, including zeros), ready for `estimate`.",
    )
    p.add_argument("--dist", required=True, choices=SOURCE_KINDS, help="source family")
    p.add_argument("--support", required=True, type=_positive_int, help="support size S")
    p.add_argument("--n", required=True, type=_positive_int, help="sample size")
    p.add_argument("--alpha", type=float, help="Dirichlet concentration (dirichlet only)")
    p.add_argument("--exponent", type=float, help="Zipf exponent (zipf only, default 1.0)")
    p.add_argument("--seed", type=int, default=0, help="seed for the pmf draw and sample")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument(
        "--emit-pmf",
        action="store_true",
        help="also write the drawn pmf and its true entropy to <out>.pmf",
    )


def _add_bench_parser(subparsers) -> None:
    p = subparsers.add_parser(
        "bench",
        help="run a Monte-Carlo benchmark grid",
        description="Run (sources x sample sizes x estimators) over many seeded "
        "trials and write aggregate CSV. The grid comes from --config, or from "
        "the inline single-source flags.",
    )
    p.add_argument("--config", help="benchmark config file (see README for the grammar)")
    p.add_argument("--dist", choices=SOURCE_KINDS, help="inline source family")
    p.add_argument("--support", type=_positive_int, help="inline source support size")
    p.add_argument("--alpha", type=float, help="inline Dirichlet concentration")
    p.add_argument("--exponent", type=float, help="inline Zipf exponent")
    p.add_argument("--source-seed", type=int, default=0, help="inline source pmf seed")
    p.add_argument("--sizes", help="inline sample sizes, e.g. 100,200,500")
    p.add_argument(
        "--estimators",
        help="comma-separated estimator names (default: all five)",
    )
    p.add_argument("--trials", type=_positive_int, help="trials per cell (overrides config)")
    p.add_argument("--seed", type=int, help="base seed (overrides config)")
    p.add_argument("--lam", type=_positive_int, help="rarity threshold (overrides config)")
    p.add_argument("--out", default="results.csv", help="output CSV path (default results.csv)")
    p.add_argument(
        "--gnuplot",
        action="store_true",
        help="also write per-(source, metric) whitespace tables next to the CSV",
    )
    p.add_argument(
        "--plot",
        action="store_true",
        help="also render per-(source, metric) PNG figures next to the CSV",
    )
    p.add_argument(
        "--workers",
        type=_positive_int,
        default=1,
        help="worker processes (results are identical at any worker count)",
    )


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="entrokit",
        description="Discrete Shannon entropy estimation and benchmarking.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    _add_estimate_parser(subparsers)
    _add_gen_parser(subparsers)
    _add_bench_parser(subparsers)
    return parser


def _convert(value: float, bits: bool) -> float:
    return nats_to_bits(value) if bits else value


def _cmd_estimate(args) -> int:
    table = _parse_tokens(_read_text(args.input)) if args.tokens else _parse_counts(
        _read_text(args.input)
    )
    if args.all:
        names = list(ESTIMATOR_NAMES)
    elif args.estimator:
        names = list(dict.fromkeys(args.estimator))
    else:
        names = ["proposed"]
    config = EstimatorConfig(lam=args.lam)
    for name in names:
        if name == "shrinkage" and args.support is None:
            print("warning: shrinkage skipped (needs --support)", file=sys.stderr)
            continue
        try:
            est = estimate_by_name(name, table, config=config, support_size=args.support)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        print(f"{name} {_convert(est.value, args.bits):.6f}")
        if args.breakdown and name == "proposed" and est.terms is not None:
            t, d = est.terms, est.diagnostics
            for key, value in (
                ("subset_split", t.subset_split),
                ("unseen", t.unseen),
                ("rare", t.rare),
                ("frequent", t.frequent),
            ):
                print(f"proposed.term_{key} {_convert(value, args.bits):.6f}")
            print(f"proposed.p_unseen {d['p_unseen']:.6f}")
            print(f"proposed.p_rare {d['p_rare']:.6f}")
            print(f"proposed.p_frequent {d['p_frequent']:.6f}")
            for k, (raw, clamped) in enumerate(zip(d["mass_raw"], d["mass_clamped"])):
                print(f"proposed.mass{k}_raw {raw:.6f}")
                print(f"proposed.mass{k} {clamped:.6f}")
            print(f"proposed.amplification {d['amplification']:g}")
            print(f"proposed.smoothing_r {d['smoothing_r']:.6f}")
            print(f"proposed.unseen_count_raw {d['unseen_count_raw']:.6f}")
            print(f"proposed.unseen_count {d['unseen_count']:.6f}")
            print(f"proposed.rare_size {d['rare_size']}")
            print(f"proposed.frequent_size {d['frequent_size']}")
    return 0


def _cmd_gen(args) -> int:
    try:
        spec = SourceSpec(
            kind=args.dist,
            support_size=args.support,
            alpha=args.alpha,
            exponent=args.exponent,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.emit_pmf and not args.out:
        raise UsageError("--emit-pmf needs --out to name the sidecar file")
    pmf = make_source(spec)
    sample = draw_sample(pmf, args.n, (args.seed, 1))
    lines = [str(sample.counts.get(i, 0)) for i in range(spec.support_size)]
    body = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)
    if args.emit_pmf:
        sidecar = Path(args.out).with_name(Path(args.out).name + ".pmf")
        pmf_lines = [f"# true_entropy_nats {true_entropy(pmf):.6f}"]
        pmf_lines += [f"{p:.17g}" for p in pmf.probs]
        sidecar.write_text("\n".join(pmf_lines) + "\n", encoding="utf-8")
    return 0


def _inline_grid(args) -> ExperimentGrid:
    if args.dist is None or args.support is None:
        raise UsageError("bench needs either --config or an inline source (--dist --support)")
    try:
        source = SourceSpec(
            kind=args.dist,
            support_size=args.support,
            alpha=args.alpha,
            exponent=args.exponent,
            seed=args.source_seed,
        )
        kwargs: dict = {"sources": (source,)}
        if args.sizes:
            kwargs["sample_sizes"] = tuple(
                int(tok) for tok in args.sizes.replace(",", " ").split()
            )
        if args.estimators:
            kwargs["estimators"] = tuple(args.estimators.replace(",", " ").split())
        return ExperimentGrid(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_bench(args) -> int:
    inline_flags = args.dist or args.alpha or args.exponent or args.sizes
    if args.config and inline_flags:
        raise UsageError("--config and inline source flags are mutually exclusive")
    if args.config:
        grid = parse_config(args.config)
    else:
        grid = _inline_grid(args)
    overrides: dict = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.lam is not None:
        overrides["estimator_config"] = EstimatorConfig(lam=args.lam)
    if overrides:
        from dataclasses import replace

        grid = replace(grid, **overrides)
    result = run_grid(grid, workers=args.workers)
    csv_path = write_results(result, args.out)
    written = [csv_path]
    stem = csv_path.with_suffix("")
    if args.gnuplot:
        written += write_gnuplot(result, stem)
    if args.plot:
        from .figures import render_figures

        written += render_figures(result, stem)
    sys.stdout.write(format_summary(result))
    for path in written:
        print(f"wrote {path}")
    if result.failures:
        print(
            f"warning: {len(result.failures)} trial estimate(s) failed; "
            "see ExperimentResult.failures for details",
            file=sys.stderr,
        )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "gen":
            return _cmd_gen(args)
        return _cmd_bench(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
