"""Command line interface.

Exit codes: 0 ok, 2 invalid trace or configuration, 3 exact-search capacity
exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .adversaries import TreeAdversaryConfig, random_trace, tree_adversary
from .bench import run_paper_suite
from .errors import (
    CapacityError,
    ConfigError,
    MinlaError,
    TraceFormatError,
    TraceValidationError,
)
from .harness import (
    ExperimentConfig,
    duel,
    experiment_to_json,
    records_to_csv,
    run_experiment,
    verify_lemma,
)
from .oracle import dp_opt, exhaustive_opt
from .trace import Model, emit_trace, parse_trace

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minla",
        description="Online minimum linear arrangement: simulate, verify, bound.",
    )
    parser.add_argument("--version", action="version", version=f"minla {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a trace")
    gen.add_argument("--kind", choices=("random", "tree"), required=True)
    gen.add_argument("--model", choices=("lines", "cliques"), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", type=Path)

    sim = sub.add_parser("simulate", help="run an algorithm over a trace")
    sim.add_argument("--algo", choices=("det", "rand"), required=True)
    sim.add_argument("--trace", type=Path, required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--trials", type=int, required=True)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--out", type=Path)

    opt = sub.add_parser("opt", help="exact offline optimum of a trace")
    opt.add_argument("--trace", type=Path, required=True)
    opt.add_argument("--exhaustive", action="store_true")

    ver = sub.add_parser("verify", help="check a closed-form guarantee")
    ver.add_argument(
        "--lemma",
        choices=("left-right", "orientation", "harmonic", "identities"),
        required=True,
    )
    ver.add_argument("--trials", type=int, required=True)
    ver.add_argument("--seed", type=int, required=True)
    ver.add_argument("--trace", type=Path)

    du = sub.add_parser("duel", help="adaptive adversary against det")
    du.add_argument("--algo", choices=("det",), default="det")
    du.add_argument("--adversary", choices=("middle-line",), default="middle-line")
    du.add_argument("--n", type=int, required=True)
    du.add_argument("--dump-trace", type=Path)

    be = sub.add_parser("bench", help="run the acceptance experiment suite")
    be.add_argument("--suite", choices=("paper",), required=True)
    be.add_argument("--out", type=Path, required=True)

    return parser


def _write_or_print(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_gen(args) -> int:
    model = Model(args.model)
    if args.kind == "random":
        trace = random_trace(model, args.n, seed=args.seed)
    else:
        if model is not Model.LINES:
            raise ConfigError("tree traces are line traces; use --model lines")
        q = args.n.bit_length() - 1
        if args.n < 2 or 1 << q != args.n:
            raise ConfigError(f"tree traces need n to be a power of two, got {args.n}")
        trace = tree_adversary(TreeAdversaryConfig(q=q, seed=args.seed))
    _write_or_print(emit_trace(trace), args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    trace = parse_trace(args.trace.read_text())
    cfg = ExperimentConfig(
        trace=trace,
        trace_id=args.trace.stem,
        algo=args.algo,
        trials=args.trials,
        master_seed=args.seed,
    )
    opt = dp_opt(trace)
    stats, records = run_experiment(cfg, opt=opt)
    if args.format == "csv":
        _write_or_print(records_to_csv(records), args.out)
    else:
        _write_or_print(experiment_to_json(cfg, stats, records, opt=opt), args.out)
    return EXIT_OK


def _cmd_opt(args) -> int:
    trace = parse_trace(args.trace.read_text())
    result = exhaustive_opt(trace) if args.exhaustive else dp_opt(trace)
    kind = "exhaustive" if args.exhaustive else "dp"
    sys.stdout.write(f"method: {kind}\ncost: {result.cost}\n")
    sys.stdout.write(f"witness: {result.witness.to_text()}\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    trace = None
    if args.trace is not None:
        trace = parse_trace(args.trace.read_text())
    elif args.lemma == "left-right":
        trace = random_trace(Model.CLIQUES, 8, seed=11, events=4)
    elif args.lemma == "orientation":
        trace = random_trace(Model.LINES, 8, seed=12, events=4)
    report = verify_lemma(args.lemma, trials=args.trials, seed=args.seed, trace=trace)
    sys.stdout.write(report.to_text())
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_duel(args) -> int:
    report = duel(args.n, algo=args.algo, adversary=args.adversary)
    sys.stdout.write(report.to_text())
    if args.dump_trace is not None:
        args.dump_trace.write_text(emit_trace(report.induced_trace))
    return EXIT_OK


def _cmd_bench(args) -> int:
    results = run_paper_suite(str(args.out))
    for res in results:
        sys.stdout.write(res.line() + "\n")
    return EXIT_OK if all(res.passed for res in results) else EXIT_VERIFY


_COMMANDS = {
    "gen": _cmd_gen,
    "simulate": _cmd_simulate,
    "opt": _cmd_opt,
    "verify": _cmd_verify,
    "duel": _cmd_duel,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (TraceFormatError, TraceValidationError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MinlaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
