"""Command-line entry point.

    actrsim run --model rps.model --player 1 --strategy reinforcement

Reports go to standard output as CSV (or JSON with --format json); traces go
to standard error or --trace-file. Exit codes: 0 on success, 1 on parse or
validation errors, 2 on runtime errors such as an exhausted move provider.
"""

import argparse
import sys
from fractions import Fraction

from . import experiment
from .engine import format_trace_entry
from .errors import EngineError, ModelSyntaxError
from .model import parse_model, validate_model
from .strategies import TIEBREAK_POLICIES


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actrsim",
        description="Production-rule cognitive engine and its game harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a model against opponent samples")
    run.add_argument("--model", help="model file (default: the builtin game model)")
    source = run.add_mutually_exclusive_group()
    source.add_argument("--player", type=int, choices=(1, 2, 3),
                        help="builtin opponent sample set")
    source.add_argument("--samples", help="sample file, one 20-move line per sample")
    run.add_argument("--sample", type=int,
                     help="use only the Nth sample (1-based) of the loaded set")
    run.add_argument("--strategy", default="reinforcement",
                     choices=("reinforcement", "success-cost", "random-cost"))
    run.add_argument("--refraction", action="store_true",
                     help="never fire the same rule instantiation twice")
    run.add_argument("--alpha", type=Fraction, default=Fraction(1, 5),
                     help="learning rate for the reinforcement strategy")
    run.add_argument("--goal-value", type=Fraction, default=Fraction(20),
                     help="goal value G for the cost-based strategies")
    run.add_argument("--tiebreak", choices=TIEBREAK_POLICIES,
                     help="override the strategy's declaration-order tie-break")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--runs", type=int, default=1,
                     help="repeated runs per sample (distinct derived seeds)")
    run.add_argument("--t-limit", type=Fraction, default=Fraction(2),
                     help="simulated seconds per run")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--trace", action="store_true",
                     help="write one line per rule firing to stderr")
    run.add_argument("--trace-file", help="write the firing trace to a file")
    return parser


def _load_model(args):
    if args.model:
        with open(args.model, encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = experiment.builtin_model_text()
    ast = parse_model(text)
    diagnostics = validate_model(ast)
    if diagnostics:
        raise ModelSyntaxError("; ".join(diagnostics))
    return ast


def _load_samples(args):
    if args.samples:
        samples = experiment.load_samples(args.samples)
    else:
        samples = experiment.builtin_samples(args.player if args.player else 1)
    if args.sample is not None:
        if not 1 <= args.sample <= len(samples):
            raise ValueError(
                f"--sample {args.sample} out of range (1..{len(samples)})"
            )
        samples = [samples[args.sample - 1]]
    return samples


def _check_config(args):
    if not 0 < args.alpha <= 1:
        raise ValueError("--alpha must be in (0, 1]")
    if args.t_limit <= 0:
        raise ValueError("--t-limit must be positive")
    if args.runs < 1:
        raise ValueError("--runs must be at least 1")


def run_command(args, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        _check_config(args)
        model = _load_model(args)
        samples = _load_samples(args)
    except (EngineError, OSError, ValueError, ZeroDivisionError) as exc:
        print(f"actrsim: {exc}", file=err)
        return 1
    config = experiment.HarnessConfig(
        strategy=args.strategy,
        alpha=args.alpha,
        goal_value=args.goal_value,
        tiebreak=args.tiebreak,
        refraction=args.refraction,
        seed=args.seed,
        runs=args.runs,
        t_limit=args.t_limit,
    )
    trace_sink = [] if (args.trace or args.trace_file) else None
    try:
        report = experiment.run_experiment(model, config, samples, trace_sink)
    except EngineError as exc:
        print(f"actrsim: runtime error: {exc}", file=err)
        return 2
    if trace_sink is not None:
        lines = [f"{run}\t" + format_trace_entry(entry) for run, entry in trace_sink]
        if args.trace_file:
            with open(args.trace_file, "w", encoding="utf-8") as handle:
                handle.write("\n".join(lines) + "\n")
        else:
            for line in lines:
                print(line, file=err)
    if args.format == "json":
        out.write(experiment.report_to_json(report))
    else:
        out.write(experiment.report_to_csv(report))
    return 0


def main(argv=None) -> int:
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return run_command(args)
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
