"""
Command-line interface for the minorforge experiment harness.
"""

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from .errors import InvalidParameterError, MinorForgeError
from .factory import create_manager
from .manager import ExperimentManager
from .models import Defaults, GraphModel, Mode
from .runner import TrialSummary
from .utils import format_seconds, parse_number_list, resolve_seed

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"Master seed (overridden by {Defaults.SEED_ENV})",
    )
    common.add_argument(
        "--verbose", action="store_true", help="Log pipeline milestones"
    )
    common.add_argument("--debug", action="store_true", help="Log everything")
    return common


def _sweep_options() -> argparse.ArgumentParser:
    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--trials", type=int, default=1, help="Trials per point")
    sweep.add_argument(
        "--parallel", type=int, default=1, help="Worker processes"
    )
    sweep.add_argument("--out", help="CSV output file (default: stdout)")
    sweep.add_argument(
        "--dump-certs", metavar="DIR", help="Write certificates as JSON"
    )
    sweep.add_argument(
        "--no-progress", action="store_true", help="Disable progress bars"
    )
    return sweep


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the sample, minor, phase and oracle commands."""
    parser = argparse.ArgumentParser(
        prog="minorforge",
        description="Complete minors in random cubic graphs",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common, sweep = _common_options(), _sweep_options()

    sample = commands.add_parser(
        "sample", parents=[common], help="Draw one random graph"
    )
    sample.add_argument(
        "model", choices=[model.value for model in GraphModel]
    )
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--r", type=int, default=3)
    sample.add_argument("--m", type=int)
    sample.add_argument("--p", type=float)
    sample.add_argument("--out", help="Graph file (default: stdout)")

    minor = commands.add_parser(
        "minor", parents=[common, sweep], help="Build minors on H(n)+G(n,1)"
    )
    minor.add_argument("--n", type=int, required=True)
    minor.add_argument("--epsilon", type=float, default=Defaults.EPSILON)
    minor.add_argument(
        "--mode",
        choices=[mode.value for mode in Mode],
        default=Mode.PRACTICAL.value,
    )

    phase = commands.add_parser(
        "phase", parents=[common, sweep], help="Critical-window sweep"
    )
    phase.add_argument("--n", type=int, required=True)
    phase.add_argument(
        "--lambda",
        dest="lambdas",
        help="Comma-separated lambda values for G(n,p)",
    )
    phase.add_argument(
        "--lambda-bar",
        dest="lambda_bars",
        help="Comma-separated lambda values for G(n,m)",
    )
    phase.add_argument(
        "--exact-cap", type=int, default=Defaults.EXACT_CAP
    )
    phase.add_argument(
        "--restarts", type=int, default=Defaults.GREEDY_RESTARTS
    )
    phase.add_argument(
        "--reject-multigraph-kernels",
        action="store_true",
        help="Resample when the kernel has loops or parallel edges",
    )

    oracle = commands.add_parser(
        "oracle", parents=[common], help="Regression run of the oracles"
    )
    oracle.add_argument("--max-n", type=int, default=7)
    oracle.add_argument(
        "--oracle-samples", type=int, default=Defaults.ORACLE_SAMPLES
    )
    oracle.add_argument(
        "--restarts", type=int, default=Defaults.GREEDY_RESTARTS
    )
    oracle.add_argument(
        "--no-sampler-checks",
        action="store_true",
        help="Skip the chi-square checks of the samplers",
    )
    return parser


def configure_logging(verbose: bool, debug: bool) -> None:
    """Log to stderr; flags win over MINORFORGE_LOG_LEVEL."""
    level_name = os.getenv(Defaults.LOG_LEVEL_ENV, "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    if verbose:
        level = logging.INFO
    if debug:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _emit_records(
    manager: ExperimentManager, summary: TrialSummary, out: Optional[str]
) -> None:
    if out:
        if not manager.repository.save_records(out, summary.records):
            raise OSError(f"could not write {out}")
        trial_seconds = sum(r.elapsed_ms for r in summary.records) / 1000
        print(
            f"Wrote {len(summary.records)} row(s) to {out} "
            f"({format_seconds(trial_seconds)} of trial time)"
        )
    else:
        sys.stdout.write(manager.repository.render_csv(summary.records))


def _report_failures(summary: TrialSummary) -> int:
    for result in summary.results:
        if not result.success:
            record = result.record
            print(
                f"trial {record.trial} ({record.param}): "
                f"{record.status.value} {record.message}".rstrip(),
                file=sys.stderr,
            )
    return EXIT_OK if summary.failed == 0 else EXIT_FAILURE


def cmd_sample(args: argparse.Namespace, seed: int) -> int:
    """Draw a graph, write it, print diagnostics."""
    manager = create_manager(progress=False)
    outcome = manager.sample(
        GraphModel(args.model),
        n=args.n,
        seed=seed,
        r=args.r,
        m=args.m,
        p=args.p,
        out=args.out,
    )
    diagnostics = " ".join(
        f"{key}={value}" for key, value in outcome.diagnostics.items()
    )
    if args.out:
        print(diagnostics)
    else:
        sys.stdout.write(manager.repository.parser.format(outcome.graph))
        print(diagnostics, file=sys.stderr)
    return EXIT_OK


def cmd_minor(args: argparse.Namespace, seed: int) -> int:
    """Builder sweep; one CSV row per trial."""
    manager = create_manager(
        parallel=args.parallel, progress=not args.no_progress
    )
    summary = manager.run_minor_sweep(
        n=args.n,
        trials=args.trials,
        seed=seed,
        epsilon=args.epsilon,
        mode=Mode(args.mode),
        dump_dir=args.dump_certs,
    )
    _emit_records(manager, summary, args.out)
    return _report_failures(summary)


def cmd_phase(args: argparse.Namespace, seed: int) -> int:
    """Critical-window sweep with a per-value median summary."""
    lambdas = parse_number_list(args.lambdas) if args.lambdas else []
    lambda_bars = (
        parse_number_list(args.lambda_bars) if args.lambda_bars else []
    )
    manager = create_manager(
        parallel=args.parallel, progress=not args.no_progress
    )
    summary = manager.run_phase_sweep(
        n=args.n,
        trials=args.trials,
        seed=seed,
        lambdas=lambdas,
        lambda_bars=lambda_bars,
        exact_cap=args.exact_cap,
        restarts=args.restarts,
        reject_multigraph_kernels=args.reject_multigraph_kernels,
        dump_dir=args.dump_certs,
    )
    _emit_records(manager, summary, args.out)
    stream = sys.stdout if args.out else sys.stderr
    print("\nSummary (medians over ok trials):", file=stream)
    violated = 0
    for row in manager.phase_summary(summary.records):
        window = "" if row["in_window"] else " [outside window, unchecked]"
        print(
            f"  {row['param']}: trials={row['trials']} "
            f"l1_excess={row['l1_excess']:g} "
            f"kernel_order={row['kernel_order']:g} "
            f"ccl_lower={row['ccl_lower']:g} "
            f"ccl_upper={row['ccl_upper']:g} "
            f"(4*lambda^1.5 + 3 = {row['slack_bound']:.2f} "
            f"at lambda={row['binomial_lambda']:g}){window}",
            file=stream,
        )
        if row["violations"]:
            violated += len(row["violations"])
            print(
                f"    upper bound above the slack rule in trial(s) "
                f"{', '.join(str(t) for t in row['violations'])}",
                file=stream,
            )
    print(
        "  the +3 slack covers the K3 floor of components with a cycle",
        file=stream,
    )
    code = _report_failures(summary)
    return EXIT_FAILURE if violated else code


def cmd_oracle(args: argparse.Namespace, seed: int) -> int:
    """Regression run of exact search, heuristic, verifier and bounds."""
    manager = create_manager(progress=False)
    report = manager.run_oracle(
        max_n=args.max_n,
        seed=seed,
        samples=args.oracle_samples,
        restarts=args.restarts,
        sampler_checks=not args.no_sampler_checks,
    )
    print(f"Graphs checked: {report.graphs_checked}")
    print(f"Violations: {len(report.violations)}")
    for problem in report.violations:
        print(f"  {problem}")
    for name, result in report.sampler_checks:
        verdict = "ok" if result.passes(report.significance) else "FAIL"
        print(
            f"  {name}: chi2={result.statistic:.2f} "
            f"p={result.p_value:.4f} {verdict}"
        )
    return EXIT_OK if report.ok else EXIT_FAILURE


COMMANDS = {
    "sample": cmd_sample,
    "minor": cmd_minor,
    "phase": cmd_phase,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> None:
    """CLI entry point for minorforge."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.debug)

    try:
        seed = resolve_seed(args.seed)
        code = COMMANDS[args.command](args, seed)
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(EXIT_INTERRUPTED)
    except InvalidParameterError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    except (MinorForgeError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)
    except Exception as e:  # pylint: disable=broad-except
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(EXIT_FAILURE)
    sys.exit(code)


if __name__ == "__main__":
    main()
