from __future__ import annotations

"""Command line: sweep, verify, list and serve."""

import argparse
import sys
from pathlib import Path

from .activity import ActivityEvent, configure_logging, log_activity
from .config import BenchConfig, load_config, parse_steps, parse_sweep_file, split_list
from .errors import ConfigError, OscintError
from .methodRegistry import get_method, get_problem_entry, method_ids, problem_ids
from .schemas import METRICS, SweepConfig
from .services.bench import build_sweep_config, run_sweep, validate_sweep, write_csv
from .services.verify import verify_registered

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_CONFIG_ERROR = 2


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; route them through ConfigError instead."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="oscint", description="Symmetric eight-step methods and their benchmark.")
    parser.add_argument("--log-level", default=None, help="Override OSCINT_LOG_LEVEL.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    sweep = commands.add_parser("sweep", help="Run a method x step-count sweep and write CSV.")
    sweep.add_argument("--problem", help="Problem id (see `oscint list`).")
    sweep.add_argument("--methods", help="Comma-separated method ids.")
    sweep.add_argument("--steps", help="Comma-separated, strictly increasing step counts.")
    sweep.add_argument("--metric", choices=METRICS, help="Error metric (default: the problem's own).")
    sweep.add_argument("--out", help="Output CSV path.")
    sweep.add_argument("--workers", type=int, help="Worker processes (default from config.json / OSCINT_WORKERS).")
    sweep.add_argument("--config", type=Path, help="key=value file with any of the options above.")

    verify = commands.add_parser("verify", help="Check consistency, algebraic order and phase-lag order.")
    verify.add_argument("--methods", help="Comma-separated method ids (default: all).")

    commands.add_parser("list", help="List registered methods and problems.")

    serve = commands.add_parser("serve", help="Run the HTTP interface.")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def resolve_sweep(args: argparse.Namespace, bench: BenchConfig) -> SweepConfig:
    """Merge --config file values, flags and config.json defaults into a SweepConfig."""
    values = parse_sweep_file(args.config) if args.config else {}
    for key in ("problem", "methods", "steps", "metric", "out"):
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if args.workers is not None:
        values["workers"] = str(args.workers)

    problem_id = values.get("problem")
    if not problem_id:
        raise ConfigError("a problem id is required (--problem)")
    entry = get_problem_entry(problem_id)
    methods = split_list(values["methods"]) if values.get("methods") else list(bench.default_methods)
    steps = parse_steps(values["steps"]) if values.get("steps") else bench.steps_for(problem_id)
    out = values.get("out") or str(bench.output_dir / f"{problem_id}.csv")
    try:
        workers = int(values.get("workers", bench.workers))
    except ValueError as exc:
        raise ConfigError(f"workers must be an integer, got {values['workers']!r}") from exc
    config = build_sweep_config(
        problem=problem_id,
        methods=methods,
        steps=steps,
        metric=values.get("metric") or entry.default_metric,
        out=out,
        workers=workers,
    )
    validate_sweep(config)
    return config


def _command_sweep(args: argparse.Namespace) -> int:
    bench = load_config()
    config = resolve_sweep(args, bench)
    results = run_sweep(config, accuracy_cap=bench.accuracy_cap, sample_x=bench.phase_shift_sample_x)
    path = write_csv(results, config.out)
    failed = [row for row in results if row.failed]
    print(f"{len(results)} runs written to {path} ({len(failed)} failed)")
    for row in failed:
        print(f"  FAILED {row.method} n={row.n_steps}: {row.note}", file=sys.stderr)
    return EXIT_RUN_FAILED if failed else EXIT_OK


def _command_verify(args: argparse.Namespace) -> int:
    selected = split_list(args.methods) if args.methods else None
    reports = verify_registered(selected)
    for report in reports:
        status = "ok" if report.passed else "FAILED"
        print(f"{report.method_id}: {status}")
        print(f"  sum a = {report.a_sum:.3e}  sum b = {report.b_sum:.15g}")
        print(f"  algebraic order = {report.algebraic_order} (expected {report.expected_algebraic_order})")
        if report.phase_lag_infinite:
            print("  phase-lag order = infinite")
        elif report.phase_lag is not None:
            print(
                f"  phase-lag order = {report.phase_lag.order_estimate:.4f}"
                f"  constant = {report.phase_lag.constant_estimate:.6e}"
            )
        if report.fitted_identity_max is not None:
            print(f"  max |phase lag| on fitted window = {report.fitted_identity_max:.3e}")
        print(f"  periodic for v up to {report.periodicity_bound:.3f} (scanned)")
        for failure in report.failures:
            print(f"  - {failure}")
    return EXIT_OK if all(report.passed for report in reports) else EXIT_RUN_FAILED


def _command_list(args: argparse.Namespace) -> int:
    print("methods:")
    for method_id in method_ids():
        method = get_method(method_id)
        print(f"  {method_id:<18} {method.steps}-step, stages={method.stages}  {method.description}")
    print("problems:")
    for problem_id in problem_ids():
        entry = get_problem_entry(problem_id)
        problem = entry.factory()
        print(f"  {problem_id:<18} metric={entry.default_metric:<11} {problem.description}")
    return EXIT_OK


def _command_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("oscint.main:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "sweep": _command_sweep,
    "verify": _command_verify,
    "list": _command_list,
    "serve": _command_serve,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        log_activity(ActivityEvent.CONFIG_REJECTED, str(exc), level="error", status="failed", source="cli")
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OscintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUN_FAILED


if __name__ == "__main__":
    sys.exit(main())
