"""
qdistgen - Main Application Module.

Command-line entry point. Subcommands:

  run        train one circuit towards one target
  sweep      train every circuit x target x seed of an experiment config
  gradcheck  compare shift-rule gradients with finite differences
  catalog    write the built-in circuits in the ansatz file format
  plotdata   turn sweep records into CSV plot data

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 gradient check failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from qdistgen import __version__
from qdistgen.circuits import catalog_all, dump_template, save_templates
from qdistgen.config import (
    DEFAULT_FD_STEP,
    DEFAULT_GRADCHECK_POINTS,
    DEFAULT_GRADCHECK_TOLERANCE,
    DEFAULT_LOG_FILE,
    LOG_LEVEL,
    MOMENTUM_VARIANT_BETA,
    RECORDS_FILENAME,
    get_default_config,
    load_config_file,
    merge_config,
)
from qdistgen.costs import TargetSpec
from qdistgen.errors import ConfigError, GradcheckFailure, NumericalError, QDistGenError
from qdistgen.experiments import (
    ExperimentConfig,
    RecordSink,
    emit_plotdata,
    gradcheck,
    load_records,
    resolve_circuit,
    run_single,
    run_sweep,
    summarize,
    target_for,
)
from qdistgen.experiments.records import write_trace
from qdistgen.optimizer import TrainConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_GRADCHECK = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class CLIArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as ConfigError."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def setup_logging(level: str = LOG_LEVEL, log_file: Optional[Path] = None) -> None:
    """Configure root logging to stdout and, optionally, a log file."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stdout)]
    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)


def _add_training_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training")
    group.add_argument("--stepsize", type=float, help="Learning rate (default 0.1)")
    group.add_argument("--iters", type=int, help="Number of updates (default 1000)")
    group.add_argument(
        "--momentum",
        type=float,
        nargs="?",
        const=MOMENTUM_VARIANT_BETA,
        help=f"Momentum coefficient; bare flag uses {MOMENTUM_VARIANT_BETA}",
    )
    group.add_argument("--cost", choices=["lse", "kl", "js"], help="Cost function (default js)")
    group.add_argument("--init", choices=["zeros", "uniform"], help="Parameter initialization")
    group.add_argument("--early-stop", type=float, help="Stop once the cost drops below this")


def _add_target_options(parser: argparse.ArgumentParser, multiple: bool) -> None:
    parser.add_argument(
        "--target",
        nargs="+" if multiple else None,
        choices=["uniform", "normal", "binomial", "poisson"],
        help="Target distribution(s)",
    )
    parser.add_argument("--p", type=float, help="Binomial success probability (default 0.1)")
    parser.add_argument(
        "--lambda", dest="lam", type=float, help="Poisson rate (default 1.0)"
    )


def build_parser() -> CLIArgumentParser:
    parser = CLIArgumentParser(
        prog="qdistgen",
        description="Train parameterized quantum circuits to generate probability distributions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="YAML experiment configuration file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only log warnings and errors")
    parser.add_argument("--log-file", type=Path, help="Also write the log to this file")
    parser.add_argument(
        "--log", action="store_true", help=f"Also write the log to {DEFAULT_LOG_FILE}"
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    run = sub.add_parser("run", help="Train one circuit towards one target")
    run.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="YAML configuration file")
    run.add_argument("--circuit", required=True, help="Catalog id or template file")
    _add_target_options(run, multiple=False)
    run.add_argument("--seed", type=int, default=0, help="Initialization seed")
    run.add_argument("--out", type=Path, help="Append the record and trace to this directory")
    _add_training_options(run)
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="Run a full experiment sweep")
    sweep.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="YAML configuration file")
    sweep.add_argument("--circuit", nargs="+", help="Catalog ids or template files")
    _add_target_options(sweep, multiple=True)
    sweep.add_argument("--seeds", type=int, nargs="+", help="Initialization seeds")
    sweep.add_argument("--workers", type=int, help="Worker processes")
    sweep.add_argument("--out", type=Path, help="Output directory")
    _add_training_options(sweep)
    sweep.set_defaults(func=cmd_sweep)

    check = sub.add_parser("gradcheck", help="Check gradients against finite differences")
    check.add_argument("--circuit", nargs="+", help="Catalog ids or template files (default all)")
    check.add_argument("--target", nargs="+", choices=["uniform", "normal", "binomial", "poisson"])
    check.add_argument("--cost", choices=["lse", "kl", "js"], default="js")
    check.add_argument("--points", type=int, default=DEFAULT_GRADCHECK_POINTS,
                       help="Random parameter points per circuit")
    check.add_argument("--seeds", type=int, nargs="+", help="Explicit seeds for the points")
    check.add_argument("--h", type=float, default=DEFAULT_FD_STEP, help="Finite-difference step")
    check.add_argument("--tolerance", type=float, default=DEFAULT_GRADCHECK_TOLERANCE)
    check.add_argument("--out", type=Path, help="Write the JSON report here")
    check.set_defaults(func=cmd_gradcheck)

    catalog = sub.add_parser("catalog", help="Write the built-in circuits as template files")
    catalog.add_argument("--out", type=Path, default=Path("circuits"), help="Output directory")
    catalog.add_argument("--combined", action="store_true",
                         help="Write a single catalog.json instead of one file per circuit")
    catalog.set_defaults(func=cmd_catalog)

    plot = sub.add_parser("plotdata", help="Emit CSV plot data from sweep records")
    plot.add_argument("--records", type=Path, required=True, help="records.ndjson of a sweep")
    plot.add_argument("--kind", choices=["histogram", "accuracy", "trace"], required=True)
    plot.add_argument("--out", type=Path, help="Output directory (default: next to the records)")
    plot.set_defaults(func=cmd_plotdata)

    return parser


def _file_config(args: argparse.Namespace) -> Dict[str, Any]:
    return load_config_file(args.config) if args.config else {}


def _training_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    flags = {
        "stepsize": args.stepsize,
        "iterations": args.iters,
        "momentum": args.momentum,
        "cost": args.cost,
        "init": args.init,
        "early_stop": args.early_stop,
    }
    return {k: v for k, v in flags.items() if v is not None}


def _target_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    out = {}
    if args.p is not None:
        out["binomial_p"] = args.p
    if args.lam is not None:
        out["poisson_lambda"] = args.lam
    return out


def cmd_run(args: argparse.Namespace) -> int:
    config = merge_config(
        merge_config(get_default_config(), _file_config(args)),
        {"training": _training_overrides(args), "targets": _target_overrides(args)},
    )
    template = resolve_circuit(args.circuit)
    kind = args.target or "normal"
    entry = {"kind": kind}
    if kind == "binomial":
        entry["p"] = config["targets"]["binomial_p"]
    elif kind == "poisson":
        entry["lambda"] = config["targets"]["poisson_lambda"]
    target: TargetSpec = target_for(template, entry)

    record, trace = run_single(template, target, TrainConfig.from_dict(config["training"]), args.seed)

    if args.out is not None:
        record.trace_path = write_trace(args.out, record, trace.cost_history)
        with RecordSink(args.out / RECORDS_FILENAME) as sink:
            sink.append(record)

    print(f"circuit {record.circuit_id} ({record.family}) -> {record.target_label}, seed {record.seed}")
    print(f"{record.cost_kind} cost: {record.initial_cost:.6e} -> {record.final_cost:.6e}"
          f" after {record.iterations_run} iterations")
    print("distribution: " + " ".join(f"{p:.4f}" for p in record.final_dist))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    overrides: Dict[str, Any] = {
        "training": _training_overrides(args),
        "targets": _target_overrides(args),
        "experiment": {},
    }
    experiment = overrides["experiment"]
    if args.circuit:
        experiment["circuits"] = args.circuit
    if args.target:
        experiment["targets"] = args.target
    if args.seeds:
        experiment["seeds"] = args.seeds
    if args.workers is not None:
        experiment["workers"] = args.workers
    if args.out is not None:
        experiment["output_dir"] = str(args.out)

    config = ExperimentConfig.from_dict(merge_config(_file_config(args), overrides))
    records = run_sweep(config)
    summary = summarize(records)
    if not summary.empty:
        print(summary.to_string(index=False))

    failed = [r for r in records if not r.ok]
    numerical = [r for r in failed if r.failed_numerically]
    if numerical:
        logger.error(f"{len(numerical)} run(s) failed numerically")
        return EXIT_NUMERICAL
    if failed:
        logger.error(f"{len(failed)} run(s) failed, see the records for details")
        return EXIT_CONFIG
    return EXIT_OK


def cmd_gradcheck(args: argparse.Namespace) -> int:
    if args.circuit:
        templates = [resolve_circuit(ref) for ref in args.circuit]
    else:
        templates = catalog_all()
    if args.points < 1:
        raise ConfigError(f"--points must be positive, got {args.points}")
    seeds = args.seeds or list(range(args.points))
    targets = args.target or ["uniform", "normal", "binomial", "poisson"]

    report = gradcheck(
        templates,
        seeds=seeds,
        h=args.h,
        tolerance=args.tolerance,
        cost_kind=args.cost,
        targets=targets,
    )
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps(report.to_dict(), indent=2), encoding="utf-8")

    for check in report.circuits:
        mark = "ok" if check.max_deviation <= report.tolerance else "FAIL"
        print(f"circuit {check.circuit_id:>4}: max deviation {check.max_deviation:.3e}  {mark}")
    print(f"overall max deviation {report.max_deviation:.3e} (tolerance {report.tolerance:.1e})")

    if not report.passed:
        raise GradcheckFailure("gradient check failed", report=report.to_dict())
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    templates = catalog_all()
    if args.combined:
        args.out.mkdir(parents=True, exist_ok=True)
        path = args.out / "catalog.json"
        document = {"templates": [dump_template(t) for t in templates]}
        path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
        print(f"Wrote {len(templates)} templates to {path}")
    else:
        paths = save_templates(templates, args.out)
        print(f"Wrote {len(paths)} template files to {args.out}")
    return EXIT_OK


def cmd_plotdata(args: argparse.Namespace) -> int:
    records = load_records(args.records)
    root = args.records.parent
    out = args.out if args.out is not None else root / "plotdata"
    paths = emit_plotdata(records, args.kind, out, trace_root=root)
    print(f"Wrote {len(paths)} {args.kind} file(s) to {out}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the qdistgen command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else LOG_LEVEL
    log_file = args.log_file
    if log_file is None and args.log:
        log_file = DEFAULT_LOG_FILE
    setup_logging(level, log_file)

    try:
        return args.func(args)
    except GradcheckFailure as e:
        logger.error(str(e))
        return EXIT_GRADCHECK
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except QDistGenError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
