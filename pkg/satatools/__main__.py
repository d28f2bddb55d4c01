"""Executable entrypoints.

Exit codes: 0 on success, 1 on a usage error (bad flags, parameters or
grid), 2 on a data error (missing or malformed file, invalid assignment).
"""
import argparse
import sys

from .callbacks import LoggingCallback, ProgressBarCallback, SQLLoggingCallback
from .datagen import generate_instance, load_params
from .dataio import load_assignment, load_instance, save_assignment, \
    save_instance
from .errors import DataError, UsageError, ValidationFailure
from .experiment import load_grid, run_experiment, write_metrics_csv
from .interfaces import ALGORITHMS, get_interface
from .model import completed_count, total_utility, validate
from .utils import get_logger, set_logger


__all__ = ["BasicArgumentParser", "cli_main", "main"]


LOG = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class BasicArgumentParser(argparse.ArgumentParser):
    """An argument parser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _parser():
    parser = BasicArgumentParser(
        prog="satatools",
        description="Specialty-aware task assignment solvers and benchmarks.")
    parser.add_argument('--debug', dest="debug", action="store_true")
    parser.set_defaults(debug=False)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("solve", help="solve an instance file.")
    p.add_argument("--instance", required=True, help="instance JSON file.")
    p.add_argument("--algorithm", default="tba", choices=ALGORITHMS)
    p.add_argument("--seed", type=int, default=0,
                   help="seed of the random baseline.")
    p.add_argument("--out", help="where to save the assignment JSON.")

    p = sub.add_parser("generate", help="draw a synthetic instance.")
    p.add_argument("--params", help="generator parameters .yml or .json, "
                   "overridden by the flags below.")
    p.add_argument("--out", required=True, help="instance JSON file.")
    p.add_argument("--n_tasks", type=int)
    p.add_argument("--n_workers", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--mean_budget", type=float)
    p.add_argument("--mean_price", type=float)
    p.add_argument("--n_skills", type=int)
    p.add_argument("--area_side", type=float)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("bench", help="run a parameter sweep.")
    p.add_argument("--grid", required=True, help="grid .yml or .json file.")
    p.add_argument("--out", required=True, help="metrics CSV file.")
    p.add_argument("--sqlite", help="also append the metrics to this "
                   ".sqlite database.")
    p.add_argument("--workers", type=int,
                   help="number of processes, overrides the grid.")
    p.add_argument("--no-progress", dest="progress", action="store_false",
                   help="hide the progress bar.")

    p = sub.add_parser("validate", help="check an assignment.")
    p.add_argument("--instance", required=True, help="instance JSON file.")
    p.add_argument("--assignment", required=True,
                   help="assignment JSON file.")
    return parser


_GEN_FLAGS = ["n_tasks", "n_workers", "gamma", "mean_budget", "mean_price",
              "n_skills", "area_side", "seed"]


def _solve(args):
    instance = load_instance(args.instance)
    interface = get_interface(args.algorithm)
    assignment = interface.solve(instance, seed=args.seed)
    report = validate(instance, assignment)
    if not report.is_valid:
        raise ValidationFailure(args.algorithm, report)
    if args.out:
        save_assignment(assignment, args.out)
        LOG.info("assignment saved to %s", args.out)
    print("total utility: {:.9f}".format(total_utility(instance, assignment)))
    print("{} tasks completed".format(completed_count(assignment)))
    return EXIT_OK


def _generate(args):
    params = load_params(args.params)
    changes = {k: getattr(args, k) for k in _GEN_FLAGS
               if getattr(args, k) is not None}
    if changes:
        params = params.replace(**changes)
    instance = generate_instance(params)
    save_instance(instance, args.out)
    LOG.info("%s saved to %s", instance, args.out)
    return EXIT_OK


def _bench(args):
    grid = load_grid(args.grid)
    callbacks = [LoggingCallback("satatools.bench")]
    if args.progress:
        callbacks.append(ProgressBarCallback())
    if args.sqlite:
        callbacks.append(SQLLoggingCallback(args.sqlite))
    records = run_experiment(grid, callbacks=callbacks, workers=args.workers)
    write_metrics_csv(records, args.out)
    LOG.info("%d records written to %s", len(records), args.out)
    return EXIT_OK


def _validate(args):
    instance = load_instance(args.instance)
    assignment = load_assignment(args.assignment)
    report = validate(instance, assignment)
    print(report)
    if report.is_valid:
        return EXIT_OK
    return EXIT_DATA


_COMMANDS = {
    "solve": _solve,
    "generate": _generate,
    "bench": _bench,
    "validate": _validate,
}


def cli_main(argv):
    """Runs the command line and returns its exit code.

    Args:
        argv(list of str): arguments, without the program name.
    """
    try:
        args = _parser().parse_args(argv)
    except UsageError as e:
        LOG.error("%s", e)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code or EXIT_OK

    set_logger(args.debug)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        LOG.error("%s", e)
        return EXIT_USAGE
    except (DataError, ValidationFailure) as e:
        LOG.error("%s", e)
        return EXIT_DATA
    except OSError as e:
        LOG.error("%s", e)
        return EXIT_DATA


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
