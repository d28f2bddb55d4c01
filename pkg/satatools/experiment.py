"""Parameter sweeps over synthetic instances.

A grid varies one generator factor over a list of values and keeps the
other parameters at their base setting. Every (value, repetition) cell
draws one instance from a seed derived from the grid seed, and all the
requested algorithms solve that same instance.
"""
import dataclasses
import os
import signal
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .config import DEFAULT_CONFIG, parse_config
from .datagen import SWEEP_FACTORS, GenParams, generate_instance
from .dataio import instance_nbytes
from .errors import DataError, UsageError, ValidationFailure
from .interfaces import BENCH_ALGORITHMS, get_interface
from .model import completed_count, total_utility, validate
from .utils import MemoryCounter, Timer, check_seed, get_logger


__all__ = ["ExperimentGrid", "MetricsRecord", "ExperimentRunner",
           "derive_seed", "load_grid", "run_experiment", "write_metrics_csv",
           "read_metrics_csv", "NUM_WORKERS_ENV"]


LOG = get_logger(__name__)

NUM_WORKERS_ENV = "SATATOOLS_NUM_WORKERS"


@dataclass(frozen=True)
class ExperimentGrid:
    """A one-factor-at-a-time sweep.

    Args:
        base(GenParams): generator settings for the factors not swept. Its
            seed is ignored, each cell derives its own.
        sweep_factor(str): the GenParams field that varies.
        sweep_values(sequence): values taken by `sweep_factor`.
        algorithms(sequence of str): algorithms run on every instance.
        repetitions(int): instances drawn per sweep value.
        seed(int): 64-bit root seed.
        timing(bool): measure runtimes. Runtimes are recorded as 0 otherwise,
            which makes the metrics reproducible bit for bit.
        workers(int): processes solving cells in parallel.
    """
    base: GenParams
    sweep_factor: str
    sweep_values: tuple
    algorithms: tuple = BENCH_ALGORITHMS
    repetitions: int = 20
    seed: int = 0
    timing: bool = True
    workers: int = 1

    def __post_init__(self):
        if not isinstance(self.base, GenParams):
            raise UsageError("grid base should be GenParams")
        if self.sweep_factor not in SWEEP_FACTORS:
            raise UsageError("cannot sweep '%s', expected one of %s"
                             % (self.sweep_factor, ", ".join(SWEEP_FACTORS)))
        values = self.sweep_values
        if isinstance(values, (str, bytes)) or not hasattr(values, "__iter__"):
            raise UsageError("sweep values should be a list")
        values = tuple(values)
        if not values:
            raise UsageError("sweep values should not be empty")
        object.__setattr__(self, "sweep_values", values)

        algorithms = self.algorithms
        if isinstance(algorithms, str):
            algorithms = [algorithms]
        algorithms = tuple(algorithms)
        if not algorithms:
            raise UsageError("a grid needs at least one algorithm")
        for a in algorithms:
            if a not in BENCH_ALGORITHMS:
                raise UsageError("algorithm '%s' cannot be benchmarked, "
                                 "expected one of %s"
                                 % (a, ", ".join(BENCH_ALGORITHMS)))
        if len(set(algorithms)) != len(algorithms):
            raise UsageError("algorithms are listed twice: %s"
                             % list(algorithms))
        object.__setattr__(self, "algorithms", algorithms)

        for name in ["repetitions", "workers"]:
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise UsageError("%s should be an integer >= 1, got %r"
                                 % (name, v))
        object.__setattr__(self, "seed", check_seed(self.seed, "grid seed"))
        object.__setattr__(self, "timing", bool(self.timing))

        # Fail now rather than halfway through the sweep.
        for v in values:
            self.params_for(v, 0)

    @property
    def n_cells(self):
        return len(self.sweep_values)*self.repetitions

    def params_for(self, value, seed):
        """Generator settings of one cell."""
        return self.base.replace(**{self.sweep_factor: value, "seed": seed})

    @staticmethod
    def from_config(conf):
        """Builds a grid from a parsed config with `generator` and
        `experiment` sections."""
        try:
            exp = conf["experiment"]
            sweep = exp["sweep"]
            return ExperimentGrid(
                base=GenParams.from_dict(conf["generator"]),
                sweep_factor=sweep["factor"],
                sweep_values=sweep["values"] or (),
                algorithms=exp["algorithms"] or (),
                repetitions=exp["repetitions"],
                seed=exp["seed"],
                timing=exp["timing"],
                workers=exp["workers"])
        except (KeyError, TypeError) as e:
            raise UsageError("incomplete grid configuration: %s" % e)


def load_grid(path):
    """Reads a grid .yml (or .json) file over the shipped defaults."""
    grid = ExperimentGrid.from_config(parse_config(path, DEFAULT_CONFIG))
    LOG.debug("loaded grid sweeping %s over %s", grid.sweep_factor,
              list(grid.sweep_values))
    return grid


@dataclass(frozen=True)
class MetricsRecord:
    """Metrics of one algorithm on one instance.

    Attributes:
        algorithm(str): algorithm name.
        factor(str): swept generator parameter.
        value(float): its value for this instance.
        repetition(int): repetition index within the sweep value.
        utility(float): total utility of the assignment.
        runtime(float): wall-clock seconds spent in the solver.
        memory_estimate(int): peak bytes of the solver's own structures.
        completed_tasks(int): number of completed tasks.
        seed_used(int): seed the instance was generated with.
        instance_bytes(int): estimated size of the instance.
    """
    algorithm: str
    factor: str
    value: float
    repetition: int
    utility: float
    runtime: float
    memory_estimate: int
    completed_tasks: int
    seed_used: int
    instance_bytes: int


_FIELDS = [f.name for f in dataclasses.fields(MetricsRecord)]
_TYPES = {"algorithm": str, "factor": str, "value": float, "repetition": int,
          "utility": float, "runtime": float, "memory_estimate": int,
          "completed_tasks": int, "seed_used": int, "instance_bytes": int}


def derive_seed(seed, value_index, repetition):
    """63-bit instance seed of a grid cell."""
    ss = np.random.SeedSequence(seed, spawn_key=(value_index, repetition))
    return int(ss.generate_state(1, dtype=np.uint64)[0]) >> 1


def _run_cell(grid, value_index, repetition):
    value = grid.sweep_values[value_index]
    seed = derive_seed(grid.seed, value_index, repetition)
    instance = generate_instance(grid.params_for(value, seed))
    nbytes = instance_nbytes(instance)

    records = []
    for name in grid.algorithms:
        interface = get_interface(name)
        counter = MemoryCounter()
        with Timer() as timer:
            assignment = interface.solve(instance, seed=seed, counter=counter)
        report = validate(instance, assignment)
        if not report.is_valid:
            raise ValidationFailure(name, report)
        records.append(MetricsRecord(
            algorithm=name, factor=grid.sweep_factor, value=float(value),
            repetition=repetition,
            utility=float(total_utility(instance, assignment)),
            runtime=timer.elapsed if grid.timing else 0.0,
            memory_estimate=counter.peak,
            completed_tasks=completed_count(assignment),
            seed_used=seed, instance_bytes=nbytes))
    return records


def _ignore_sigint():
    signal.signal(signal.SIGINT, signal.SIG_IGN)


def _num_workers(grid, workers):
    if workers is not None:
        n = workers
    elif os.environ.get(NUM_WORKERS_ENV):
        try:
            n = int(os.environ[NUM_WORKERS_ENV])
        except ValueError:
            raise UsageError("%s should be an integer, got '%s'"
                             % (NUM_WORKERS_ENV, os.environ[NUM_WORKERS_ENV]))
    else:
        n = grid.workers
    if n < 1:
        raise UsageError("number of workers should be >= 1, got %d" % n)
    if grid.timing and n > 1:
        LOG.warning("runtimes are measured, running in one process instead "
                    "of %d", n)
        n = 1
    return n


class ExperimentRunner(object):
    """Runs a grid cell by cell, with hooks for callbacks.

    Cells are visited by sweep value, then repetition. With several workers
    the cells are solved in a process pool but their records still reach
    the callbacks in that order.
    A timed grid always runs in a single process.

    Args:
      grid (ExperimentGrid): the sweep to run.
      workers (int, optional): number of processes, overrides the
        environment and the grid.

    Attributes:
      callbacks (list of Callback): hooks called as the experiment
        progresses.
    """

    def __init__(self, grid, workers=None):
        super(ExperimentRunner, self).__init__()
        self.grid = grid
        self.workers = _num_workers(grid, workers)
        self.callbacks = []
        self._keep_running = True
        LOG.debug("Creating {}".format(self))

    def __repr__(self):
        return "ExperimentRunner({} cells, {} workers, {} callbacks)".format(
            self.grid.n_cells, self.workers, len(self.callbacks))

    def interrupt_handler(self, signo, frame):
        """Stop after the current cell upon receiving a SIGINT (Ctrl+C)."""
        LOG.debug("interrupting run")
        self._keep_running = False

    def add_callback(self, callback):
        """Adds a callback to the list of experiment hooks."""
        LOG.debug("Adding callback {}".format(callback))
        callback.grid = self.grid
        self.callbacks.append(callback)

    def cells(self):
        """(value index, repetition) pairs in run order."""
        return [(v, r) for v in range(len(self.grid.sweep_values))
                for r in range(self.grid.repetitions)]

    def run(self):
        """Runs every cell.

        Returns:
          records (list of MetricsRecord): in cell order, then in the grid's
            algorithm order. Incomplete if the run was interrupted.

        Raises:
          ValidationFailure: if an algorithm returned an invalid assignment.
        """
        main = threading.current_thread() is threading.main_thread()
        if main:
            previous = signal.signal(signal.SIGINT, self.interrupt_handler)
        self._keep_running = True
        try:
            return self._run()
        finally:
            if main:
                signal.signal(signal.SIGINT, previous)

    def _run(self):
        grid = self.grid
        cells = self.cells()
        LOG.info("Sweeping %s over %s: %d cells, algorithms %s",
                 grid.sweep_factor, list(grid.sweep_values), len(cells),
                 ", ".join(grid.algorithms))
        self.__experiment_start(len(cells))

        records = []
        if self.workers == 1:
            results = (_run_cell(grid, v, r) for v, r in cells)
            self.__consume(cells, results, records)
        else:
            with ProcessPoolExecutor(max_workers=self.workers,
                                     initializer=_ignore_sigint) as pool:
                futures = [pool.submit(_run_cell, grid, v, r)
                           for v, r in cells]
                try:
                    self.__consume(cells, (f.result() for f in futures),
                                   records)
                finally:
                    for f in futures:
                        f.cancel()

        self.__experiment_end(records)
        return records

    def __consume(self, cells, results, records):
        for idx, (v, r) in enumerate(cells):
            if not self._keep_running:
                LOG.warning("Interrupted after %d of %d cells", idx,
                            len(cells))
                return
            self.__cell_start(idx, self.grid.sweep_values[v], r)
            try:
                cell_records = next(results)
            except ValidationFailure as e:
                LOG.error("%s", e)
                raise
            for rec in cell_records:
                self.__record(rec)
            records.extend(cell_records)
            self.__cell_end(cell_records)

    def __experiment_start(self, n_cells):
        for cb in self.callbacks:
            cb.experiment_start(self.grid, n_cells)

    def __experiment_end(self, records):
        for cb in self.callbacks:
            cb.experiment_end(records)

    def __cell_start(self, cell_idx, value, repetition):
        for cb in self.callbacks:
            cb.cell_start(cell_idx, value, repetition)

    def __record(self, record):
        for cb in self.callbacks:
            cb.record(record)

    def __cell_end(self, records):
        for cb in self.callbacks:
            cb.cell_end(records)


def run_experiment(grid, callbacks=None, workers=None):
    """Runs a grid and returns its MetricsRecords in deterministic order.

    Args:
        grid(ExperimentGrid): the sweep.
        callbacks(list of Callback, optional): hooks to attach.
        workers(int, optional): number of processes.
    """
    runner = ExperimentRunner(grid, workers=workers)
    for cb in callbacks or []:
        runner.add_callback(cb)
    return runner.run()


def _frame(records):
    return pd.DataFrame([dataclasses.asdict(r) for r in records],
                        columns=_FIELDS)


def write_metrics_csv(records, path):
    """Writes records to a CSV file, one row per record.

    Columns follow the MetricsRecord fields. Floats are written with 17
    significant digits so that they parse back to the same value.
    """
    try:
        _frame(records).to_csv(path, index=False, float_format="%.17g",
                               lineterminator="\n")
    except OSError as e:
        raise DataError("could not write %s: %s" % (path, e))
    LOG.debug("wrote %d records to %s", len(records), path)


def read_metrics_csv(path):
    """Parses a CSV written by `write_metrics_csv` back into records."""
    try:
        df = pd.read_csv(path, float_precision="round_trip",
                         dtype={"algorithm": str, "factor": str})
    except (OSError, ValueError) as e:
        raise DataError("could not read %s: %s" % (path, e))
    if list(df.columns) != _FIELDS:
        raise DataError("%s: expected columns %s, got %s"
                        % (path, _FIELDS, list(df.columns)))
    return [MetricsRecord(**{k: _TYPES[k](row[k]) for k in _FIELDS})
            for row in df.to_dict("records")]
