"""Callbacks that can be added to an experiment runner's main loop."""
import dataclasses
import datetime
import logging

from tqdm import tqdm

from .database import SQLiteDatabase
from .utils import Averager


__all__ = [
    "Callback",
    "LoggingCallback",
    "SQLLoggingCallback",
    "ProgressBarCallback",
    "MetricsCollector",
]


LOG = logging.getLogger(__name__)


class Callback(object):
    """Base class for all experiment callbacks.

    Attributes:
        cell(int): index of the current grid cell.
        n_cells(int): number of cells in the grid.
        value: current value of the swept factor.
        repetition(int): current repetition index.
        grid(satatools.ExperimentGrid): grid being run, set by the runner.
    """

    def __repr__(self):
        return self.__class__.__name__

    def __init__(self):
        super(Callback, self).__init__()
        self.cell = 0
        self.n_cells = 0
        self.value = None
        self.repetition = 0
        self.grid = None

    def experiment_start(self, grid, n_cells):
        """Hook to execute code when the experiment begins.

        Args:
            grid(satatools.ExperimentGrid): the sweep about to run.
            n_cells(int): number of (value, repetition) cells.
        """
        self.grid = grid
        self.n_cells = n_cells

    def experiment_end(self, records):
        """Hook to execute code when the experiment ends.

        Args:
            records(list of MetricsRecord): everything recorded so far.
        """
        pass

    def cell_start(self, cell_idx, value, repetition):
        """Hook to execute code before a cell is recorded.

        Args:
            cell_idx(int): index of the cell.
            value: value of the swept factor.
            repetition(int): repetition index.

        Note: self.cell is set here, never incremented.
        """
        self.cell = cell_idx
        self.value = value
        self.repetition = repetition

    def record(self, record):
        """Hook to execute code for each algorithm's metrics.

        Args:
            record(MetricsRecord): metrics of one algorithm on the cell's
                instance.
        """
        pass

    def cell_end(self, records):
        """Hook to execute code when a cell is done.

        Args:
            records(list of MetricsRecord): the cell's records.
        """
        pass


class MetricsCollector(Callback):
    """Keeps every record in memory."""

    def __init__(self):
        super(MetricsCollector, self).__init__()
        self.records = []

    def experiment_start(self, grid, n_cells):
        super(MetricsCollector, self).experiment_start(grid, n_cells)
        self.records = []

    def record(self, record):
        self.records.append(record)


class LoggingCallback(Callback):
    """A callback that logs mean metrics to the console.

    Means are taken per algorithm over the repetitions of a sweep value and
    logged when the sweep moves to the next value.

    Make sure python's logging level is at least info to see the console prints.

    Args:
      name (str): name of the logger
      keys (list of str): MetricsRecord fields to average.
    """

    TABSTOPS = 2

    def __init__(self, name, keys=None):
        super(LoggingCallback, self).__init__()
        if keys is None:
            keys = ["utility", "runtime", "completed_tasks"]
        self.keys = keys

        self.log = logging.getLogger(name)
        self.log.setLevel(logging.INFO)

        self.m_indent = 0
        self.averager = Averager()
        self._current = None

    def __print(self, s):
        self.log.info(self.m_indent*LoggingCallback.TABSTOPS*' ' + s)

    def __flush(self):
        if self._current is None:
            return
        self.__print("{} = {}".format(self.grid.sweep_factor, self._current))
        self.m_indent += 1
        for alg in self.grid.algorithms:
            s = alg
            for k in self.keys:
                s += " | {} = {:.4f}".format(
                    k, self.averager["{}/{}".format(alg, k)])
            self.__print(s)
        self.m_indent -= 1
        self.averager.reset()
        self._current = None

    def experiment_start(self, grid, n_cells):
        super(LoggingCallback, self).experiment_start(grid, n_cells)
        self.__print("Experiment start: {} cells".format(n_cells))

    def experiment_end(self, records):
        super(LoggingCallback, self).experiment_end(records)
        self.__flush()
        self.__print("Experiment ended with {} records".format(len(records)))

    def cell_start(self, cell_idx, value, repetition):
        if self._current is not None and value != self._current:
            self.__flush()
        super(LoggingCallback, self).cell_start(cell_idx, value, repetition)
        self._current = value

    def record(self, record):
        for k in self.keys:
            self.averager.update("{}/{}".format(record.algorithm, k),
                                 getattr(record, k))


class ProgressBarCallback(Callback):
    """A progress bar ticking once per grid cell.

    Args:
        label(str): a prefix label to identify the experiment currently
            running.
    """
    def __init__(self, label=None):
        super(ProgressBarCallback, self).__init__()
        self.pbar = None
        if label is None:
            self.label = ""
        else:
            self.label = label

    def experiment_start(self, grid, n_cells):
        super(ProgressBarCallback, self).experiment_start(grid, n_cells)
        desc = "Sweep {}".format(grid.sweep_factor)
        if self.label:
            desc = "%s | " % self.label + desc
        self.pbar = tqdm(total=n_cells, unit=" cells", desc=desc)

    def experiment_end(self, records):
        super(ProgressBarCallback, self).experiment_end(records)
        if self.pbar is not None:
            self.pbar.close()
            self.pbar = None

    def cell_end(self, records):
        super(ProgressBarCallback, self).cell_end(records)
        self.pbar.set_postfix_str("{} = {}, rep {}".format(
            self.grid.sweep_factor, self.value, self.repetition))
        self.pbar.update(1)


class SQLLoggingCallback(Callback):
    """A callback that appends every record to a .sqlite database.

    Records go to the `table` table, experiment start and end events to
    "events".

    Args:
        path(str): path to the database file.
        table(str): name of the metrics table.
    """

    def __init__(self, path, table="metrics"):
        super(SQLLoggingCallback, self).__init__()
        self.db = SQLiteDatabase(path)
        self.table = table
        self.run_id = None

    def __repr__(self):
        return "SQLLoggingCallback({})".format(self.db.fname)

    def _save_event(self, event, **extra):
        data = {"timestamp": datetime.datetime.now(), "event": event,
                "run": self.run_id}
        data.update(extra)
        self.db.append_row(data, "events")

    def experiment_start(self, grid, n_cells):
        super(SQLLoggingCallback, self).experiment_start(grid, n_cells)
        previous = self.db.read_table("events")
        self.run_id = 0
        if previous is not None and not previous.empty:
            self.run_id = int(previous["run"].max()) + 1
        self._save_event("experiment_start", factor=grid.sweep_factor,
                         cells=n_cells)

    def cell_end(self, records):
        super(SQLLoggingCallback, self).cell_end(records)
        rows = []
        for r in records:
            row = dataclasses.asdict(r)
            row["run"] = self.run_id
            rows.append(row)
        self.db.append_rows(rows, self.table)

    def experiment_end(self, records):
        super(SQLLoggingCallback, self).experiment_end(records)
        self._save_event("experiment_end", factor=self.grid.sweep_factor,
                         cells=self.n_cells)
        self.db.close()
