"""Helpers classes and functions."""
import logging
import sys
import time

import coloredlogs

from .errors import UsageError


__all__ = ["Averager", "Timer", "MemoryCounter", "check_seed", "get_logger",
           "set_logger"]


LOG_FORMAT = "[%(process)d] %(levelname)s %(name)s | %(message)s"


def set_logger(debug=False):
    """Sends the package logs to stderr, in color when it is a terminal.

    Args:
        debug(bool): if True, also show the solvers' debug traces.
    """
    coloredlogs.install(level=logging.DEBUG if debug else logging.INFO,
                        fmt=LOG_FORMAT, stream=sys.stderr)


def get_logger(name):
    """Get a named logger.

    Args:
        name(string): name of the logger
    """
    return logging.getLogger(name)


def check_seed(seed, what="seed"):
    """Returns `seed` as an int, UsageError unless 0 <= seed < 2**64."""
    if isinstance(seed, bool):
        raise UsageError("%s should be an integer, got %r" % (what, seed))
    try:
        value = int(seed)
    except (TypeError, ValueError, OverflowError):
        raise UsageError("%s should be an integer, got %r" % (what, seed))
    if value != seed or not 0 <= value < 2**64:
        raise UsageError("%s should be an integer in [0, 2^64), got %r"
                         % (what, seed))
    return value


class Averager(object):
    """Keeps track of running averages, for each key."""

    def __init__(self, keys=None):
        self.values = {}
        self.counts = {}
        for k in keys or []:
            self.values[k] = 0.0
            self.counts[k] = 0

    def __getitem__(self, key):
        if self.counts.get(key, 0) == 0:
            return 0.0
        return self.values[key] * 1.0/self.counts[key]

    def reset(self):
        for k in self.values.keys():
            self.values[k] = 0.0
            self.counts[k] = 0

    def update(self, key, value, count=1):
        if value is None:
            return
        self.values[key] = self.values.get(key, 0.0) + value*count
        self.counts[key] = self.counts.get(key, 0) + count


class Timer(object):
    """A simple wall-clock timer context.

    Returns timing in seconds.
    """

    def __init__(self):
        self._time = 0
        self.elapsed = None

    def __enter__(self):
        self._time = time.perf_counter()
        return self

    def __exit__(self, type_, value, traceback):
        self.elapsed = time.perf_counter() - self._time


class MemoryCounter(object):
    """Counts the bytes held by a solver's live data structures.

    This is an estimate: every id, skill and amount is charged
    `ITEM_BYTES`, and containers are charged per element. Only the peak is
    reported.
    """

    ITEM_BYTES = 8

    def __init__(self):
        self.current = 0
        self.peak = 0

    def __repr__(self):
        return "MemoryCounter(current={}, peak={})".format(
            self.current, self.peak)

    def alloc(self, n_items):
        self.current += n_items*MemoryCounter.ITEM_BYTES
        self.peak = max(self.peak, self.current)

    def free(self, n_items):
        self.current = max(0, self.current - n_items*MemoryCounter.ITEM_BYTES)
