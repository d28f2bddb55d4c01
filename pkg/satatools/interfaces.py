"""Adapters giving every assignment algorithm the same calling convention."""
from abc import ABCMeta, abstractmethod

from .errors import UsageError
from .oracle import DEFAULT_BOUND, exact_optimal, solve_random
from .solver import solve_aba, solve_tba
from .utils import get_logger


__all__ = ["SolverInterface", "TBAInterface", "ABAInterface",
           "RandomInterface", "ExactInterface", "get_interface",
           "ALGORITHMS", "BENCH_ALGORITHMS"]


LOG = get_logger(__name__)


class SolverInterface(metaclass=ABCMeta):
    """An adapter to run an assignment algorithm on an instance."""

    name = None

    @abstractmethod
    def solve(self, instance, seed=0, counter=None):
        """Computes an assignment.

        Args:
          instance (Instance): the problem to solve.
          seed (int): seed for randomized algorithms, ignored by the others.
          counter (MemoryCounter, optional): receives the algorithm's memory
            bookkeeping.

        Returns:
          assignment (Assignment): the contracts and completed tasks.
        """
        pass

    def __repr__(self):
        return self.__class__.__name__


class TBAInterface(SolverInterface):
    """Greedy cover, tasks by descending total budget."""
    name = "tba"

    def solve(self, instance, seed=0, counter=None):
        return solve_tba(instance, counter=counter)


class ABAInterface(SolverInterface):
    """Greedy cover, tasks by descending budget per required skill."""
    name = "aba"

    def solve(self, instance, seed=0, counter=None):
        return solve_aba(instance, counter=counter)


class RandomInterface(SolverInterface):
    """Random task order and random worker draws."""
    name = "random"

    def solve(self, instance, seed=0, counter=None):
        return solve_random(instance, seed, counter=counter)


class ExactInterface(SolverInterface):
    """Exhaustive optimum, small instances only.

    Args:
        bound(MappingBound): enumeration limits.
    """
    name = "exact"

    def __init__(self, bound=DEFAULT_BOUND):
        super(ExactInterface, self).__init__()
        self.bound = bound

    def solve(self, instance, seed=0, counter=None):
        return exact_optimal(instance, bound=self.bound)


_REGISTRY = {cls.name: cls for cls in
             [TBAInterface, ABAInterface, RandomInterface, ExactInterface]}

ALGORITHMS = tuple(_REGISTRY)

# The exact oracle does not scale to benchmark instances.
BENCH_ALGORITHMS = ("tba", "aba", "random")


def get_interface(name):
    """Instantiates the interface of an algorithm by name."""
    try:
        cls = _REGISTRY[name]
    except KeyError:
        raise UsageError("unknown algorithm '%s', expected one of %s"
                         % (name, ", ".join(ALGORITHMS)))
    LOG.debug("using %s", cls.__name__)
    return cls()
