"""Exact optimum for small instances, and the random baseline.

The exact oracle enumerates every mapping of workers to tasks (or to no
task). For a fixed mapping the cheapest way to staff a task is to buy each
required skill from the cheapest mapped worker offering it, paying the
transport of every mapped worker once. Costs for every subset of workers are
tabulated per task, so each mapping costs one table lookup per task.
"""
from dataclasses import dataclass

import numpy as np

from .errors import OracleLimitError, UsageError
from .model import EPS, Assignment, distance, make_contract
from .solver import best_subset_for_worker, skill_owners
from .utils import check_seed, get_logger


__all__ = ["MappingBound", "DEFAULT_BOUND", "MAX_MAPPINGS",
           "MAX_TABLE_WORKERS", "cheapest_allocation", "exact_optimal", "solve_random"]


LOG = get_logger(__name__)

MAX_MAPPINGS = 10**8

# Per-task tables hold 2^max_workers floats each
MAX_TABLE_WORKERS = 20

# Mappings evaluated per numpy batch
CHUNK = 1 << 18


@dataclass(frozen=True)
class MappingBound:
    """Largest instance the exact oracle accepts.

    (max_tasks + 1) ** max_workers mappings must stay below MAX_MAPPINGS and
    max_workers at most MAX_TABLE_WORKERS.
    """
    max_workers: int
    max_tasks: int

    def __post_init__(self):
        if self.max_workers < 0 or self.max_tasks < 0:
            raise UsageError("mapping bounds should be >= 0")
        if (self.max_tasks + 1)**self.max_workers > MAX_MAPPINGS:
            raise UsageError(
                "(max_tasks + 1)^max_workers = %d^%d exceeds %d mappings"
                % (self.max_tasks + 1, self.max_workers, MAX_MAPPINGS))
        if self.max_workers > MAX_TABLE_WORKERS:
            raise UsageError("max_workers = %d exceeds %d, the cost tables "
                             "would not fit in memory"
                             % (self.max_workers, MAX_TABLE_WORKERS))


DEFAULT_BOUND = MappingBound(max_workers=12, max_tasks=3)


def cheapest_allocation(instance, task, workers):
    """Cheapest labor split of a task among a fixed set of workers.

    Every required skill goes to the cheapest worker offering it (lower id
    on ties). Every worker in `workers` pays its transport, even if it ends
    up with no skill.

    Args:
        instance(Instance): the problem.
        task(int): task id.
        workers(iterable of int): workers mapped to the task.

    Returns:
        (float, dict) total cost and worker -> tuple of skills (workers
        with no skill are left out), or None if a skill is not covered.
    """
    workers = sorted(set(workers))
    cost = sum(instance.gamma*distance(instance, w, task) for w in workers)
    allocation = {}
    for s in instance.tasks[task].required:
        best = None
        for w in workers:
            fee = instance.workers[w].fees.get(s)
            if fee is not None and (best is None or fee < best[0]):
                best = (fee, w)
        if best is None:
            return None
        cost += best[0]
        allocation.setdefault(best[1], []).append(s)
    return cost, {w: tuple(sorted(s)) for w, s in allocation.items()}


def _task_table(instance, task):
    """Utility of a task for every subset (bitmask) of workers mapped to it.

    Returns:
        np.ndarray [2^W] of utilities (0 where the task fails) and a bool
        np.ndarray [2^W] telling whether the task is completed.
    """
    n = len(instance.workers)
    t = instance.tasks[task]
    transport = instance.gamma*instance.distances_to(task)

    # Tables are filled by doubling: masks in [2^w, 2^(w+1)) are the masks
    # below 2^w with worker w added.
    cost = np.zeros(1 << n)
    for w in range(n):
        cost[1 << w:1 << (w + 1)] = cost[:1 << w] + transport[w]
    for s in t.required:
        cheapest = np.full(1 << n, np.inf)
        for w in range(n):
            fee = instance.workers[w].fees.get(s, np.inf)
            cheapest[1 << w:1 << (w + 1)] = np.minimum(cheapest[:1 << w], fee)
        cost += cheapest

    completed = cost <= t.budget + EPS
    value = np.where(completed, t.budget - np.where(completed, cost, 0.0), 0.0)
    return value, completed


def _decode(index, n_workers, base):
    """Mapping digits of a mapping index, worker 0 most significant."""
    digits = []
    for w in range(n_workers):
        digits.append((index // base**(n_workers - 1 - w)) % base)
    return digits


def exact_optimal(instance, bound=DEFAULT_BOUND):
    """Maximal total utility assignment, by exhaustive enumeration.

    Mappings are enumerated in lexicographic order, worker 0 first, with
    "unassigned" ranked before task 0, 1... Among mappings within EPS of the
    best utility the first one is returned.

    Args:
        instance(Instance): the problem, within `bound`.
        bound(MappingBound): enumeration limits.

    Returns:
        Assignment

    Raises:
        OracleLimitError: if the instance is larger than `bound`.
    """
    n_w = len(instance.workers)
    n_t = len(instance.tasks)
    if n_w > bound.max_workers or n_t > bound.max_tasks:
        raise OracleLimitError(
            "exact oracle is limited to %d workers and %d tasks, got %d "
            "workers and %d tasks" % (bound.max_workers, bound.max_tasks,
                                      n_w, n_t))
    if n_w == 0 or n_t == 0:
        return Assignment()

    tables = [_task_table(instance, t) for t in range(n_t)]
    base = n_t + 1
    n_maps = base**n_w
    LOG.debug("enumerating %d mappings", n_maps)

    best_value = -np.inf
    best_index = 0
    for start in range(0, n_maps, CHUNK):
        index = np.arange(start, min(start + CHUNK, n_maps), dtype=np.int64)
        masks = np.zeros((n_t, len(index)), dtype=np.int64)
        for w, digit in enumerate(_decode(index, n_w, base)):
            for t in range(n_t):
                masks[t] |= (digit == t + 1).astype(np.int64) << w
        utility = np.zeros(len(index))
        for t in range(n_t):
            utility += tables[t][0][masks[t]]

        top = utility.max()
        if top > best_value + EPS:
            best_index = start + int(np.argmax(utility >= top - EPS))
            best_value = top

    digits = [int(d) for d in _decode(best_index, n_w, base)]
    contracts = []
    completed = set()
    for t in range(n_t):
        mapped = [w for w, d in enumerate(digits) if d == t + 1]
        mask = sum(1 << w for w in mapped)
        if not tables[t][1][mask]:
            continue
        found = cheapest_allocation(instance, t, mapped)
        if found is None:
            continue
        _, allocation = found
        for w in sorted(allocation):
            contracts.append(make_contract(instance, w, t, allocation[w]))
        completed.add(t)

    LOG.debug("optimal mapping %s with utility %.6f", digits, best_value)
    return Assignment(contracts=contracts, completed=completed)


def solve_random(instance, seed, counter=None):
    """Random baseline.

    Tasks are visited in a random order. For each task a random pool worker
    owning an uncovered skill is drawn and hired with its best ratio subset.
    Draws that would exceed the budget are skipped until the next hire; a
    task with no affordable draw left releases its workers.

    Args:
        instance(Instance): the problem.
        seed(int): seed of the random generator.
        counter(MemoryCounter, optional): tracks the solver's memory.

    Returns:
        Assignment
    """
    rng = np.random.default_rng(check_seed(seed))
    order = [int(t) for t in rng.permutation(len(instance.tasks))]
    pool = set(range(len(instance.workers)))
    owners = skill_owners(instance)
    if counter is not None:
        counter.alloc(len(pool) + len(order)
                      + sum(len(v) for v in owners.values()))

    contracts = []
    completed = set()
    for t in order:
        task = instance.tasks[t]
        remaining = set(task.required)
        dists = instance.distances_to(t).tolist()
        limit = task.budget + EPS
        hired = []
        spent = 0.0
        skipped = set()
        while remaining:
            eligible = set()
            for s in remaining:
                eligible.update(owners.get(s, ()))
            eligible = sorted((eligible & pool) - skipped)
            if not eligible:
                break
            if counter is not None:
                counter.alloc(len(eligible))
                counter.free(len(eligible))

            w = eligible[int(rng.integers(len(eligible)))]
            cand = best_subset_for_worker(instance, w, t, remaining,
                                          dist=dists[w])
            if spent + cand.reward > limit:
                skipped.add(w)
                continue

            contract = make_contract(instance, w, t, cand.subset,
                                     dist=dists[w])
            pool.discard(w)
            hired.append(contract)
            spent += contract.reward
            remaining.difference_update(cand.subset)
            skipped.clear()
            if counter is not None:
                counter.alloc(5 + len(contract.used_skills))

        if remaining:
            pool.update(c.worker for c in hired)
            if counter is not None:
                counter.free(sum(5 + len(c.used_skills) for c in hired))
            continue
        contracts.extend(hired)
        completed.add(t)

    return Assignment(contracts=contracts, completed=completed)
