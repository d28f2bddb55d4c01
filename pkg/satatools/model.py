"""Problem data types and the cost/utility arithmetic shared by all solvers.

Money and distances are floats. A worker's reward for a task is the
transport fee (`gamma` times the worker-task distance) plus the fees of the
skills it uses. A completed task's utility is its budget minus the rewards of
its workers; unfinished tasks have zero utility.
"""
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DataError, UsageError
from .utils import get_logger


__all__ = ["EPS", "Worker", "Task", "Instance", "Contract", "Assignment",
           "Violation", "ValidationReport", "distance", "worker_reward",
           "make_contract", "task_utility", "total_utility",
           "completed_count", "validate"]


LOG = get_logger(__name__)

# Absolute tolerance on money comparisons: a budget holds iff cost <= B + EPS.
EPS = 1e-9


def _finite_nonneg(value, what):
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DataError("{} should be finite and >= 0, got {}".format(
            what, value))
    return value


@dataclass(frozen=True)
class Worker:
    """A worker, its location and the fee it charges for each of its skills.

    Args:
        id(int): index of the worker in its instance.
        x, y(float): location.
        skills(sequence of (int, float)): (skill id, fee) pairs.
    """
    id: int
    x: float
    y: float
    skills: tuple

    def __post_init__(self):
        skills = tuple((int(s), float(f)) for s, f in self.skills)
        object.__setattr__(self, "skills", skills)
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

        if self.id < 0:
            raise DataError("worker id should be >= 0, got %d" % self.id)
        ids = [s for s, _ in skills]
        if len(set(ids)) != len(ids):
            raise DataError("worker %d lists a skill twice" % self.id)
        for s, f in skills:
            if s < 0:
                raise DataError("worker %d has a negative skill id" % self.id)
            _finite_nonneg(f, "fee of skill %d of worker %d" % (s, self.id))

    @property
    def location(self):
        return (self.x, self.y)

    @cached_property
    def fees(self):
        """dict mapping each owned skill to its fee."""
        return dict(self.skills)

    @cached_property
    def skill_set(self):
        return frozenset(self.fees)

    def fee(self, skill):
        try:
            return self.fees[skill]
        except KeyError:
            raise UsageError("worker %d does not have skill %s"
                             % (self.id, skill))


@dataclass(frozen=True)
class Task:
    """A task, its location, the skills it needs and its total budget.

    Args:
        id(int): index of the task in its instance.
        x, y(float): location.
        required(iterable of int): distinct skill ids, at least one.
        budget(float): total money available to pay the workers.
    """
    id: int
    x: float
    y: float
    required: tuple
    budget: float

    def __post_init__(self):
        object.__setattr__(self, "id", int(self.id))
        required = [int(s) for s in self.required]
        if not required:
            raise DataError("task %d requires no skill" % self.id)
        if len(set(required)) != len(required):
            raise DataError("task %d lists a required skill twice" % self.id)
        if self.id < 0:
            raise DataError("task id should be >= 0, got %d" % self.id)
        object.__setattr__(self, "required", tuple(sorted(required)))
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "budget", _finite_nonneg(
            self.budget, "budget of task %d" % self.id))

    @property
    def location(self):
        return (self.x, self.y)

    @property
    def average_budget(self):
        return self.budget / len(self.required)


@dataclass(frozen=True)
class Instance:
    """A full problem instance.

    Args:
        workers(sequence of Worker): ids must be 0, 1, 2...
        tasks(sequence of Task): ids must be 0, 1, 2...
        gamma(float): transport fee per unit of distance.
        n_skills(int or None): size of the skill universe. Inferred from the
            largest skill id when None.
        distance_override(|W|x|T| nested sequence or None): explicit
            worker-task distances replacing the Euclidean ones.
    """
    workers: tuple
    tasks: tuple
    gamma: float
    n_skills: int = None
    distance_override: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "workers", tuple(self.workers))
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "gamma", _finite_nonneg(self.gamma, "gamma"))

        for idx, w in enumerate(self.workers):
            if w.id != idx:
                raise DataError("worker ids should be contiguous from 0, "
                                "found id %d at position %d" % (w.id, idx))
        for idx, t in enumerate(self.tasks):
            if t.id != idx:
                raise DataError("task ids should be contiguous from 0, "
                                "found id %d at position %d" % (t.id, idx))

        used = [s for w in self.workers for s, _ in w.skills]
        used += [s for t in self.tasks for s in t.required]
        if self.n_skills is None:
            object.__setattr__(self, "n_skills", max(used) + 1 if used else 0)
        n_skills = int(self.n_skills)
        object.__setattr__(self, "n_skills", n_skills)
        if used and max(used) >= n_skills:
            raise DataError("skill id %d is outside the universe of %d skills"
                            % (max(used), n_skills))

        if self.distance_override is not None:
            rows = tuple(tuple(float(d) for d in row)
                         for row in self.distance_override)
            if len(rows) != len(self.workers) or any(
                    len(r) != len(self.tasks) for r in rows):
                raise DataError("distance override should be a %dx%d matrix"
                                % (len(self.workers), len(self.tasks)))
            for i, row in enumerate(rows):
                for j, d in enumerate(row):
                    _finite_nonneg(d, "distance (%d, %d)" % (i, j))
            object.__setattr__(self, "distance_override", rows)

    def __repr__(self):
        return "Instance({} workers, {} tasks, {} skills, gamma={})".format(
            len(self.workers), len(self.tasks), self.n_skills, self.gamma)

    @property
    def n_workers(self):
        return len(self.workers)

    @property
    def n_tasks(self):
        return len(self.tasks)

    @cached_property
    def _coords(self):
        xy = np.array([w.location for w in self.workers], dtype=np.float64)
        return xy.reshape(-1, 2)

    @cached_property
    def _override(self):
        return np.array(self.distance_override, dtype=np.float64).reshape(
            len(self.workers), len(self.tasks))

    def distances_to(self, task):
        """Distances from every worker to a task.

        Args:
            task(int): task id.

        Returns:
            np.ndarray with shape [n_workers].
        """
        _check_task(self, task)
        if self.distance_override is not None:
            return self._override[:, task]
        t = self.tasks[task]
        xy = self._coords
        return np.hypot(xy[:, 0] - t.x, xy[:, 1] - t.y)


@dataclass(frozen=True)
class Contract:
    """A worker hired by a task for a subset of its skills.

    Build these with `make_contract` so that the fees match the instance.
    """
    worker: int
    task: int
    used_skills: tuple
    transport_fee: float
    labor_fee: float

    def __post_init__(self):
        object.__setattr__(self, "used_skills",
                           tuple(sorted(int(s) for s in self.used_skills)))

    @property
    def reward(self):
        return self.transport_fee + self.labor_fee


@dataclass(frozen=True)
class Assignment:
    """Contracts (in selection order) and the set of completed tasks."""
    contracts: tuple = ()
    completed: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "contracts", tuple(self.contracts))
        object.__setattr__(self, "completed", frozenset(self.completed))

    @cached_property
    def by_task(self):
        groups = defaultdict(list)
        for c in self.contracts:
            groups[c.task].append(c)
        return dict(groups)

    def contracts_for(self, task):
        return list(self.by_task.get(task, []))

    def assigned_workers(self):
        return [c.worker for c in self.contracts]


def _check_worker(instance, worker):
    if not (isinstance(worker, (int, np.integer))
            and 0 <= worker < len(instance.workers)):
        raise UsageError("invalid worker id %s" % (worker,))


def _check_task(instance, task):
    if not (isinstance(task, (int, np.integer))
            and 0 <= task < len(instance.tasks)):
        raise UsageError("invalid task id %s" % (task,))


def distance(instance, worker, task):
    """Distance between a worker and a task.

    Uses the instance's distance override when present, the Euclidean
    distance otherwise.
    """
    _check_worker(instance, worker)
    _check_task(instance, task)
    if instance.distance_override is not None:
        return instance.distance_override[worker][task]
    w = instance.workers[worker]
    t = instance.tasks[task]
    return float(np.hypot(w.x - t.x, w.y - t.y))


def worker_reward(instance, worker, task, used):
    """Money paid to `worker` for performing `used` skills of `task`.

    Args:
        instance(Instance): the problem.
        worker(int): worker id.
        task(int): task id.
        used(iterable of int): non-empty set of skills owned by the worker.

    Returns:
        float: gamma * distance + sum of the worker's fees for `used`.
    """
    used = list(used)
    if not used:
        raise UsageError("a worker reward needs at least one used skill")
    transport = instance.gamma * distance(instance, worker, task)
    w = instance.workers[worker]
    return transport + sum(w.fee(s) for s in used)


def make_contract(instance, worker, task, used, dist=None):
    """Builds a contract whose fees are computed from the instance.

    Args:
        dist(float, optional): precomputed worker-task distance.
    """
    used = tuple(sorted(used))
    if not used:
        raise UsageError("a contract needs at least one used skill")
    if dist is None:
        dist = distance(instance, worker, task)
    w = instance.workers[worker]
    labor = sum(w.fee(s) for s in used)
    return Contract(worker=worker, task=task, used_skills=used,
                    transport_fee=instance.gamma*dist, labor_fee=labor)


def task_utility(instance, assignment, task):
    """Budget left over by a completed task, 0 for unfinished tasks."""
    _check_task(instance, task)
    if task not in assignment.completed:
        return 0.0
    paid = sum(c.reward for c in assignment.contracts_for(task))
    return instance.tasks[task].budget - paid


def total_utility(instance, assignment):
    """Sum of the utilities of all tasks."""
    return sum(task_utility(instance, assignment, t)
               for t in sorted(assignment.completed)
               if 0 <= t < len(instance.tasks))


def completed_count(assignment):
    return len(assignment.completed)


# Violation kinds reported by `validate`
DUPLICATE_WORKER = "duplicate worker"
UNCOVERED_SKILL = "uncovered skill"
BUDGET_OVERRUN = "budget overrun"
NOT_COMPLETED = "contract on non-completed task"
SKILL_NOT_OWNED = "skill not owned"
SKILL_NOT_REQUIRED = "skill not required"
EMPTY_CONTRACT = "empty contract"
UNKNOWN_ID = "unknown id"
FEE_MISMATCH = "fee mismatch"


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    task: int = None
    worker: int = None

    def __str__(self):
        return "{}: {}".format(self.kind, self.message)


@dataclass
class ValidationReport:
    """Every constraint an assignment breaks. Empty means valid."""
    violations: list = field(default_factory=list)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __str__(self):
        if not self.violations:
            return "valid"
        return "\n".join(str(v) for v in self.violations)

    @property
    def is_valid(self):
        return not self.violations

    def kinds(self):
        return [v.kind for v in self.violations]

    def add(self, kind, message, task=None, worker=None):
        self.violations.append(Violation(kind, message, task, worker))


def validate(instance, assignment):
    """Checks an assignment against the problem constraints.

    Reports duplicate workers, uncovered skills and budget overruns on
    completed tasks, contracts on tasks that are not completed, skills that
    the worker does not own or the task does not need, and fees that do not
    match the instance.

    Returns:
        ValidationReport: the violations, possibly none.
    """
    report = ValidationReport()
    n_w = len(instance.workers)
    n_t = len(instance.tasks)

    for t in sorted(assignment.completed):
        if not 0 <= t < n_t:
            report.add(UNKNOWN_ID, "completed task %s does not exist" % t,
                       task=t)

    counts = Counter(c.worker for c in assignment.contracts)
    for w, n in sorted(counts.items()):
        if n > 1:
            report.add(DUPLICATE_WORKER,
                       "worker %s appears in %d contracts" % (w, n), worker=w)

    covered = defaultdict(set)
    paid = defaultdict(float)
    for c in assignment.contracts:
        if not (0 <= c.worker < n_w and 0 <= c.task < n_t):
            report.add(UNKNOWN_ID, "contract (worker %s, task %s) refers to "
                       "an unknown id" % (c.worker, c.task),
                       task=c.task, worker=c.worker)
            continue
        if c.task not in assignment.completed:
            report.add(NOT_COMPLETED, "worker %d is hired by task %d which is "
                       "not completed" % (c.worker, c.task),
                       task=c.task, worker=c.worker)
        if not c.used_skills:
            report.add(EMPTY_CONTRACT, "worker %d uses no skill on task %d"
                       % (c.worker, c.task), task=c.task, worker=c.worker)

        w = instance.workers[c.worker]
        t = instance.tasks[c.task]
        owned = [s for s in c.used_skills if s in w.skill_set]
        for s in c.used_skills:
            if s not in w.skill_set:
                report.add(SKILL_NOT_OWNED, "worker %d does not have skill %d"
                           % (c.worker, s), task=c.task, worker=c.worker)
            if s not in t.required:
                report.add(SKILL_NOT_REQUIRED, "task %d does not need skill "
                           "%d" % (c.task, s), task=c.task, worker=c.worker)

        transport = instance.gamma*distance(instance, c.worker, c.task)
        labor = sum(w.fees[s] for s in owned)
        if (abs(transport - c.transport_fee) > EPS
                or abs(labor - c.labor_fee) > EPS):
            report.add(FEE_MISMATCH, "worker %d on task %d: fees (%.9g, %.9g) "
                       "should be (%.9g, %.9g)" % (
                           c.worker, c.task, c.transport_fee, c.labor_fee,
                           transport, labor),
                       task=c.task, worker=c.worker)

        covered[c.task].update(c.used_skills)
        paid[c.task] += c.reward

    for t in sorted(assignment.completed):
        if not 0 <= t < n_t:
            continue
        task = instance.tasks[t]
        for s in task.required:
            if s not in covered[t]:
                report.add(UNCOVERED_SKILL, "task %d: skill %d is not covered"
                           % (t, s), task=t)
        if paid[t] > task.budget + EPS:
            report.add(BUDGET_OVERRUN, "task %d pays %.9g over a budget of "
                       "%.9g" % (t, paid[t], task.budget), task=t)

    if report.violations:
        LOG.debug("assignment has %d violations", len(report))
    return report
