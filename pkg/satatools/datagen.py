"""Synthetic instance generator.

Locations are uniform over a square. Skill prices and task budgets are
Gaussian, truncated from below by resampling. Workers and tasks draw their
number of skills uniformly from a range and their skills uniformly without
replacement from the universe.
"""
import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .config import parse_section
from .errors import UsageError
from .model import Instance, Task, Worker
from .utils import check_seed, get_logger


__all__ = ["GenParams", "SWEEP_VALUES", "SWEEP_FACTORS", "generate_instance",
           "load_params"]


LOG = get_logger(__name__)

# Gaussian draws are resampled until they exceed this value.
MIN_AMOUNT = 0.01

# One-factor-at-a-time settings of the synthetic grid, defaults marked by
# GenParams' own defaults.
SWEEP_VALUES = {
    "n_tasks": [100, 300, 500, 700, 900],
    "n_workers": [1000, 3000, 5000, 7000, 9000],
    "gamma": [0.1, 0.3, 0.5, 0.7, 0.9],
    "mean_budget": [60.0, 80.0, 100.0, 120.0, 140.0],
    "mean_price": [10.0, 15.0, 20.0, 25.0, 30.0],
    "n_skills": [10, 20, 30, 40, 50],
}

SWEEP_FACTORS = tuple(SWEEP_VALUES.keys())


@dataclass(frozen=True)
class GenParams:
    """Parameters of the synthetic generator.

    Args:
        n_tasks(int): number of tasks.
        n_workers(int): number of workers.
        gamma(float): transport fee per unit of distance.
        mean_budget(float): mean task budget.
        mean_price(float): mean price of one skill.
        n_skills(int): size of the skill universe.
        skills_per_worker((int, int)): inclusive range of skills per worker.
        skills_per_task((int, int)): inclusive range of skills per task.
        area_side(float): side of the square holding all locations.
        budget_sd(float or None): budget standard deviation, mean_budget/5
            when None.
        price_sd(float or None): price standard deviation, mean_price/5 when
            None.
        seed(int): seed of the random generator.
    """
    n_tasks: int = 500
    n_workers: int = 5000
    gamma: float = 0.5
    mean_budget: float = 100.0
    mean_price: float = 20.0
    n_skills: int = 30
    skills_per_worker: tuple = (1, 5)
    skills_per_task: tuple = (1, 5)
    area_side: float = 100.0
    budget_sd: float = None
    price_sd: float = None
    seed: int = 0

    def __post_init__(self):
        try:
            for name in ["n_tasks", "n_workers", "n_skills"]:
                object.__setattr__(self, name, int(getattr(self, name)))
            for name in ["gamma", "mean_budget", "mean_price", "area_side"]:
                object.__setattr__(self, name, float(getattr(self, name)))
        except (TypeError, ValueError, OverflowError) as e:
            raise UsageError("invalid generator parameters: %s" % e)
        object.__setattr__(self, "seed", check_seed(self.seed))
        object.__setattr__(self, "skills_per_worker",
                           tuple(int(v) for v in self.skills_per_worker))
        object.__setattr__(self, "skills_per_task",
                           tuple(int(v) for v in self.skills_per_task))

        for name in ["n_tasks", "n_workers", "n_skills"]:
            if int(getattr(self, name)) < 1:
                raise UsageError("%s should be >= 1" % name)
        for name in ["skills_per_worker", "skills_per_task"]:
            rng = getattr(self, name)
            if len(rng) != 2 or not 1 <= rng[0] <= rng[1] <= self.n_skills:
                raise UsageError(
                    "%s should be a range [lo, hi] with 1 <= lo <= hi <= "
                    "n_skills (%d), got %s" % (name, self.n_skills, list(rng)))
        for name in ["gamma", "area_side"]:
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise UsageError("%s should be finite and >= 0" % name)
        for name in ["mean_budget", "mean_price"]:
            v = getattr(self, name)
            if not math.isfinite(v) or v <= MIN_AMOUNT:
                raise UsageError("%s should be larger than %g"
                                 % (name, MIN_AMOUNT))
        for name in ["budget_sd", "price_sd"]:
            v = getattr(self, name)
            if v is not None and (not math.isfinite(v) or v < 0):
                raise UsageError("%s should be finite and >= 0" % name)

    @property
    def budget_std(self):
        if self.budget_sd is None:
            return self.mean_budget / 5
        return self.budget_sd

    @property
    def price_std(self):
        if self.price_sd is None:
            return self.mean_price / 5
        return self.price_sd

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["skills_per_worker"] = list(self.skills_per_worker)
        d["skills_per_task"] = list(self.skills_per_task)
        return d

    @staticmethod
    def from_dict(d):
        names = {f.name for f in dataclasses.fields(GenParams)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise UsageError("unknown generator parameters %s" % unknown)
        try:
            return GenParams(**d)
        except TypeError as e:
            raise UsageError("invalid generator parameters: %s" % e)


def load_params(path=None):
    """Reads GenParams from a .yml or .json file over the shipped defaults."""
    return GenParams.from_dict(parse_section(path, "generator"))


def _truncated_normal(rng, mean, sd, size):
    values = rng.normal(mean, sd, size=size)
    low = values <= MIN_AMOUNT
    while low.any():
        values[low] = rng.normal(mean, sd, size=int(low.sum()))
        low = values <= MIN_AMOUNT
    return values


def _draw_skills(rng, n_skills, counts):
    return [sorted(int(s) for s in rng.choice(n_skills, size=int(k),
                                               replace=False))
            for k in counts]


def generate_instance(params):
    """Draws a random instance.

    Args:
        params(GenParams): generator settings, including the seed.

    Returns:
        Instance, identical for identical params.
    """
    if not isinstance(params, GenParams):
        raise UsageError("expected GenParams, got %s"
                         % params.__class__.__name__)
    rng = np.random.default_rng(params.seed)
    side = params.area_side

    w_xy = rng.uniform(0, side, size=(params.n_workers, 2))
    lo, hi = params.skills_per_worker
    w_counts = rng.integers(lo, hi + 1, size=params.n_workers)
    w_skills = _draw_skills(rng, params.n_skills, w_counts)
    fees = _truncated_normal(rng, params.mean_price, params.price_std,
                             int(w_counts.sum())).tolist()

    workers = []
    offset = 0
    for i in range(params.n_workers):
        k = len(w_skills[i])
        workers.append(Worker(
            id=i, x=float(w_xy[i, 0]), y=float(w_xy[i, 1]),
            skills=tuple(zip(w_skills[i], fees[offset:offset + k]))))
        offset += k

    t_xy = rng.uniform(0, side, size=(params.n_tasks, 2))
    lo, hi = params.skills_per_task
    t_counts = rng.integers(lo, hi + 1, size=params.n_tasks)
    t_skills = _draw_skills(rng, params.n_skills, t_counts)
    budgets = _truncated_normal(rng, params.mean_budget, params.budget_std,
                                params.n_tasks).tolist()

    tasks = [Task(id=j, x=float(t_xy[j, 0]), y=float(t_xy[j, 1]),
                  required=tuple(t_skills[j]), budget=budgets[j])
             for j in range(params.n_tasks)]

    LOG.debug("generated %d workers and %d tasks (seed %d)",
              params.n_workers, params.n_tasks, params.seed)
    return Instance(workers=workers, tasks=tasks, gamma=params.gamma,
                    n_skills=params.n_skills)
