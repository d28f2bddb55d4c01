"""Greedy set-cover heuristics: the total-budget (TBA) and average-budget
(ABA) task orderings.

Both heuristics visit the tasks in a fixed order and cover each one with
the pool of still unassigned workers, repeatedly hiring the worker whose
reward per newly covered skill is the lowest. A task that cannot be covered
within its budget releases all the workers it tentatively hired.
"""
from collections import defaultdict
from dataclasses import dataclass

from .model import EPS, Assignment, distance, make_contract
from .utils import get_logger


__all__ = ["Candidate", "best_candidate", "best_subset_for_worker", "greedy_cover_task",
           "skill_owners", "tba_order", "aba_order", "solve_in_order",
           "solve_tba", "solve_aba"]


LOG = get_logger(__name__)


@dataclass(frozen=True)
class Candidate:
    """The cheapest way (per covered skill) to hire one worker for a task.

    Attributes:
        worker(int): worker id.
        subset(tuple of int): sorted skills the worker would use.
        ratio(float): reward / len(subset).
        reward(float): transport fee + fees of `subset`.
    """
    worker: int
    subset: tuple
    ratio: float
    reward: float

    def tie_key(self):
        """Order among candidates whose ratios agree within EPS."""
        return (self.worker, len(self.subset), self.subset)


def best_candidate(candidates):
    """The candidate with the lowest ratio.

    Ratios within EPS of the lowest one count as equal, the tie goes to the
    lower worker id, then the smaller subset.

    Returns:
        Candidate or None if `candidates` is empty.
    """
    if not candidates:
        return None
    lowest = min(c.ratio for c in candidates)
    return min((c for c in candidates if c.ratio <= lowest + EPS),
               key=Candidate.tie_key)


def best_subset_for_worker(instance, worker, task, remaining, dist=None):
    """Finds the worker's skill subset with the lowest reward per skill.

    Only skills in `remaining` are considered. For a fixed size k the k
    cheapest relevant skills minimize the reward, so it is enough to
    evaluate the prefixes of the relevant skills sorted by (fee, skill id).
    The shortest prefix whose ratio is within EPS of the lowest one wins.

    Args:
        instance(Instance): the problem.
        worker(int): worker id.
        task(int): task id.
        remaining(iterable of int): skills of the task not covered yet.
        dist(float, optional): precomputed worker-task distance.

    Returns:
        Candidate or None if the worker owns none of the remaining skills.
    """
    fees = instance.workers[worker].fees
    relevant = sorted((fees[s], s) for s in remaining if s in fees)
    if not relevant:
        return None

    if dist is None:
        dist = distance(instance, worker, task)
    total = instance.gamma*dist

    totals = []
    for fee, _ in relevant:
        total += fee
        totals.append(total)
    ratios = [x / k for k, x in enumerate(totals, 1)]
    lowest = min(ratios)
    best_k = next(k for k, r in enumerate(ratios, 1) if r <= lowest + EPS)
    best_ratio, best_total = ratios[best_k - 1], totals[best_k - 1]

    subset = tuple(sorted(s for _, s in relevant[:best_k]))
    return Candidate(worker=worker, subset=subset, ratio=best_ratio,
                     reward=best_total)


def skill_owners(instance):
    """Maps each skill id to the set of workers that have it."""
    owners = defaultdict(set)
    for w in instance.workers:
        for s, _ in w.skills:
            owners[s].add(w.id)
    return dict(owners)


def greedy_cover_task(instance, task, pool, counter=None, owners=None):
    """Hires workers from `pool` until the task's skills are all covered.

    At each step the budget-feasible candidate with the lowest ratio is
    hired and removed from the pool. Candidates that would push the task
    over budget are skipped. If no candidate covers a remaining skill, every
    worker hired for this task goes back to the pool.

    Args:
        instance(Instance): the problem.
        task(int): task id.
        pool(set of int): unassigned workers, updated in place.
        counter(MemoryCounter, optional): tracks the memory of the search.
        owners(dict, optional): precomputed `skill_owners(instance)`.

    Returns:
        list of Contract in hiring order, or None if the task failed.
    """
    if owners is None:
        owners = skill_owners(instance)
    t = instance.tasks[task]
    remaining = set(t.required)
    dists = instance.distances_to(task).tolist()
    limit = t.budget + EPS

    if counter is not None:
        counter.alloc(len(remaining) + len(dists))

    contracts = []
    spent = 0.0
    while remaining:
        reachable = set()
        for s in remaining:
            reachable.update(owners.get(s, ()))
        reachable &= pool
        if counter is not None:
            counter.alloc(len(reachable))

        affordable = []
        for w in reachable:
            cand = best_subset_for_worker(instance, w, task, remaining,
                                          dist=dists[w])
            if cand is not None and spent + cand.reward <= limit:
                affordable.append(cand)
        best = best_candidate(affordable)

        if counter is not None:
            counter.free(len(reachable))

        if best is None:
            LOG.debug("task %d: no affordable worker covers %s, rolling back "
                      "%d contracts", task, sorted(remaining), len(contracts))
            pool.update(c.worker for c in contracts)
            if counter is not None:
                counter.free(sum(5 + len(c.used_skills) for c in contracts))
                counter.free(len(t.required) + len(dists))
            return None

        contract = make_contract(instance, best.worker, task, best.subset,
                                 dist=dists[best.worker])
        pool.discard(best.worker)
        contracts.append(contract)
        spent += contract.reward
        remaining.difference_update(best.subset)
        if counter is not None:
            counter.alloc(5 + len(contract.used_skills))
        LOG.debug("task %d: hired worker %d for %s (ratio %.4f)", task,
                  best.worker, best.subset, best.ratio)

    if counter is not None:
        counter.free(len(t.required) + len(dists))
    return contracts


def tba_order(instance):
    """Tasks by descending total budget, ties by task id."""
    return sorted(range(len(instance.tasks)),
                  key=lambda t: (-instance.tasks[t].budget, t))


def aba_order(instance):
    """Tasks by descending budget per required skill, ties by task id."""
    return sorted(range(len(instance.tasks)),
                  key=lambda t: (-instance.tasks[t].average_budget, t))


def solve_in_order(instance, order, counter=None):
    """Runs the greedy cover on each task of `order` with a shared pool.

    Args:
        instance(Instance): the problem.
        order(list of int): task ids in processing order.
        counter(MemoryCounter, optional): tracks the solver's memory.

    Returns:
        Assignment
    """
    pool = set(range(len(instance.workers)))
    owners = skill_owners(instance)
    if counter is not None:
        counter.alloc(len(pool) + len(order)
                      + sum(len(v) for v in owners.values()))

    contracts = []
    completed = set()
    for t in order:
        got = greedy_cover_task(instance, t, pool, counter=counter,
                                owners=owners)
        if got is None:
            continue
        contracts.extend(got)
        completed.add(t)

    LOG.debug("completed %d of %d tasks, %d workers left", len(completed),
              len(order), len(pool))
    return Assignment(contracts=contracts, completed=completed)


def solve_tba(instance, counter=None):
    """Total-budget heuristic: largest budgets are served first."""
    return solve_in_order(instance, tba_order(instance), counter=counter)


def solve_aba(instance, counter=None):
    """Average-budget heuristic: largest budget per skill is served first."""
    return solve_in_order(instance, aba_order(instance), counter=counter)
