"""Test the instance model, cost arithmetic and assignment validation."""
import dataclasses
import math
import os
import unittest

from hypothesis import given, settings, strategies as st

from satatools import model
from satatools import DataError, UsageError
from satatools import GenParams, generate_instance, load_instance, solve_tba
from satatools.model import (Assignment, Contract, Instance, Task, Worker,
                             distance, make_contract, task_utility,
                             total_utility, validate, worker_reward)


FIXTURE = os.path.join(os.path.dirname(__file__), "data", "example1.json")


def _single(gamma=0.0, budget=10.0, fee=2.0):
    w = Worker(0, 0, 0, [(0, fee)])
    t = Task(0, 3, 4, [0], budget)
    return Instance([w], [t], gamma)


class TestTypes(unittest.TestCase):
    def test_worker_rejects_duplicate_skill(self):
        with self.assertRaises(DataError):
            Worker(0, 0, 0, [(1, 2.0), (1, 3.0)])

    def test_worker_rejects_negative_fee(self):
        with self.assertRaises(DataError):
            Worker(0, 0, 0, [(1, -2.0)])

    def test_worker_fee_of_missing_skill(self):
        w = Worker(0, 0, 0, [(1, 2.0)])
        self.assertEqual(w.fee(1), 2.0)
        with self.assertRaises(UsageError):
            w.fee(0)

    def test_worker_skill_set(self):
        w = Worker(0, 0, 0, [(4, 1.0), (1, 2.0)])
        self.assertEqual(w.skill_set, frozenset({1, 4}))
        self.assertEqual(w.location, (0, 0))

    def test_task_requires_skills(self):
        with self.assertRaises(DataError):
            Task(0, 0, 0, [], 10.0)
        with self.assertRaises(DataError):
            Task(0, 0, 0, [1, 1], 10.0)
        with self.assertRaises(DataError):
            Task(0, 0, 0, [1], float("inf"))

    def test_task_sorts_required(self):
        t = Task(0, 0, 0, [3, 0, 2], 9.0)
        self.assertEqual(t.required, (0, 2, 3))
        self.assertAlmostEqual(t.average_budget, 3.0)

    def test_instance_ids_are_contiguous(self):
        w = Worker(1, 0, 0, [(0, 1.0)])
        t = Task(0, 0, 0, [0], 1.0)
        with self.assertRaises(DataError):
            Instance([w], [t], 0.5)

    def test_instance_override_shape(self):
        w = Worker(0, 0, 0, [(0, 1.0)])
        t = Task(0, 0, 0, [0], 1.0)
        with self.assertRaises(DataError):
            Instance([w], [t], 0.5, distance_override=[[1.0, 2.0]])
        with self.assertRaises(DataError):
            Instance([w], [t], 0.5, distance_override=[[-1.0]])

    def test_instance_skill_universe(self):
        w = Worker(0, 0, 0, [(4, 1.0)])
        t = Task(0, 0, 0, [0], 1.0)
        self.assertEqual(Instance([w], [t], 0.5).n_skills, 5)
        with self.assertRaises(DataError):
            Instance([w], [t], 0.5, n_skills=3)


class TestArithmetic(unittest.TestCase):
    def setUp(self):
        self.inst = load_instance(FIXTURE)

    def test_distance(self):
        self.assertAlmostEqual(distance(self.inst, 0, 0), math.sqrt(5),
                               places=12)
        self.assertAlmostEqual(distance(self.inst, 4, 0), math.sqrt(13),
                               places=12)
        self.assertAlmostEqual(distance(self.inst, 2, 2), math.sqrt(2),
                               places=12)
        self.assertAlmostEqual(distance(self.inst, 3, 2), 4.0, places=12)
        self.assertAlmostEqual(distance(self.inst, 4, 2), math.sqrt(10),
                               places=12)

    def test_distance_same_location(self):
        w = Worker(0, 2, 2, [(0, 1.0)])
        t = Task(0, 2, 2, [0], 1.0)
        self.assertEqual(distance(Instance([w], [t], 1.0), 0, 0), 0.0)

    def test_distance_override(self):
        workers = [Worker(i, 0, 0, [(0, 1.0)]) for i in range(3)]
        tasks = [Task(0, 0, 0, [0], 1.0)]
        inst = Instance(workers, tasks, 1.0,
                        distance_override=[[1.0], [2.0], [7.25]])
        self.assertEqual(distance(inst, 2, 0), 7.25)
        self.assertEqual(inst.distances_to(0).tolist(), [1.0, 2.0, 7.25])

    def test_distances_match_scalar(self):
        for t in range(self.inst.n_tasks):
            dists = self.inst.distances_to(t)
            for w in range(self.inst.n_workers):
                self.assertEqual(dists[w], distance(self.inst, w, t))

    def test_invalid_ids(self):
        with self.assertRaises(UsageError):
            distance(self.inst, 5, 0)
        with self.assertRaises(UsageError):
            distance(self.inst, 0, -1)

    def test_worker_reward(self):
        self.assertAlmostEqual(worker_reward(self.inst, 0, 0, [0, 1]),
                               7 + math.sqrt(5)/2, places=12)
        self.assertAlmostEqual(worker_reward(self.inst, 3, 2, [4]), 3.0,
                               places=12)

    def test_worker_reward_no_transport(self):
        inst = dataclasses.replace(self.inst, gamma=0.0)
        self.assertEqual(worker_reward(inst, 4, 2, [0, 1, 2]), 7.0)

    def test_worker_reward_errors(self):
        with self.assertRaises(UsageError):
            worker_reward(self.inst, 0, 0, [2])
        with self.assertRaises(UsageError):
            worker_reward(self.inst, 0, 0, [])

    def test_task_utility(self):
        a = Assignment([make_contract(self.inst, 4, 0, [0, 1])], {0})
        self.assertAlmostEqual(task_utility(self.inst, a, 0),
                               16 - math.sqrt(13)/2, places=9)
        self.assertEqual(task_utility(self.inst, a, 1), 0.0)

    def test_task_utility_multiple_workers(self):
        contracts = [make_contract(self.inst, 2, 2, [3]),
                     make_contract(self.inst, 4, 2, [0, 1, 2]),
                     make_contract(self.inst, 3, 2, [4])]
        a = Assignment(contracts, {2})
        expected = 30 - 10 - (math.sqrt(2) + 4 + math.sqrt(10))/2
        self.assertAlmostEqual(task_utility(self.inst, a, 2), expected,
                               places=9)
        self.assertAlmostEqual(expected, 15.71, places=2)
        self.assertAlmostEqual(total_utility(self.inst, a), expected,
                               places=9)
        self.assertEqual([c.worker for c in a.contracts_for(2)], [2, 4, 3])
        self.assertEqual(a.contracts_for(0), [])
        self.assertEqual(a.assigned_workers(), [2, 4, 3])

    def test_total_utility_empty(self):
        self.assertEqual(total_utility(self.inst, Assignment()), 0.0)


class TestValidate(unittest.TestCase):
    def setUp(self):
        self.inst = load_instance(FIXTURE)
        self.good = Assignment([make_contract(self.inst, 4, 0, [0, 1])], {0})

    def test_valid(self):
        report = validate(self.inst, self.good)
        self.assertTrue(report.is_valid)
        self.assertEqual(len(report), 0)
        self.assertEqual(str(report), "valid")

    def test_uncovered_skill(self):
        a = Assignment([make_contract(self.inst, 4, 0, [0])], {0})
        self.assertEqual(validate(self.inst, a).kinds(),
                         [model.UNCOVERED_SKILL])

    def test_budget_overrun(self):
        inst = _single(gamma=0.0, budget=10.0, fee=10.01)
        a = Assignment([make_contract(inst, 0, 0, [0])], {0})
        self.assertEqual(validate(inst, a).kinds(), [model.BUDGET_OVERRUN])

    def test_budget_tolerance(self):
        inst = _single(gamma=0.0, budget=10.0, fee=10.0 + 1e-10)
        a = Assignment([make_contract(inst, 0, 0, [0])], {0})
        self.assertTrue(validate(inst, a).is_valid)

    def test_duplicate_worker(self):
        a = Assignment([make_contract(self.inst, 4, 0, [0, 1]),
                        make_contract(self.inst, 4, 1, [0, 2])], {0})
        self.assertIn(model.DUPLICATE_WORKER, validate(self.inst, a).kinds())

    def test_contract_on_failed_task(self):
        a = Assignment(self.good.contracts, set())
        self.assertEqual(validate(self.inst, a).kinds(),
                         [model.NOT_COMPLETED])

    def test_skill_not_owned(self):
        c = Contract(0, 0, (0, 2), 0.0, 0.0)
        kinds = validate(self.inst, Assignment([c], set())).kinds()
        self.assertIn(model.SKILL_NOT_OWNED, kinds)
        self.assertIn(model.SKILL_NOT_REQUIRED, kinds)

    def test_fee_mismatch(self):
        c = dataclasses.replace(self.good.contracts[0], labor_fee=1.0)
        a = Assignment([c], {0})
        self.assertEqual(validate(self.inst, a).kinds(), [model.FEE_MISMATCH])

    def test_unknown_ids(self):
        a = Assignment([Contract(9, 0, (0,), 0.0, 1.0)], {0, 7})
        kinds = validate(self.inst, a).kinds()
        self.assertEqual(kinds.count(model.UNKNOWN_ID), 2)


def _mutate(inst, assignment, kind):
    contracts = list(assignment.contracts)
    completed = set(assignment.completed)
    first = contracts[0]
    if kind == model.DUPLICATE_WORKER:
        contracts.append(first)
    elif kind == model.UNCOVERED_SKILL:
        contracts.pop(0)
    elif kind == model.NOT_COMPLETED:
        completed.discard(first.task)
    elif kind == model.BUDGET_OVERRUN:
        budget = inst.tasks[first.task].budget
        contracts[0] = dataclasses.replace(
            first, labor_fee=first.labor_fee + budget + 1.0)
    elif kind == model.SKILL_NOT_OWNED:
        missing = [s for s in range(inst.n_skills)
                   if s not in inst.workers[first.worker].fees]
        contracts[0] = dataclasses.replace(
            first, used_skills=first.used_skills + (missing[0],))
    return Assignment(contracts, completed)


class TestValidateMutations(unittest.TestCase):
    """Every mutation of a valid assignment is reported."""

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1),
           kind=st.sampled_from([model.DUPLICATE_WORKER,
                                 model.UNCOVERED_SKILL, model.NOT_COMPLETED,
                                 model.BUDGET_OVERRUN,
                                 model.SKILL_NOT_OWNED]))
    def test_mutation_is_flagged(self, seed, kind):
        # Generous budgets and few skills per worker: tasks complete and
        # every worker lacks some skill.
        params = GenParams(n_tasks=4, n_workers=40, n_skills=6,
                           skills_per_worker=(1, 3), skills_per_task=(1, 4),
                           mean_budget=500.0, area_side=10.0, seed=seed)
        inst = generate_instance(params)
        assignment = solve_tba(inst)
        self.assertTrue(validate(inst, assignment).is_valid)
        self.assertGreater(len(assignment.contracts), 0)

        report = validate(inst, _mutate(inst, assignment, kind))
        self.assertFalse(report.is_valid)
        self.assertIn(kind, report.kinds())

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_utilities_nonnegative(self, seed):
        inst = generate_instance(GenParams(n_tasks=10, n_workers=60,
                                           n_skills=8, seed=seed))
        assignment = solve_tba(inst)
        utilities = [task_utility(inst, assignment, t)
                     for t in range(inst.n_tasks)]
        for u in utilities:
            self.assertGreaterEqual(u, -model.EPS)
        self.assertAlmostEqual(sum(utilities),
                               total_utility(inst, assignment), places=9)


if __name__ == "__main__":
    unittest.main()
