"""Test the greedy cover heuristics."""
import dataclasses
import itertools
import math
import os
import unittest

import numpy as np

from satatools import (EPS, Candidate, GenParams, Instance, MemoryCounter,
                       Task, Worker, aba_order, best_candidate,
                       best_subset_for_worker, generate_instance,
                       greedy_cover_task, load_instance, solve_aba,
                       solve_in_order, solve_tba, tba_order, total_utility,
                       validate, worker_reward)


FIXTURE = os.path.join(os.path.dirname(__file__), "data", "example1.json")


def _contracts(assignment):
    return [(c.worker, c.task, c.used_skills) for c in assignment.contracts]


def _exhaustive(instance, worker, task, remaining):
    """(ratio, size, subset) of the best subset, ratios within EPS tie."""
    fees = instance.workers[worker].fees
    relevant = sorted(s for s in remaining if s in fees)
    options = []
    for k in range(1, len(relevant) + 1):
        for subset in itertools.combinations(relevant, k):
            ratio = worker_reward(instance, worker, task, subset) / k
            options.append((ratio, k, subset))
    if not options:
        return None
    lowest = min(o[0] for o in options)
    return min((o for o in options if o[0] <= lowest + EPS),
               key=lambda o: (o[1], o[2]))


class TestBestSubset(unittest.TestCase):
    def setUp(self):
        self.inst = load_instance(FIXTURE)

    def test_ratio_prefix(self):
        cand = best_subset_for_worker(self.inst, 0, 0, {0, 1})
        self.assertEqual(cand.subset, (0, 1))
        self.assertAlmostEqual(cand.ratio, (7 + math.sqrt(5)/2)/2, places=12)
        self.assertAlmostEqual(cand.reward, 7 + math.sqrt(5)/2, places=12)

    def test_transport_is_amortized(self):
        cand = best_subset_for_worker(self.inst, 4, 2, set(range(5)))
        self.assertEqual(cand.subset, (0, 1))
        self.assertAlmostEqual(cand.ratio, (4 + math.sqrt(10)/2)/2,
                               places=12)

    def test_no_transport(self):
        inst = dataclasses.replace(self.inst, gamma=0.0)
        cand = best_subset_for_worker(inst, 4, 2, set(range(5)))
        # {0, 1} ties {0} at 2 per skill, the shorter prefix is kept.
        self.assertEqual(cand.subset, (0,))
        self.assertEqual(cand.ratio, 2.0)
        self.assertGreater(worker_reward(inst, 4, 2, [0, 1, 2])/3, cand.ratio)

    def test_no_relevant_skill(self):
        self.assertIsNone(best_subset_for_worker(self.inst, 2, 0, {0, 1}))

    def _check_exhaustive(self, seed, draw_fees, draw_amount):
        rng = np.random.default_rng(seed)
        for trial in range(1000):
            n_skills = int(rng.integers(1, 11))
            n_owned = int(rng.integers(1, n_skills + 1))
            owned = rng.choice(n_skills, size=n_owned, replace=False)
            fees = draw_fees(rng, n_owned)
            w = Worker(0, 0, 0, list(zip(owned.tolist(), fees)))
            required = sorted(set(rng.choice(
                n_skills, size=int(rng.integers(1, n_skills + 1)),
                replace=False).tolist()))
            t = Task(0, 0, 0, required, 100.0)
            inst = Instance([w], [t], draw_amount(rng), n_skills=n_skills,
                            distance_override=[[draw_amount(rng)]])
            remaining = set(s for s in required if rng.random() < 0.8)

            cand = best_subset_for_worker(inst, 0, 0, remaining)
            expected = _exhaustive(inst, 0, 0, remaining)
            if expected is None:
                self.assertIsNone(cand)
                continue
            self.assertAlmostEqual(cand.ratio, expected[0], delta=EPS)
            self.assertEqual(cand.subset, expected[2], "trial %d" % trial)

    def test_matches_exhaustive_enumeration(self):
        self._check_exhaustive(
            1234, lambda rng, n: rng.integers(0, 6, size=n).tolist(),
            lambda rng: float(rng.integers(0, 5)))

    def test_matches_exhaustive_enumeration_decimal_fees(self):
        # Sums of tenths are inexact, ties only hold up to EPS.
        self._check_exhaustive(
            99, lambda rng, n: [round(float(x), 1)
                                for x in rng.uniform(0, 1, size=n)],
            lambda rng: round(float(rng.uniform(0, 2)), 1))

    def test_near_tie_keeps_shortest_prefix(self):
        w = Worker(0, 0, 0, [(0, 0.7), (1, 0.6), (2, 0.7)])
        t = Task(0, 0, 0, [0, 1, 2], 10.0)
        inst = Instance([w], [t], 1.0, distance_override=[[0.1]])
        cand = best_subset_for_worker(inst, 0, 0, {0, 1, 2})
        self.assertEqual(cand.subset, (1,))
        self.assertAlmostEqual(cand.ratio, 0.7, places=12)


class TestBestCandidate(unittest.TestCase):
    def test_empty(self):
        self.assertIsNone(best_candidate([]))

    def test_lowest_ratio(self):
        a = Candidate(worker=0, subset=(0,), ratio=2.0, reward=2.0)
        b = Candidate(worker=1, subset=(0,), ratio=1.0, reward=1.0)
        self.assertIs(best_candidate([a, b]), b)

    def test_near_tie_goes_to_lower_worker(self):
        a = Candidate(worker=3, subset=(0,), ratio=0.7, reward=0.7)
        b = Candidate(worker=1, subset=(0, 1), ratio=0.7 + 1e-12,
                      reward=1.4)
        c = Candidate(worker=1, subset=(0,), ratio=0.7, reward=0.7)
        self.assertIs(best_candidate([a, b]), b)
        self.assertIs(best_candidate([a, b, c]), c)

    def test_cover_ignores_float_noise(self):
        # 0.30000000000000004 against 0.3, the lower worker id wins
        workers = [Worker(0, 0, 0, [(0, 0.1 + 0.2)]),
                   Worker(1, 0, 0, [(0, 0.3)])]
        t = Task(0, 0, 0, [0], 10.0)
        pool = {0, 1}
        contracts = greedy_cover_task(Instance(workers, [t], 0.0), 0, pool)
        self.assertEqual([(c.worker, c.used_skills) for c in contracts],
                         [(0, (0,))])
        self.assertEqual(pool, {1})


class TestGreedyCover(unittest.TestCase):
    def setUp(self):
        self.inst = load_instance(FIXTURE)

    def test_fixture_largest_task(self):
        pool = set(range(5))
        contracts = greedy_cover_task(self.inst, 2, pool)
        self.assertEqual([(c.worker, c.used_skills) for c in contracts],
                         [(2, (3,)), (4, (0, 1)), (3, (4,)), (1, (2,))])
        self.assertEqual(pool, {0})

    def test_rollback_restores_pool(self):
        pool = {0}
        self.assertIsNone(greedy_cover_task(self.inst, 1, pool))
        self.assertEqual(pool, {0})

    def test_untouchable_task(self):
        w = Worker(0, 0, 0, [(0, 1.0)])
        t = Task(0, 0, 0, [1], 10.0)
        inst = Instance([w], [t], 0.5)
        pool = {0}
        self.assertIsNone(greedy_cover_task(inst, 0, pool))
        self.assertEqual(pool, {0})

    def test_zero_budget(self):
        w = Worker(0, 0, 0, [(0, 1.0)])
        t = Task(0, 0, 0, [0], 0.0)
        pool = {0}
        self.assertIsNone(greedy_cover_task(Instance([w], [t], 0.5), 0, pool))
        self.assertEqual(pool, {0})

    def test_over_budget_rolls_back(self):
        workers = [Worker(0, 0, 0, [(0, 1.0)]), Worker(1, 0, 0, [(1, 1.0)])]
        t = Task(0, 0, 0, [0, 1], 1.5)
        pool = {0, 1}
        self.assertIsNone(greedy_cover_task(Instance(workers, [t], 0.5), 0,
                                            pool))
        self.assertEqual(pool, {0, 1})

    def test_memory_counter_returns_to_zero_on_rollback(self):
        counter = MemoryCounter()
        greedy_cover_task(self.inst, 1, {0}, counter=counter)
        self.assertEqual(counter.current, 0)
        self.assertGreater(counter.peak, 0)


class TestHeuristics(unittest.TestCase):
    def setUp(self):
        self.inst = load_instance(FIXTURE)

    def test_orders(self):
        self.assertEqual(tba_order(self.inst), [2, 1, 0])
        self.assertEqual(aba_order(self.inst), [0, 1, 2])

    def test_order_ties_by_id(self):
        workers = [Worker(0, 0, 0, [(0, 1.0)])]
        tasks = [Task(i, 0, 0, list(range(i + 1)), 10.0*(i + 1))
                 for i in range(3)]
        inst = Instance(workers, tasks, 0.5)
        self.assertEqual(aba_order(inst), [0, 1, 2])
        self.assertEqual(tba_order(inst), [2, 1, 0])

    def test_tba_trace(self):
        a = solve_tba(self.inst)
        self.assertEqual(_contracts(a), [
            (2, 2, (3,)), (4, 2, (0, 1)), (3, 2, (4,)), (1, 2, (2,)),
            (0, 0, (0, 1))])
        self.assertEqual(a.completed, {0, 2})
        expected = 29 - 2.5*math.sqrt(2) - 0.5*math.sqrt(10) \
            - 0.5*math.sqrt(5)
        self.assertAlmostEqual(total_utility(self.inst, a), expected,
                               delta=1e-9)

    def test_aba_trace(self):
        a = solve_aba(self.inst)
        self.assertEqual(_contracts(a), [
            (4, 0, (0, 1)), (2, 1, (3,)), (1, 1, (2,)), (0, 1, (0,))])
        self.assertEqual(a.completed, {0, 1})
        expected = 27 - 0.5*(math.sqrt(13) + math.sqrt(73))
        self.assertAlmostEqual(total_utility(self.inst, a), expected,
                               delta=1e-9)

    def test_contract_rewards(self):
        a = solve_aba(self.inst)
        for c in a.contracts:
            self.assertAlmostEqual(
                c.reward, worker_reward(self.inst, c.worker, c.task,
                                        c.used_skills), delta=1e-9)

    def test_no_workers(self):
        inst = Instance([], [Task(0, 0, 0, [0], 10.0)], 0.5)
        for solve in [solve_tba, solve_aba]:
            a = solve(inst)
            self.assertEqual(len(a.contracts), 0)
            self.assertEqual(total_utility(inst, a), 0.0)

    def test_generated_instances(self):
        for seed in range(10):
            inst = generate_instance(GenParams(
                n_tasks=30, n_workers=200, n_skills=10, seed=seed))
            for solve in [solve_tba, solve_aba]:
                a = solve(inst)
                self.assertTrue(validate(inst, a).is_valid)
                # Pool conservation
                workers = a.assigned_workers()
                self.assertEqual(len(workers), len(set(workers)))
                # Determinism
                self.assertEqual(a, solve(inst))

    def test_memory_counter(self):
        inst = generate_instance(GenParams(n_tasks=20, n_workers=100,
                                           n_skills=10, seed=3))
        small = MemoryCounter()
        solve_tba(inst, counter=small)
        big = MemoryCounter()
        solve_in_order(generate_instance(GenParams(
            n_tasks=20, n_workers=400, n_skills=10, seed=3)),
            list(range(20)), counter=big)
        self.assertGreater(small.peak, 0)
        self.assertGreater(big.peak, small.peak)


if __name__ == "__main__":
    unittest.main()
