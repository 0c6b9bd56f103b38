import numpy as np
import pytest

from robolab.devices import REFERENCE_DISPLACEMENTS
from robolab.mlcore import (
    ActionMode,
    CrawlerAction,
    QParams,
    enumerate_policies,
    greedy_policy,
    next_state,
    policy_average_displacement,
    q_update,
    select_action,
    zero_qtable,
)

from oracles import cycle_average

REFERENCE_TABLE = np.array(REFERENCE_DISPLACEMENTS)
FORWARD_DISP = [row[0] for row in REFERENCE_DISPLACEMENTS]
F, B = CrawlerAction.FORWARD, CrawlerAction.BACKWARD


class TestQUpdate:
    def test_zero_bootstrap(self):
        q = q_update(zero_qtable(), 1, F, reward=5.0, s_next=2,
                     params=QParams(epsilon=0.0, gamma=0.0, alpha=0.5))
        assert q[1, F] == 2.5
        q[1, F] = 0.0
        assert np.all(q == 0.0)

    def test_bootstrap_from_next_state(self):
        q = zero_qtable()
        q[2] = [10.0, 3.0]
        updated = q_update(q, 0, F, reward=-1.0, s_next=2,
                           params=QParams(epsilon=0.0, gamma=1.0, alpha=0.5))
        assert updated[0, F] == 4.5

    def test_full_rate_overwrites_with_reward(self):
        q = zero_qtable()
        q[3, B] = 123.0
        params = QParams(epsilon=0.0, gamma=0.0, alpha=1.0)
        updated = q_update(q, 3, B, reward=-7.5, s_next=2, params=params)
        assert updated[3, B] == -7.5
        again = q_update(updated, 3, B, reward=-7.5, s_next=2, params=params)
        assert again[3, B] == -7.5  # fixed point

    def test_touches_exactly_one_entry(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            q = rng.normal(0, 10, size=(4, 2))
            s = int(rng.integers(0, 4))
            a = CrawlerAction(int(rng.integers(0, 2)))
            updated = q_update(q, s, a, float(rng.normal()), int(rng.integers(0, 4)),
                               QParams(epsilon=0.5, gamma=1.0, alpha=0.5))
            mask = np.ones((4, 2), dtype=bool)
            mask[s, a] = False
            assert np.array_equal(updated[mask], q[mask])

    def test_zero_rate_is_identity(self):
        rng = np.random.default_rng(6)
        q = rng.normal(0, 10, size=(4, 2))
        updated = q_update(q, 2, B, 99.0, 1,
                           QParams(epsilon=0.0, gamma=1.0, alpha=0.0))
        assert np.array_equal(updated, q)

    def test_input_not_mutated(self):
        q = zero_qtable()
        q_update(q, 0, F, 1.0, 1, QParams(epsilon=0.0, gamma=0.0, alpha=0.5))
        assert np.all(q == 0.0)


class TestSelectAction:
    def test_pure_argmax(self):
        q = zero_qtable()
        q[0] = [1.0, 0.0]
        action, mode = select_action(q, 0, 0.0, np.random.default_rng(0))
        assert (action, mode) == (F, ActionMode.EXPLOITATIVE)

    def test_argmax_tie_prefers_forward(self):
        action, mode = select_action(zero_qtable(), 2, 0.0,
                                     np.random.default_rng(0))
        assert (action, mode) == (F, ActionMode.EXPLOITATIVE)

    def test_epsilon_zero_ignores_the_rng(self):
        q = zero_qtable()
        q[1] = [0.0, 2.0]
        rng = np.random.default_rng(11)
        before = rng.bit_generator.state
        for _ in range(10):
            action, mode = select_action(q, 1, 0.0, rng)
            assert (action, mode) == (B, ActionMode.EXPLOITATIVE)
        assert rng.bit_generator.state == before

    def test_full_exploration_split(self):
        rng = np.random.default_rng(2024)
        q = zero_qtable()
        q[0] = [50.0, -50.0]  # argmax would always say Forward
        counts = {F: 0, B: 0}
        for _ in range(10_000):
            action, mode = select_action(q, 0, 1.0, rng)
            assert mode == ActionMode.EXPLORATORY
            counts[action] += 1
        assert counts[F] + counts[B] == 10_000
        assert abs(counts[F] / 10_000 - 0.5) <= 0.03

    def test_deterministic_given_seed(self):
        q = zero_qtable()
        seq_a = [select_action(q, 0, 0.7, np.random.default_rng(3))
                 for _ in range(1)]
        seq_b = [select_action(q, 0, 0.7, np.random.default_rng(3))
                 for _ in range(1)]
        assert seq_a == seq_b

    def test_epsilon_validation(self):
        with pytest.raises(ValueError):
            select_action(zero_qtable(), 0, 1.5, np.random.default_rng(0))


class TestPolicyAverageDisplacement:
    def test_all_forward_gait(self):
        policy = {s: F for s in range(4)}
        assert policy_average_displacement(policy, REFERENCE_TABLE) == 1.0
        assert cycle_average((0, 0, 0, 0), FORWARD_DISP) == 1.0

    def test_oscillating_policy_goes_nowhere(self):
        policy = {0: F, 1: B, 2: F, 3: F}
        assert policy_average_displacement(policy, REFERENCE_TABLE) == 0.0

    def test_negated_table_negates_the_average(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            policy = {s: CrawlerAction(int(rng.integers(0, 2))) for s in range(4)}
            avg = policy_average_displacement(policy, REFERENCE_TABLE)
            neg = policy_average_displacement(policy, -REFERENCE_TABLE)
            assert neg == -avg

    def test_matches_independent_cycle_oracle(self):
        for bits in range(16):
            policy = {s: CrawlerAction((bits >> s) & 1) for s in range(4)}
            expected = cycle_average(tuple((bits >> s) & 1 for s in range(4)),
                                     FORWARD_DISP)
            assert policy_average_displacement(policy, REFERENCE_TABLE) == expected

    def test_all_forward_is_the_unique_optimum(self):
        averages = {
            tuple(int(p[s]) for s in range(4)):
                policy_average_displacement(p, REFERENCE_TABLE)
            for p in enumerate_policies()
        }
        assert len(averages) == 16
        assert max(averages.values()) == 1.0
        winners = [pol for pol, avg in averages.items() if avg == 1.0]
        assert winners == [(0, 0, 0, 0)]
        # any policy avoiding the costly s1 -> s2 edge can never profit
        for pol, avg in averages.items():
            if pol[1] != int(F):
                assert avg <= 0.0


class TestGreedyPolicy:
    def test_argmax_with_forward_ties(self):
        q = zero_qtable()
        q[1] = [-1.0, 0.0]
        q[2] = [5.0, 1.0]
        policy = greedy_policy(q)
        assert policy == {0: F, 1: B, 2: F, 3: F}


def test_next_state_cycles():
    assert [next_state(s, F) for s in range(4)] == [1, 2, 3, 0]
    assert [next_state(s, B) for s in range(4)] == [3, 0, 1, 2]
