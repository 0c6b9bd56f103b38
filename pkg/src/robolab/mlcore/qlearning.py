"""Tabular Q-learning primitives for the crawler.

The update is the standard one-step rule

    Q(s,a) <- Q(s,a) + alpha * (r + gamma * max_a' Q(s',a') - Q(s,a))

applied to a 4x2 table. Action selection is epsilon-greedy; argmax ties go
to the lower action index (Forward before Backward) so behavior is
reproducible.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .types import (
    N_STATES,
    ActionMode,
    CrawlerAction,
    QParams,
    check_qtable,
    check_state,
    next_state,
)


def q_update(
    q: np.ndarray,
    s: int,
    a: CrawlerAction,
    reward: float,
    s_next: int,
    params: QParams,
) -> np.ndarray:
    """Return a new table with entry (s, a) moved toward the one-step target.

    All other entries are untouched; with alpha == 0 the result equals the
    input (the update is a no-op).
    """
    q = check_qtable(q)
    s = check_state(s)
    s_next = check_state(s_next)
    updated = q.copy()
    target = reward + params.gamma * float(np.max(q[s_next]))
    updated[s, a] = q[s, a] + params.alpha * (target - q[s, a])
    return updated


def select_action(
    q: np.ndarray, s: int, epsilon: float, rng: np.random.Generator
) -> tuple[CrawlerAction, ActionMode]:
    """Epsilon-greedy action for state ``s``.

    With probability epsilon draws a uniform action (Exploratory),
    otherwise takes the argmax (Exploitative). With epsilon == 0 the rng is
    never consumed, so the result is a pure function of the table.
    """
    q = check_qtable(q)
    s = check_state(s)
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon out of range [0, 1]: {epsilon}")
    if epsilon > 0.0 and rng.random() < epsilon:
        return CrawlerAction(int(rng.integers(0, 2))), ActionMode.EXPLORATORY
    return CrawlerAction(int(np.argmax(q[s]))), ActionMode.EXPLOITATIVE


def greedy_policy(q: np.ndarray) -> dict[int, CrawlerAction]:
    """Argmax action per state, ties to Forward."""
    q = check_qtable(q)
    return {s: CrawlerAction(int(np.argmax(q[s]))) for s in range(N_STATES)}


def policy_average_displacement(
    policy: Mapping[int, CrawlerAction], displacement_table: np.ndarray
) -> float:
    """Mean displacement per step over the limit cycle of a fixed policy.

    Runs the deterministic policy from state 0 until a state repeats; the
    average is taken over the cycle only, so the lead-in does not bias it.
    ``displacement_table`` is indexed [state, action] in mm.
    """
    table = np.asarray(displacement_table, dtype=np.float64)
    if table.shape != (N_STATES, len(CrawlerAction)):
        raise ValueError(f"displacement table must be 4x2, got {table.shape}")

    seen_at = {0: 0}
    path_disp: list[float] = []
    s = 0
    while True:
        a = policy[s]
        path_disp.append(float(table[s, a]))
        s = next_state(s, a)
        if s in seen_at:
            cycle = path_disp[seen_at[s]:]
            return sum(cycle) / len(cycle)
        seen_at[s] = len(path_disp)


def enumerate_policies() -> list[dict[int, CrawlerAction]]:
    """All 16 deterministic policies over 4 states x 2 actions."""
    policies = []
    for bits in range(2 ** N_STATES):
        policies.append(
            {s: CrawlerAction((bits >> s) & 1) for s in range(N_STATES)}
        )
    return policies
