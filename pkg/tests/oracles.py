"""Independent reference implementations used to check the library.

Everything here is deliberately written from scratch against the stated
contracts (brute-force sorts, gradient descent, finite differences,
exhaustive enumeration) and never calls the code paths it verifies.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

COLOR_RANGE = 255.0
LENGTH_RANGE = 250.0


def knn_brute_force(dataset, query, k):
    """Sort every sample by (squared scaled distance, id); vote over the top k.

    dataset: sequence of (id, color, length, label) tuples.
    Returns (label, [neighbor ids nearest-first]).
    """
    ranked = sorted(
        ((((query[0] - c) / COLOR_RANGE) ** 2 + ((query[1] - l) / LENGTH_RANGE) ** 2,
          sid, label)
         for sid, c, l, label in dataset),
        key=lambda t: (t[0], t[1]),
    )
    top = ranked[:k]
    counts = Counter(label for _, _, label in top)
    best = counts.most_common()
    if len(best) > 1 and best[0][1] == best[1][1]:
        winner = top[0][2]  # tied vote: nearest sample decides
    else:
        winner = best[0][0]
    return winner, [sid for _, sid, _ in top]


def gradient_descent_fit(x_sets, y_sets, steps=100_000, rate=0.25):
    """Least-squares lines via plain gradient descent, one per dataset.

    Runs all datasets in parallel as padded arrays. Features are
    standardized internally (descent on the raw scale cannot reach 1e-6
    within a stable step size when x spans [0, 100]); the returned slopes
    and intercepts are mapped back to the original coordinates.
    """
    n = len(x_sets)
    width = max(len(x) for x in x_sets)
    x = np.zeros((n, width))
    y = np.zeros((n, width))
    w = np.zeros((n, width))
    for i, (xs, ys) in enumerate(zip(x_sets, y_sets)):
        x[i, : len(xs)] = xs
        y[i, : len(ys)] = ys
        w[i, : len(xs)] = 1.0
    count = w.sum(axis=1)
    mean_x = (w * x).sum(axis=1) / count
    std_x = np.sqrt((w * (x - mean_x[:, None]) ** 2).sum(axis=1) / count)
    xs = np.where(w > 0, (x - mean_x[:, None]) / std_x[:, None], 0.0)

    m = np.zeros(n)
    b = np.zeros(n)
    for _ in range(steps):
        err = m[:, None] * xs + b[:, None] - y
        err *= w
        m -= rate * 2.0 * (err * xs).sum(axis=1) / count
        b -= rate * 2.0 * err.sum(axis=1) / count
    slope = m / std_x
    intercept = b - m * mean_x / std_x
    return slope, intercept


def central_difference_gradient(loss_fn, slope, intercept, h=1e-4):
    """Numerical gradient of a loss(slope, intercept) callable."""
    d_slope = (loss_fn(slope + h, intercept) - loss_fn(slope - h, intercept)) / (2 * h)
    d_intercept = (loss_fn(slope, intercept + h) - loss_fn(slope, intercept - h)) / (2 * h)
    return d_slope, d_intercept


def cycle_average(policy, forward_disp):
    """Average displacement of a deterministic policy, straight from the cycle.

    policy: tuple of 4 ints (0 = forward, 1 = backward).
    forward_disp: displacement of each forward transition s -> s+1.
    Independent of the library's table layout: backward displacement is
    derived as the negation of the reverse forward edge.
    """
    def move(s, a):
        if a == 0:
            return (s + 1) % 4, forward_disp[s]
        prev = (s - 1) % 4
        return prev, -forward_disp[prev]

    s = 0
    seen = {0: 0}
    displacements = []
    while True:
        s, d = move(s, policy[s])
        displacements.append(d)
        if s in seen:
            cycle = displacements[seen[s]:]
            return sum(cycle) / len(cycle)
        seen[s] = len(displacements)
