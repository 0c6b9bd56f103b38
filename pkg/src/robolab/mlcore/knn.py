"""k-nearest-neighbors classification over fruit measurements.

Distances are Euclidean on features scaled by the fixed plot ranges
(color / 255, length / 250) so the two axes contribute comparably and the
metric does not move when new data arrives. Squared distances are compared
directly (no sqrt) so tie handling is exact.

Tie rules, chosen to be deterministic and easy to explain:
  * equal distances -> the sample with the lower id ranks first;
  * a tied vote among the k neighbors -> the single nearest neighbor's
    label wins.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import InvalidK, NoTrainingData
from .types import COLOR_MAX, LENGTH_MAX, FeaturePoint, FruitLabel, Sample


def knn_classify(
    dataset: Sequence[Sample], query: FeaturePoint, k: int
) -> tuple[FruitLabel, list[int]]:
    """Classify ``query`` by majority vote among its k nearest samples.

    Returns the winning label and the ids of the k neighbors ordered
    nearest-first.
    """
    if not dataset:
        raise NoTrainingData("cannot classify: the dataset is empty")
    if not 1 <= k <= len(dataset):
        raise InvalidK(f"k must be in 1..{len(dataset)}, got {k}")

    ranked = []
    for s in dataset:
        dc = (query.color - s.point.color) / COLOR_MAX
        dl = (query.length - s.point.length) / LENGTH_MAX
        ranked.append((dc * dc + dl * dl, s.id, s.label))
    ranked.sort(key=lambda t: (t[0], t[1]))

    neighbors = ranked[:k]
    votes = sum(1 for _, _, label in neighbors if label == FruitLabel.APPLE)
    if votes * 2 > k:
        label = FruitLabel.APPLE
    elif votes * 2 < k:
        label = FruitLabel.BANANA
    else:
        label = neighbors[0][2]
    return label, [sid for _, sid, _ in neighbors]


def cell_center(i: int, j: int, resolution: int) -> FeaturePoint:
    """Feature point at the center of grid cell (i, j).

    i indexes color ascending, j indexes length ascending.
    """
    return FeaturePoint(
        color=(i + 0.5) * COLOR_MAX / resolution,
        length=(j + 0.5) * LENGTH_MAX / resolution,
    )


def decision_boundary(
    dataset: Sequence[Sample], k: int, resolution: int = 100
) -> list[list[FruitLabel]]:
    """Label grid over the full feature plane, ``resolution`` cells per axis.

    grid[i][j] equals ``knn_classify`` at ``cell_center(i, j, resolution)``;
    the computation is vectorized here, so that equivalence is a real check
    rather than a restatement.
    """
    if not dataset:
        raise NoTrainingData("cannot compute a boundary: the dataset is empty")
    if not 1 <= k <= len(dataset):
        raise InvalidK(f"k must be in 1..{len(dataset)}, got {k}")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")

    # Samples ordered by id so a stable distance sort breaks ties by id.
    ordered = sorted(dataset, key=lambda s: s.id)
    colors = np.array([s.point.color for s in ordered])
    lengths = np.array([s.point.length for s in ordered])
    is_apple = np.array([s.label == FruitLabel.APPLE for s in ordered])

    centers = (np.arange(resolution) + 0.5) / resolution
    qc = centers * COLOR_MAX  # color of column i
    ql = centers * LENGTH_MAX  # length of row j

    # (i, j, n) squared distances; arithmetic mirrors knn_classify exactly.
    dc = (qc[:, None] - colors[None, :]) / COLOR_MAX
    dl = (ql[:, None] - lengths[None, :]) / LENGTH_MAX
    d2 = (dc * dc)[:, None, :] + (dl * dl)[None, :, :]

    order = np.argsort(d2, axis=2, kind="stable")
    nearest = order[:, :, :k]
    apple_votes = is_apple[nearest].sum(axis=2)
    apple_wins = apple_votes * 2 > k
    banana_wins = apple_votes * 2 < k
    tie_label = is_apple[order[:, :, 0]]  # nearest neighbor decides ties
    grid_is_apple = np.where(apple_wins, True, np.where(banana_wins, False, tie_label))

    return [
        [FruitLabel.APPLE if grid_is_apple[i, j] else FruitLabel.BANANA
         for j in range(resolution)]
        for i in range(resolution)
    ]


def boundary_diff(
    a: list[list[FruitLabel]], b: list[list[FruitLabel]]
) -> tuple[int, int]:
    """(changed cells, total cells) between two equally-sized label grids."""
    changed = sum(
        1 for row_a, row_b in zip(a, b) for la, lb in zip(row_a, row_b) if la != lb
    )
    total = len(a) * len(a[0]) if a else 0
    return changed, total
