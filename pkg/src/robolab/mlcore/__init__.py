"""Pure, deterministic implementations of the three experiment algorithms."""

from .knn import boundary_diff, cell_center, decision_boundary, knn_classify
from .qlearning import (
    enumerate_policies,
    greedy_policy,
    policy_average_displacement,
    q_update,
    select_action,
)
from .regression import fit_line, invert_line, loss
from .types import (
    COLOR_MAX,
    LENGTH_MAX,
    N_ACTIONS,
    N_STATES,
    SPEED_MAX,
    ActionMode,
    CrawlerAction,
    FeaturePoint,
    FruitLabel,
    LaunchPoint,
    LineModel,
    QParams,
    Sample,
    check_qtable,
    check_state,
    next_state,
    zero_qtable,
)

__all__ = [
    "ActionMode",
    "COLOR_MAX",
    "CrawlerAction",
    "FeaturePoint",
    "FruitLabel",
    "LENGTH_MAX",
    "LaunchPoint",
    "LineModel",
    "N_ACTIONS",
    "N_STATES",
    "QParams",
    "SPEED_MAX",
    "Sample",
    "boundary_diff",
    "cell_center",
    "check_qtable",
    "check_state",
    "decision_boundary",
    "enumerate_policies",
    "fit_line",
    "greedy_policy",
    "invert_line",
    "knn_classify",
    "loss",
    "next_state",
    "policy_average_displacement",
    "q_update",
    "select_action",
    "zero_qtable",
]
