"""Projection of a UAV layout onto the feasible deployment set.

Bounds are enforced by clamping. Separation is repaired by rounds of
symmetric pairwise repulsion: each violating pair is pushed apart along the
segment joining it until the pair sits at d_min plus a 1% margin, then bounds
are re-clamped. Coincident pairs split along a direction seeded by the pair
indices, so the projection stays a pure function.
"""

import numpy as np

from schemas.deployment import Deployment, DeploymentLike, as_position_array
from schemas.params import DeploymentConstraints
from simulation.accessibility import feasible
from utils.errors import ProjectionError
from utils.rng import make_rng

MAX_REPAIR_ROUNDS = 100
SEPARATION_MARGIN = 1.01


def clamp_bounds(q: np.ndarray, constraints: DeploymentConstraints) -> np.ndarray:
    lo = np.array([*constraints.region.lower, constraints.h_min])
    hi = np.array([*constraints.region.upper, constraints.h_max])
    return np.clip(q, lo, hi)


def _split_direction(i: int, j: int) -> np.ndarray:
    v = make_rng(i, j).normal(size=3)
    return v / np.linalg.norm(v)


def project_array(q: np.ndarray, constraints: DeploymentConstraints) -> np.ndarray:
    """Array form of ``project_feasible``; feasible input comes back as the same values"""
    q = np.asarray(q, dtype=float).reshape(-1, 3)
    if feasible(q, constraints):
        return q.copy()

    q = clamp_bounds(q, constraints)
    target = constraints.d_min * SEPARATION_MARGIN
    m = len(q)
    for _ in range(MAX_REPAIR_ROUNDS):
        if feasible(q, constraints):
            return q
        for i in range(m):
            for j in range(i + 1, m):
                gap = q[j] - q[i]
                dist = float(np.linalg.norm(gap))
                if dist >= constraints.d_min:
                    continue
                direction = gap / dist if dist > 0.0 else _split_direction(i, j)
                push = 0.5 * (target - dist) * direction
                q[i] -= push
                q[j] += push
        q = clamp_bounds(q, constraints)

    if feasible(q, constraints):
        return q
    raise ProjectionError(
        f"{m} UAVs cannot be separated by d_min={constraints.d_min} m inside the allowed volume",
        MAX_REPAIR_ROUNDS,
    )


def project_feasible(deployment: DeploymentLike, constraints: DeploymentConstraints) -> Deployment:
    """Pi_Q: map a layout onto the feasible set (identity on feasible layouts)"""
    if isinstance(deployment, Deployment) and feasible(deployment, constraints):
        return deployment
    return Deployment.from_array(project_array(as_position_array(deployment), constraints))
