"""Beam-search local refinement with discounted rollouts.

For UAV m, a sequence a_1..a_H of local moves is scored by

    J_m = sum_l rho^(l-1) * (F(Q^(l)) - F(Q))

where Q^(l) moves only UAV m (projected after every step) and the other UAVs
stay frozen. At each depth only the W best prefixes survive. The first move of
the best full-depth sequence is executed if its own one-step change in F is
non-negative. Passes sweep UAVs in index order until a pass changes nothing
or ``max_passes`` is reached.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from optimizer.projection import project_array
from schemas.deployment import ActionRecord, Deployment, OptimizerTrace, TraceEntry, as_position_array
from schemas.params import BeamParams, ChannelParams, DeploymentConstraints, UtilityWeights
from schemas.scenario import Scenario
from simulation.accessibility import AccessibilityEvaluator, feasible
from utils.errors import InvalidArgumentError
from utils.logger import Ca3dLogger

logger = Ca3dLogger().get_logger()

ZERO_ACTION = 0


def local_actions(beam_params: BeamParams) -> List[Tuple[float, float, float]]:
    """The 7-move action set; stay first, then +x, -x, +y, -y, +h, -h"""
    dx, dh = beam_params.step_xy, beam_params.step_h
    return [
        (0.0, 0.0, 0.0),
        (dx, 0.0, 0.0),
        (-dx, 0.0, 0.0),
        (0.0, dx, 0.0),
        (0.0, -dx, 0.0),
        (0.0, 0.0, dh),
        (0.0, 0.0, -dh),
    ]


def apply_action(
    q: np.ndarray, uav_index: int, delta: Sequence[float], constraints: DeploymentConstraints
) -> np.ndarray:
    """Move one UAV and project; a stay move returns an unchanged copy"""
    moved = q.copy()
    moved[uav_index] += np.asarray(delta, dtype=float)
    return project_array(moved, constraints)


@dataclass
class _Candidate:
    actions: Tuple[int, ...]
    q: np.ndarray
    score: float
    first_gain: float


def _expand(
    evaluator: AccessibilityEvaluator,
    q: np.ndarray,
    uav_index: int,
    constraints: DeploymentConstraints,
    beam_params: BeamParams,
) -> List[_Candidate]:
    """Beam over UAV ``uav_index``; returns the surviving full-depth candidates, best first"""
    moves = local_actions(beam_params)
    base = evaluator.utility_value(q)
    beam = [_Candidate(actions=(), q=q, score=0.0, first_gain=0.0)]
    for depth in range(1, beam_params.horizon + 1):
        weight = beam_params.discount ** (depth - 1)
        children = []
        for cand in beam:
            for idx, delta in enumerate(moves):
                nxt = apply_action(cand.q, uav_index, delta, constraints)
                gain = evaluator.utility_value(nxt) - base
                children.append(
                    _Candidate(
                        actions=cand.actions + (idx,),
                        q=nxt,
                        score=cand.score + weight * gain,
                        first_gain=gain if depth == 1 else cand.first_gain,
                    )
                )
        # stable sort: ties keep expansion order, which puts the stay move first
        beam = sorted(children, key=lambda c: -c.score)[: beam_params.width]
    return beam


def rollout_score(
    uav_index: int,
    actions: Sequence[Sequence[float]],
    deployment: Deployment,
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    beam_params: BeamParams,
) -> float:
    """J_m of an explicit displacement sequence (at most H moves)"""
    if not actions:
        raise InvalidArgumentError("actions", "rollout needs at least one move")
    if len(actions) > beam_params.horizon:
        raise InvalidArgumentError("actions", f"{len(actions)} moves exceed the horizon {beam_params.horizon}")
    q = as_position_array(deployment)
    if not 0 <= uav_index < len(q):
        raise InvalidArgumentError("uav_index", f"{uav_index} not in [0, {len(q)})")

    evaluator = AccessibilityEvaluator(scenario, channel_params, weights)
    base = evaluator.utility_value(q)
    score, current = 0.0, q
    for step, delta in enumerate(actions, start=1):
        current = apply_action(current, uav_index, delta, constraints)
        score += beam_params.discount ** (step - 1) * (evaluator.utility_value(current) - base)
    return score


def run_beam(
    evaluator: AccessibilityEvaluator,
    q: np.ndarray,
    constraints: DeploymentConstraints,
    beam_params: BeamParams,
) -> Tuple[np.ndarray, float, OptimizerTrace]:
    q = np.asarray(q, dtype=float).copy()
    moves = local_actions(beam_params)
    start_evals = evaluator.evaluations
    f_current = evaluator.utility_value(q)
    entries = [TraceEntry(stage="beam", iteration=0, best_utility=f_current, evals=evaluator.evaluations - start_evals)]
    records: List[ActionRecord] = []

    for sweep in range(1, beam_params.max_passes + 1):
        changed = False
        for m in range(len(q)):
            best = _expand(evaluator, q, m, constraints, beam_params)[0]
            action = best.actions[0]
            if action != ZERO_ACTION and best.first_gain >= 0.0:
                nxt = apply_action(q, m, moves[action], constraints)
                if not np.array_equal(nxt, q):
                    q = nxt
                    changed = True
                else:
                    action = ZERO_ACTION
            else:
                action = ZERO_ACTION
            records.append(ActionRecord(sweep=sweep, uav=m, action=action))
        f_current = evaluator.utility_value(q)
        entries.append(
            TraceEntry(stage="beam", iteration=sweep, best_utility=f_current, evals=evaluator.evaluations - start_evals)
        )
        if not changed:
            break

    logger.info(f"Beam refinement finished after {entries[-1].iteration} passes, F={f_current:.6g}")
    return q, f_current, OptimizerTrace(entries=entries, actions=records, final=Deployment.from_array(q))


def beam_refine(
    deployment: Deployment,
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    beam_params: BeamParams,
) -> Tuple[Deployment, OptimizerTrace]:
    if not feasible(deployment, constraints):
        raise InvalidArgumentError("deployment", "beam refinement starts from a feasible layout")
    evaluator = AccessibilityEvaluator(scenario, channel_params, weights)
    q, _, trace = run_beam(evaluator, as_position_array(deployment), constraints, beam_params)
    return Deployment.from_array(q), trace
