"""Greedy baseline: one-step hill climbing on F with the CA3D local moves.

Starting from ``random_deploy``, UAVs are swept in index order and each takes
the single move with the largest immediate gain in F, staying put on ties
with the stay move. The sweep repeats until no UAV improves F strictly.
"""

from typing import List, Tuple

import numpy as np

from optimizer.beam import ZERO_ACTION, apply_action, local_actions
from schemas.deployment import ActionRecord, Deployment, OptimizerTrace, TraceEntry
from schemas.params import BeamParams, ChannelParams, DeploymentConstraints, UtilityWeights
from schemas.scenario import Scenario
from schemes.base import BaseScheme, SchemeContext, SchemeResult
from schemes.random_scheme import random_deploy
from simulation.accessibility import AccessibilityEvaluator


def greedy_from(
    evaluator: AccessibilityEvaluator,
    start: Deployment,
    constraints: DeploymentConstraints,
    beam_steps: BeamParams,
) -> Tuple[Deployment, OptimizerTrace]:
    moves = local_actions(beam_steps)
    q = start.as_array()
    start_evals = evaluator.evaluations
    entries = [
        TraceEntry(stage="greedy", iteration=0, best_utility=evaluator.utility_value(q), evals=evaluator.evaluations - start_evals)
    ]
    records: List[ActionRecord] = []

    for sweep in range(1, beam_steps.max_passes + 1):
        improved = False
        for m in range(len(q)):
            base = evaluator.utility_value(q)
            best_idx, best_gain, best_q = ZERO_ACTION, 0.0, q
            for idx, delta in enumerate(moves):
                cand = apply_action(q, m, delta, constraints)
                gain = evaluator.utility_value(cand) - base
                if gain > best_gain:
                    best_idx, best_gain, best_q = idx, gain, cand
            if best_idx != ZERO_ACTION:
                q = best_q
                improved = True
            records.append(ActionRecord(sweep=sweep, uav=m, action=best_idx))
        entries.append(
            TraceEntry(
                stage="greedy",
                iteration=sweep,
                best_utility=evaluator.utility_value(q),
                evals=evaluator.evaluations - start_evals,
            )
        )
        if not improved:
            break

    final = Deployment.from_array(q)
    return final, OptimizerTrace(entries=entries, actions=records, final=final)


def greedy_deploy(
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    beam_steps: BeamParams,
    num_uavs: int,
    seed: int,
) -> Tuple[Deployment, OptimizerTrace]:
    evaluator = AccessibilityEvaluator(scenario, channel_params, weights)
    return greedy_from(evaluator, random_deploy(scenario, constraints, num_uavs, seed), constraints, beam_steps)


class GreedyScheme(BaseScheme):
    def __init__(self, name: str = "greedy"):
        super().__init__(name)

    def _deploy_logic(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        evaluator = AccessibilityEvaluator(context.scenario, context.channel, context.weights)
        initial = random_deploy(context.scenario, context.constraints, num_uavs, seed)
        deployment, trace = greedy_from(evaluator, initial, context.constraints, context.beam)
        return SchemeResult(
            scheme=self.name,
            num_uavs=num_uavs,
            seed=seed,
            initial=initial,
            deployment=deployment,
            report=evaluator.evaluate(deployment),
            trace=trace,
        )
