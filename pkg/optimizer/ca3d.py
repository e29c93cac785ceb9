from typing import Optional, Tuple

from optimizer.beam import run_beam
from optimizer.pso import run_pso
from schemas.deployment import Deployment, EvaluationReport, OptimizerTrace
from schemas.params import BeamParams, ChannelParams, DeploymentConstraints, PsoParams, UtilityWeights
from schemas.scenario import Scenario
from simulation.accessibility import AccessibilityEvaluator
from utils.logger import Ca3dLogger

logger = Ca3dLogger().get_logger()


def ca3d_optimize(
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    pso_params: PsoParams,
    beam_params: BeamParams,
    num_uavs: int,
    initial: Optional[Deployment] = None,
) -> Tuple[Deployment, EvaluationReport, OptimizerTrace]:
    """Two-stage CA3D: PSO global initialization, then beam-search refinement"""
    evaluator = AccessibilityEvaluator(scenario, channel_params, weights)

    q_pso, f_pso, pso_trace = run_pso(evaluator, constraints, pso_params, num_uavs, initial)
    q_final, f_final, beam_trace = run_beam(evaluator, q_pso, constraints, beam_params)

    deployment = Deployment.from_array(q_final)
    report = evaluator.evaluate(deployment)
    logger.info(
        f"CA3D M={num_uavs}: F {f_pso:.6g} -> {f_final:.6g} "
        f"(P_succ={report.p_succ:.3f}, Psi={report.psi:.3f} GHz, evals={evaluator.evaluations})"
    )
    return deployment, report, pso_trace.merged(beam_trace)
