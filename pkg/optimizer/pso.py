"""PSO global initialization over the flattened layout Q (M x 3).

Standard inertia-weight update::

    v <- w*v + c1*r1*(p_best - x) + c2*r2*(g_best - x)
    x <- Pi_Q(x + v)

Velocities are clamped per axis to a fraction of the search extent. Every
candidate is projected before it is evaluated, so particles only ever sit on
feasible layouts. Personal and global bests update on strict improvement.
"""

from typing import Optional, Tuple

import numpy as np

from optimizer.projection import project_array
from schemas.deployment import Deployment, OptimizerTrace, TraceEntry, as_position_array
from schemas.params import ChannelParams, DeploymentConstraints, PsoParams, UtilityWeights
from schemas.scenario import Scenario
from simulation.accessibility import AccessibilityEvaluator
from utils.errors import InvalidArgumentError
from utils.logger import Ca3dLogger
from utils.rng import make_rng

logger = Ca3dLogger().get_logger()

PSO_STREAM = 1


def search_bounds(constraints: DeploymentConstraints, num_uavs: int) -> Tuple[np.ndarray, np.ndarray]:
    lo = np.tile([*constraints.region.lower, constraints.h_min], (num_uavs, 1))
    hi = np.tile([*constraints.region.upper, constraints.h_max], (num_uavs, 1))
    return lo, hi


def run_pso(
    evaluator: AccessibilityEvaluator,
    constraints: DeploymentConstraints,
    pso_params: PsoParams,
    num_uavs: int,
    initial: Optional[Deployment] = None,
) -> Tuple[np.ndarray, float, OptimizerTrace]:
    """Swarm search with a caller-supplied evaluator; returns (best layout, F, trace)"""
    if num_uavs < 1:
        raise InvalidArgumentError("M", "at least one UAV is required")

    rng = make_rng(pso_params.seed, PSO_STREAM)
    lo, hi = search_bounds(constraints, num_uavs)
    vmax = pso_params.velocity_clamp * (hi - lo)
    n_p = pso_params.num_particles
    start_evals = evaluator.evaluations

    x = rng.uniform(lo, hi, size=(n_p, num_uavs, 3))
    if initial is not None:
        x[0] = as_position_array(initial)
    x = np.stack([project_array(p, constraints) for p in x])
    v = np.zeros_like(x)

    fit = np.array([evaluator.utility_value(p) for p in x])
    p_best, f_best = x.copy(), fit.copy()
    g = int(np.argmax(f_best))
    g_best, fg = p_best[g].copy(), float(f_best[g])

    entries = [TraceEntry(stage="pso", iteration=0, best_utility=fg, evals=evaluator.evaluations - start_evals)]
    for it in range(1, pso_params.iterations + 1):
        r1 = rng.random(x.shape)
        r2 = rng.random(x.shape)
        v = (
            pso_params.inertia * v
            + pso_params.cognitive * r1 * (p_best - x)
            + pso_params.social * r2 * (g_best[None] - x)
        )
        v = np.clip(v, -vmax, vmax)
        x = np.stack([project_array(p, constraints) for p in x + v])

        fit = np.array([evaluator.utility_value(p) for p in x])
        improved = fit > f_best
        p_best[improved] = x[improved]
        f_best[improved] = fit[improved]
        g = int(np.argmax(f_best))
        if f_best[g] > fg:
            g_best, fg = p_best[g].copy(), float(f_best[g])
        entries.append(
            TraceEntry(stage="pso", iteration=it, best_utility=fg, evals=evaluator.evaluations - start_evals)
        )

    logger.info(f"PSO finished: M={num_uavs}, particles={n_p}, iterations={pso_params.iterations}, F={fg:.6g}")
    return g_best, fg, OptimizerTrace(entries=entries, final=Deployment.from_array(g_best))


def pso_init(
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    pso_params: PsoParams,
    num_uavs: int,
    initial: Optional[Deployment] = None,
) -> Tuple[Deployment, OptimizerTrace]:
    """Global-best feasible layout after I_g iterations.

    ``initial``, when given, seeds the first particle with a known layout.
    """
    evaluator = AccessibilityEvaluator(scenario, channel_params, weights)
    best, _, trace = run_pso(evaluator, constraints, pso_params, num_uavs, initial)
    return Deployment.from_array(best), trace
