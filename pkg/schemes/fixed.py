from typing import Tuple

import numpy as np
from sklearn.cluster import KMeans

from optimizer.projection import project_array
from schemas.deployment import Deployment, EvaluationReport
from schemas.params import ChannelParams, DeploymentConstraints, FixedBaselineParams, UtilityWeights
from schemas.scenario import Scenario
from schemes.base import BaseScheme, SchemeContext, SchemeResult
from schemes.random_scheme import random_deploy
from simulation.accessibility import AccessibilityEvaluator
from utils.errors import InvalidArgumentError


def fixed_placement(
    scenario: Scenario,
    constraints: DeploymentConstraints,
    fixed_params: FixedBaselineParams,
    num_uavs: int,
    seed: int,
) -> Deployment:
    """UAVs over k-means centroids of the GU positions at the configured altitude.

    With fewer users than UAVs the surplus UAVs take random positions.
    """
    if num_uavs < 1:
        raise InvalidArgumentError("M", "at least one UAV is required")
    altitude = fixed_params.altitude or 0.5 * (constraints.h_min + constraints.h_max)
    users = scenario.user_positions()
    clusters = min(num_uavs, len(users))

    q = random_deploy(scenario, constraints, num_uavs, seed).as_array()
    if clusters > 0:
        kmeans = KMeans(n_clusters=clusters, n_init=10, random_state=seed).fit(users)
        # cluster order from sklearn is arbitrary; sort for a stable UAV numbering
        centers = kmeans.cluster_centers_[np.lexsort(kmeans.cluster_centers_.T[::-1])]
        q[:clusters, :2] = centers
        q[:clusters, 2] = altitude
    return Deployment.from_array(project_array(q, constraints))


def fixed_layout_and_report(
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    fixed_params: FixedBaselineParams,
    num_uavs: int,
    seed: int,
) -> Tuple[Deployment, EvaluationReport]:
    """Cluster placement, evaluated with C_m and A_k limited to CNs within ``local_radius``"""
    deployment = fixed_placement(scenario, constraints, fixed_params, num_uavs, seed)
    radius = None if fixed_params.unrestricted else fixed_params.local_radius
    report = AccessibilityEvaluator(scenario, channel_params, weights, local_radius=radius).evaluate(deployment)
    return deployment, report


def fixed_deploy_and_evaluate(
    scenario: Scenario,
    channel_params: ChannelParams,
    weights: UtilityWeights,
    constraints: DeploymentConstraints,
    fixed_params: FixedBaselineParams,
    num_uavs: int,
    seed: int,
) -> EvaluationReport:
    _, report = fixed_layout_and_report(scenario, channel_params, weights, constraints, fixed_params, num_uavs, seed)
    return report


class FixedScheme(BaseScheme):
    def __init__(self, name: str = "fixed"):
        super().__init__(name)

    def _deploy_logic(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        deployment, report = fixed_layout_and_report(
            context.scenario, context.channel, context.weights, context.constraints, context.fixed, num_uavs, seed
        )
        return SchemeResult(
            scheme=self.name,
            num_uavs=num_uavs,
            seed=seed,
            initial=deployment,
            deployment=deployment,
            report=report,
        )
