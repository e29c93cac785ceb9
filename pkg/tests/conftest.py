import os

import hypothesis
import numpy as np
import pytest

from schemas.config import ExperimentConfig
from schemas.params import BeamParams, ChannelParams, DeploymentConstraints, PsoParams, UtilityWeights
from schemas.scenario import ComputingNode, GroundUser, Region, Scenario, Task
from simulation.scenario import generate_cns_uniform, generate_hotspot_gus

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

# Same channel the committed experiment configs pin
CALIBRATED_CHANNEL = {"beta0": 1.0e-4, "noise": 3.98e-14}


@pytest.fixture
def channel():
    return ChannelParams(**CALIBRATED_CHANNEL)


@pytest.fixture
def weights():
    return UtilityWeights()


@pytest.fixture
def region():
    return Region()


@pytest.fixture
def constraints(region):
    return DeploymentConstraints(region=region)


@pytest.fixture
def hotspot_scenario(region):
    """Small hotspot world: 12 users in 800 m around the center, 20 CNs over the area"""
    users = generate_hotspot_gus(region, 12, region.center, 800.0, Task(), seed=7)
    nodes = generate_cns_uniform(region, 20, 2e9, 10e9, seed=8)
    return Scenario(region=region, users=users, nodes=nodes)


@pytest.fixture
def compact_region():
    return Region(width=1200.0, height=1200.0)


@pytest.fixture
def compact_scenario(compact_region):
    """Dense world where a center UAV reaches some but not all (user, CN) pairs"""
    users = generate_hotspot_gus(compact_region, 6, compact_region.center, 600.0, Task(), seed=3)
    nodes = generate_cns_uniform(compact_region, 8, 2e9, 10e9, seed=4)
    return Scenario(region=compact_region, users=users, nodes=nodes)


@pytest.fixture
def compact_constraints(compact_region):
    return DeploymentConstraints(region=compact_region)


@pytest.fixture
def fast_pso():
    return PsoParams(num_particles=6, iterations=5, seed=11)


@pytest.fixture
def fast_beam():
    return BeamParams(horizon=2, width=2, max_passes=3)


@pytest.fixture
def single_link():
    """Factory: one user and one CN at the region center"""

    def build(region: Region, deadline: float = 5.0, capacity: float = 5e9) -> Scenario:
        center = region.center
        return Scenario(
            region=region,
            users=[GroundUser(id=1, position=center, task=Task(deadline=deadline))],
            nodes=[ComputingNode(id=1, position=center, capacity=capacity)],
        )

    return build


@pytest.fixture
def small_config():
    return ExperimentConfig.model_validate(
        {
            "name": "unit",
            "scenario": {"num_users": 10, "num_nodes": 15, "hotspot_radius": 600.0},
            "channel": CALIBRATED_CHANNEL,
            "pso": {"num_particles": 5, "iterations": 3},
            "beam": {"horizon": 1, "width": 1, "max_passes": 2},
            "schemes": ["random", "greedy"],
            "seeds": [1, 2],
            "sweep": {"uav_counts": [1, 2], "altitudes": [150.0], "spacings": [25.0, 400.0, 900.0], "single_uavs": 2},
        }
    )
