import json

import numpy as np
import pytest
from pydantic import ValidationError

from schemas.scenario import ComputingNode, GroundUser, Region, Scenario, Task
from simulation.scenario import (
    build_scenario,
    generate_cns_uniform,
    generate_hotspot_gus,
    generate_random_gus,
    load_scenario,
    sample_cns_ppp,
    save_scenario,
)
from utils.errors import InvalidArgumentError, ScenarioParseError, ScenarioValidationError


def test_hotspot_users_stay_in_disk_and_region(region):
    users = generate_hotspot_gus(region, 500, region.center, 800.0, Task(), seed=1)
    pts = np.array([u.position for u in users])
    assert len(users) == 500
    assert [u.id for u in users] == list(range(1, 501))
    assert np.all(np.hypot(*(pts - np.array(region.center)).T) <= 800.0 + 1e-9)
    assert all(region.contains(u.position) for u in users)


def test_hotspot_mean_distance_matches_uniform_disk(region):
    radius = 800.0
    users = generate_hotspot_gus(region, 10_000, region.center, radius, Task(), seed=2)
    dist = np.hypot(*(np.array([u.position for u in users]) - np.array(region.center)).T)
    # uniform disk: E[r] = 2R/3, Var[r] = R^2/18
    se = radius / np.sqrt(18.0) / np.sqrt(len(dist))
    assert abs(dist.mean() - 2.0 * radius / 3.0) < 3.0 * se


def test_hotspot_disk_clipped_by_region_corner(region):
    users = generate_hotspot_gus(region, 200, (0.0, 0.0), 500.0, Task(), seed=3)
    assert all(region.contains(u.position) for u in users)


def test_hotspot_disk_outside_region_rejected(region):
    with pytest.raises(InvalidArgumentError):
        generate_hotspot_gus(region, 5, (-2000.0, -2000.0), 100.0, Task(), seed=0)


def test_hotspot_disk_tangent_to_region_rejected(region):
    # touches the left edge at a single point: zero-area intersection
    with pytest.raises(InvalidArgumentError):
        generate_hotspot_gus(region, 5, (-800.0, 2000.0), 800.0, Task(), seed=1)


def test_hotspot_sliver_intersection_still_fills(region):
    center, radius = (-799.9, 2000.0), 800.0
    users = generate_hotspot_gus(region, 50, center, radius, Task(), seed=1)
    pts = np.array([u.position for u in users])
    assert len(users) == 50
    assert np.all(pts[:, 0] >= 0.0)
    assert np.all(np.hypot(*(pts - np.array(center)).T) <= radius + 1e-9)


def test_hotspot_rejects_non_positive_radius(region):
    with pytest.raises(InvalidArgumentError):
        generate_hotspot_gus(region, 5, region.center, 0.0, Task(), seed=0)


def test_random_users_centered_on_region(region):
    users = generate_random_gus(region, 10_000, Task(), seed=9)
    pts = np.array([u.position for u in users])
    # uniform on [0, L]: sd = L / sqrt(12)
    se = np.array([region.width, region.height]) / np.sqrt(12.0) / np.sqrt(len(pts))
    assert np.all(np.abs(pts.mean(axis=0) - np.array(region.center)) < 3.0 * se)
    assert all(region.contains(u.position) for u in users)


def test_generators_deterministic_per_seed(region):
    a = generate_random_gus(region, 20, Task(), seed=5)
    b = generate_random_gus(region, 20, Task(), seed=5)
    c = generate_random_gus(region, 20, Task(), seed=6)
    assert a == b
    assert a != c


def test_uniform_nodes_degenerate_capacity(region):
    nodes = generate_cns_uniform(region, 30, 5e9, 5e9, seed=1)
    assert all(n.capacity == 5e9 for n in nodes)


def test_uniform_nodes_mean_capacity(region):
    nodes = generate_cns_uniform(region, 10_000, 2e9, 10e9, seed=9)
    caps = np.array([n.capacity for n in nodes])
    se = (8e9 / np.sqrt(12.0)) / np.sqrt(len(caps))
    assert abs(caps.mean() - 6e9) < 3.0 * se
    assert caps.min() >= 2e9 and caps.max() <= 10e9


@pytest.mark.parametrize("cap_min, cap_max", [(0.0, 1e9), (6e9, 5e9)])
def test_uniform_nodes_reject_bad_capacity_range(region, cap_min, cap_max):
    with pytest.raises(InvalidArgumentError):
        generate_cns_uniform(region, 3, cap_min, cap_max, seed=0)


def test_ppp_zero_density_is_empty(region):
    assert sample_cns_ppp(region, 0.0, 6e9, seed=1) == []


def test_ppp_count_and_capacity(region):
    density = 50.0 / region.area
    counts = [len(sample_cns_ppp(region, density, 6e9, seed=s)) for s in range(200)]
    # Poisson(50): mean 50, se = sqrt(50 / 200)
    assert abs(np.mean(counts) - 50.0) < 3.0 * np.sqrt(50.0 / 200)
    nodes = sample_cns_ppp(region, density, 6e9, seed=4)
    assert all(n.capacity == 6e9 and region.contains(n.position) for n in nodes)


def test_scenario_requires_contiguous_ids(region):
    with pytest.raises(ValidationError):
        Scenario(region=region, users=[GroundUser(id=2, position=(1.0, 1.0))])


def test_scenario_rejects_users_outside_region(region):
    with pytest.raises(ValidationError):
        Scenario(region=region, users=[GroundUser(id=1, position=(5000.0, 1.0))])


def test_scenario_file_round_trip(tmp_path, hotspot_scenario):
    path = tmp_path / "scenario.json"
    save_scenario(hotspot_scenario, path)
    assert load_scenario(path) == hotspot_scenario


def test_load_scenario_reports_parse_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "users": [\n    {"id": 1,,}\n  ]\n}', encoding="utf-8")
    with pytest.raises(ScenarioParseError) as exc:
        load_scenario(path)
    assert exc.value.line == 3


def test_load_scenario_reports_invalid_field(tmp_path, region):
    path = tmp_path / "negative.json"
    data = {
        "region": region.model_dump(),
        "users": [],
        "nodes": [{"id": 1, "position": [10.0, 10.0], "capacity": -1.0}],
    }
    path.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(ScenarioValidationError) as exc:
        load_scenario(path)
    assert "capacity" in exc.value.field


def test_build_scenario_accepts_generated_entities():
    region = Region(width=1000.0, height=500.0)
    users = generate_random_gus(region, 4, Task(), seed=1)
    nodes = generate_cns_uniform(region, 3, 2e9, 4e9, seed=2)
    scenario = build_scenario(region, users, nodes, name="tiny")
    assert scenario.num_users == 4
    assert scenario.num_nodes == 3
    assert scenario.total_capacity_ghz() == pytest.approx(sum(n.capacity for n in nodes) / 1e9)
    assert isinstance(scenario.nodes[0], ComputingNode)
