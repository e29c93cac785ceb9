"""Scenario generators and the JSON scenario file.

Every generator is a pure function of its inputs and ``seed``.
"""

import json
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import ValidationError

from schemas.scenario import ComputingNode, GroundUser, Point2D, Region, Scenario, Task
from utils.errors import InvalidArgumentError, ScenarioParseError, ScenarioValidationError
from utils.logger import Ca3dLogger
from utils.rng import make_rng

logger = Ca3dLogger().get_logger()

PathLike = Union[str, Path]


# rejection rounds before a hotspot draw is declared hopeless
_MAX_HOTSPOT_ROUNDS = 1000


def _users(points: np.ndarray, task: Task) -> List[GroundUser]:
    return [GroundUser(id=i + 1, position=(float(x), float(y)), task=task) for i, (x, y) in enumerate(points)]


def _disk_misses_region(region: Region, center: Point2D, radius: float) -> bool:
    """True when the disk and the region share no area (touching counts as missing)"""
    nearest = np.clip(np.asarray(center, dtype=float), region.lower, region.upper)
    return float(np.hypot(*(nearest - np.asarray(center)))) >= radius


def generate_hotspot_gus(
    region: Region, count: int, center: Point2D, radius: float, task: Task, seed: int
) -> List[GroundUser]:
    """Users uniform on the hotspot disk intersected with the region.

    Points are drawn uniformly on the bounding box of disk and region and
    kept when they fall in the disk.
    """
    if count < 0:
        raise InvalidArgumentError("count", "must be non-negative")
    if radius <= 0.0:
        raise InvalidArgumentError("radius", "must be strictly positive")
    if _disk_misses_region(region, center, radius):
        raise InvalidArgumentError("center", f"hotspot disk at {center} (r={radius}) lies outside the region")

    rng = make_rng(seed)
    c = np.asarray(center, dtype=float)
    lower = np.maximum(region.lower, c - radius)
    upper = np.minimum(region.upper, c + radius)

    accepted = np.empty((0, 2))
    for _ in range(_MAX_HOTSPOT_ROUNDS):
        if len(accepted) >= count:
            break
        pts = rng.uniform(lower, upper, size=(count - len(accepted), 2))
        inside = np.sum((pts - c) ** 2, axis=1) <= radius**2
        accepted = np.vstack((accepted, pts[inside]))
    else:
        if len(accepted) < count:
            raise InvalidArgumentError(
                "center",
                f"hotspot disk at {center} (r={radius}) overlaps the region too thinly: "
                f"{len(accepted)} of {count} users placed in {_MAX_HOTSPOT_ROUNDS} rounds",
            )
    return _users(accepted[:count], task)


def generate_random_gus(region: Region, count: int, task: Task, seed: int) -> List[GroundUser]:
    if count < 0:
        raise InvalidArgumentError("count", "must be non-negative")
    rng = make_rng(seed)
    return _users(rng.uniform(region.lower, region.upper, size=(count, 2)), task)


def generate_cns_uniform(
    region: Region, count: int, cap_min: float, cap_max: float, seed: int
) -> List[ComputingNode]:
    """Nodes uniform over the region with capacities i.i.d. U[cap_min, cap_max] (Hz)"""
    if cap_min <= 0.0:
        raise InvalidArgumentError("cap_min", "must be strictly positive")
    if cap_min > cap_max:
        raise InvalidArgumentError("cap_max", f"must be >= cap_min ({cap_min})")
    if count < 0:
        raise InvalidArgumentError("count", "must be non-negative")
    rng = make_rng(seed)
    points = rng.uniform(region.lower, region.upper, size=(count, 2))
    caps = rng.uniform(cap_min, cap_max, size=count)
    return [
        ComputingNode(id=i + 1, position=(float(x), float(y)), capacity=float(c))
        for i, ((x, y), c) in enumerate(zip(points, caps))
    ]


def sample_cns_ppp(region: Region, density: float, mean_capacity: float, seed: int) -> List[ComputingNode]:
    """Homogeneous PPP realization; every node carries the mean capacity"""
    if density < 0.0:
        raise InvalidArgumentError("density", "must be non-negative")
    if mean_capacity <= 0.0:
        raise InvalidArgumentError("mean_capacity", "must be strictly positive")
    rng = make_rng(seed)
    count = int(rng.poisson(density * region.area))
    points = rng.uniform(region.lower, region.upper, size=(count, 2))
    return [
        ComputingNode(id=i + 1, position=(float(x), float(y)), capacity=float(mean_capacity))
        for i, (x, y) in enumerate(points)
    ]


def save_scenario(scenario: Scenario, path: PathLike) -> None:
    Path(path).write_text(scenario.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Scenario with {scenario.num_users} users / {scenario.num_nodes} nodes saved to {path}")


def load_scenario(path: PathLike) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(str(path), e.msg, line=e.lineno, column=e.colno) from e

    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ScenarioValidationError(str(path), field, first["msg"]) from e


def build_scenario(
    region: Region,
    users: List[GroundUser],
    nodes: List[ComputingNode],
    name: Optional[str] = None,
) -> Scenario:
    scenario = Scenario(region=region, users=users, nodes=nodes)
    logger.info(f"Built scenario{f' {name!r}' if name else ''}: K={len(users)}, N={len(nodes)}")
    return scenario
