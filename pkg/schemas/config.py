"""Experiment configuration: TOML file -> validated ``ExperimentConfig``.

Units inside the file: meters, seconds, Hz for bandwidth, watts for powers,
GHz for CN capacities and decimal megabytes for task input size
(``input_size_mb = 5`` means 5 * 8e6 = 4e7 bits).
"""

import tomllib
from pathlib import Path
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from schemas.params import (
    BeamParams,
    ChannelParams,
    DeploymentConstraints,
    FixedBaselineParams,
    PsoParams,
    UtilityWeights,
)
from schemas.scenario import Point2D, Region, Scenario, Task
from simulation.scenario import (
    build_scenario,
    generate_cns_uniform,
    generate_hotspot_gus,
    generate_random_gus,
    sample_cns_ppp,
)
from utils.errors import ConfigError

BITS_PER_MB = 8.0e6


class TaskSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    input_size_mb: float = Field(5.0, gt=0.0)
    cycles: float = Field(1.0e9, gt=0.0)
    deadline: float = Field(1.0, gt=0.0)

    def to_task(self) -> Task:
        return Task(input_bits=self.input_size_mb * BITS_PER_MB, cycles=self.cycles, deadline=self.deadline)


class ScenarioSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    region: Region = Field(default_factory=Region)
    distribution: Literal["hotspot", "random"] = "hotspot"
    num_users: int = Field(50, ge=1)
    hotspot_radius: float = Field(800.0, gt=0.0)
    # None means the region center
    hotspot_center: Optional[Point2D] = None
    node_placement: Literal["uniform", "ppp"] = "uniform"
    num_nodes: int = Field(60, ge=0)
    cap_min_ghz: float = Field(2.0, gt=0.0)
    cap_max_ghz: float = Field(10.0, gt=0.0)
    # nodes per m^2 when node_placement = "ppp"; defaults to num_nodes / area
    ppp_density: Optional[float] = Field(None, ge=0.0)
    task: TaskSpec = Field(default_factory=TaskSpec)

    @model_validator(mode="after")
    def _check_capacity_range(self) -> "ScenarioSpec":
        if self.cap_min_ghz > self.cap_max_ghz:
            raise ValueError("cap_min_ghz exceeds cap_max_ghz")
        return self

    @property
    def center(self) -> Point2D:
        return self.hotspot_center if self.hotspot_center is not None else self.region.center

    def build(self, seed: int) -> Scenario:
        """Scenario for one seed; users and nodes draw from separate substreams"""
        task = self.task.to_task()
        if self.distribution == "hotspot":
            users = generate_hotspot_gus(self.region, self.num_users, self.center, self.hotspot_radius, task, seed)
        else:
            users = generate_random_gus(self.region, self.num_users, task, seed)

        node_seed = seed + 1_000_003
        if self.node_placement == "ppp":
            density = self.ppp_density if self.ppp_density is not None else self.num_nodes / self.region.area
            mean_hz = 0.5 * (self.cap_min_ghz + self.cap_max_ghz) * 1e9
            nodes = sample_cns_ppp(self.region, density, mean_hz, node_seed)
        else:
            nodes = generate_cns_uniform(
                self.region, self.num_nodes, self.cap_min_ghz * 1e9, self.cap_max_ghz * 1e9, node_seed
            )
        return build_scenario(self.region, users, nodes, name=f"{self.distribution}/seed={seed}")


class ConstraintSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    h_min: float = Field(100.0, gt=0.0)
    h_max: float = Field(300.0, gt=0.0)
    d_min: float = Field(50.0, ge=0.0)

    @model_validator(mode="after")
    def _check_altitudes(self) -> "ConstraintSpec":
        if self.h_min > self.h_max:
            raise ValueError(f"h_min ({self.h_min}) exceeds h_max ({self.h_max})")
        return self


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    uav_counts: List[int] = Field(default_factory=lambda: [1, 2, 4, 6, 8])
    altitudes: List[float] = Field(default_factory=lambda: [100.0, 200.0, 300.0])
    spacings: List[float] = Field(default_factory=lambda: [100.0 * i for i in range(1, 21)])
    single_uavs: int = Field(3, ge=1)

    @field_validator("uav_counts")
    @classmethod
    def _positive_counts(cls, v: List[int]) -> List[int]:
        if any(m < 1 for m in v):
            raise ValueError("every UAV count must be >= 1")
        return v


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = "experiment"
    scenario: ScenarioSpec = Field(default_factory=ScenarioSpec)
    channel: ChannelParams = Field(default_factory=ChannelParams)
    weights: UtilityWeights = Field(default_factory=UtilityWeights)
    constraints: ConstraintSpec = Field(default_factory=ConstraintSpec)
    pso: PsoParams = Field(default_factory=PsoParams)
    beam: BeamParams = Field(default_factory=BeamParams)
    fixed: FixedBaselineParams = Field(default_factory=FixedBaselineParams)
    schemes: List[Literal["ca3d", "random", "fixed", "greedy"]] = Field(
        default_factory=lambda: ["ca3d", "greedy", "random", "fixed"]
    )
    seeds: List[int] = Field(default_factory=lambda: list(range(1, 21)))
    sweep: SweepSpec = Field(default_factory=SweepSpec)

    @field_validator("seeds")
    @classmethod
    def _seeds(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("seed list must not be empty")
        if any(s < 0 for s in v):
            raise ValueError("seeds must be non-negative")
        return v

    def deployment_constraints(self) -> DeploymentConstraints:
        c = self.constraints
        return DeploymentConstraints(h_min=c.h_min, h_max=c.h_max, d_min=c.d_min, region=self.scenario.region)

    def with_overrides(
        self, seeds: Optional[List[int]] = None, schemes: Optional[List[str]] = None
    ) -> "ExperimentConfig":
        update: dict = {}
        if seeds:
            update["seeds"] = seeds
        if schemes:
            update["schemes"] = schemes
        try:
            return ExperimentConfig.model_validate({**self.model_dump(), **update})
        except ValidationError as e:
            raise ConfigError(f"Invalid override: {e}") from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: malformed TOML: {e}") from e

    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"{path}: {details}") from e


def parse_seed_list(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise ConfigError(f"Seed list must be comma-separated integers, got {text!r}") from e

