from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

Point2D = Tuple[float, float]


class Region(BaseModel):
    """Axis-aligned service area; lengths in meters"""

    model_config = ConfigDict(frozen=True)

    width: float = Field(4000.0, gt=0.0)
    height: float = Field(4000.0, gt=0.0)
    origin: Point2D = (0.0, 0.0)

    @property
    def center(self) -> Point2D:
        return (self.origin[0] + self.width / 2.0, self.origin[1] + self.height / 2.0)

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    @property
    def lower(self) -> np.ndarray:
        return np.array(self.origin, dtype=float)

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.origin[0] + self.width, self.origin[1] + self.height], dtype=float)

    def contains(self, point: Point2D, tol: float = 1e-9) -> bool:
        x, y = point
        return (
            self.origin[0] - tol <= x <= self.origin[0] + self.width + tol
            and self.origin[1] - tol <= y <= self.origin[1] + self.height + tol
        )


class Task(BaseModel):
    """Offloaded task: input size (bits), workload (CPU cycles), deadline (s)"""

    model_config = ConfigDict(frozen=True)

    input_bits: float = Field(4.0e7, gt=0.0)
    cycles: float = Field(1.0e9, gt=0.0)
    deadline: float = Field(1.0, gt=0.0)


class GroundUser(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=1)
    position: Point2D
    task: Task = Field(default_factory=Task)


class ComputingNode(BaseModel):
    """Ground computing node; capacity in cycles/s"""

    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=1)
    position: Point2D
    capacity: float = Field(..., gt=0.0)


class Scenario(BaseModel):
    """Immutable world state shared by every evaluation and optimizer run"""

    model_config = ConfigDict(frozen=True)

    region: Region = Field(default_factory=Region)
    users: List[GroundUser] = Field(default_factory=list)
    nodes: List[ComputingNode] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_entities(self) -> "Scenario":
        if [u.id for u in self.users] != list(range(1, len(self.users) + 1)):
            raise ValueError("user ids must be contiguous from 1")
        if [n.id for n in self.nodes] != list(range(1, len(self.nodes) + 1)):
            raise ValueError("node ids must be contiguous from 1")
        for user in self.users:
            if not self.region.contains(user.position):
                raise ValueError(f"user {user.id} at {user.position} lies outside the region")
        return self

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def user_positions(self) -> np.ndarray:
        return np.array([u.position for u in self.users], dtype=float).reshape(-1, 2)

    def node_positions(self) -> np.ndarray:
        return np.array([n.position for n in self.nodes], dtype=float).reshape(-1, 2)

    def node_capacities(self) -> np.ndarray:
        return np.array([n.capacity for n in self.nodes], dtype=float)

    def total_capacity_ghz(self) -> float:
        return float(self.node_capacities().sum()) / 1e9
