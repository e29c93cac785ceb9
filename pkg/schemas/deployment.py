from typing import ClassVar, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator


class UavPosition(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float
    y: float
    h: float = Field(..., gt=0.0)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.h)


class Deployment(BaseModel):
    """The UAV layout Q; row m of ``as_array()`` is q_m = (x, y, h)"""

    model_config = ConfigDict(frozen=True)

    positions: List[UavPosition]

    @classmethod
    def from_array(cls, q: Union[np.ndarray, Sequence[Sequence[float]]]) -> "Deployment":
        arr = np.asarray(q, dtype=float).reshape(-1, 3)
        return cls(positions=[UavPosition(x=float(x), y=float(y), h=float(h)) for x, y, h in arr])

    def as_array(self) -> np.ndarray:
        return np.array([p.as_tuple() for p in self.positions], dtype=float).reshape(-1, 3)

    @property
    def num_uavs(self) -> int:
        return len(self.positions)


DeploymentLike = Union[Deployment, np.ndarray]


def as_position_array(deployment: DeploymentLike) -> np.ndarray:
    if isinstance(deployment, Deployment):
        return deployment.as_array()
    return np.asarray(deployment, dtype=float).reshape(-1, 3)


class Assignment(BaseModel):
    """Selected (UAV, CN) pair for one user; ids are 1-based like the scenario"""

    model_config = ConfigDict(frozen=True)

    uav_id: int
    node_id: int
    latency: float


class UavBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    uav_id: int
    accessible_nodes: List[int]
    accessible_capacity_ghz: float
    served_users: int


class EvaluationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    psi: float
    omega: float
    p_succ: float = Field(..., ge=0.0, le=1.0)
    utility: float
    per_user_assignment: List[Optional[Assignment]] = Field(default_factory=list)
    per_uav: List[UavBreakdown] = Field(default_factory=list)

    CSV_COLUMNS: ClassVar[Tuple[str, ...]] = ("psi_ghz", "omega_ghz", "p_succ", "utility")

    def to_row(self) -> dict:
        return {"psi_ghz": self.psi, "omega_ghz": self.omega, "p_succ": self.p_succ, "utility": self.utility}


class TraceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    stage: Literal["pso", "beam", "greedy"]
    iteration: int
    best_utility: float
    evals: int


class ActionRecord(BaseModel):
    """Action executed for one UAV visit; ``action`` indexes ``local_actions``"""

    model_config = ConfigDict(frozen=True)

    sweep: int
    uav: int
    action: int


class OptimizerTrace(BaseModel):
    entries: List[TraceEntry] = Field(default_factory=list)
    actions: List[ActionRecord] = Field(default_factory=list)
    final: Optional[Deployment] = None

    @model_validator(mode="after")
    def _stage_monotone(self) -> "OptimizerTrace":
        last: dict = {}
        for entry in self.entries:
            prev = last.get(entry.stage)
            if prev is not None and entry.best_utility < prev:
                raise ValueError(f"{entry.stage} trace decreased at iteration {entry.iteration}")
            last[entry.stage] = entry.best_utility
        return self

    def stage(self, name: str) -> List[TraceEntry]:
        return [e for e in self.entries if e.stage == name]

    def evals(self, name: Optional[str] = None) -> int:
        """Cumulative utility evaluations of one stage, or of all stages"""
        if name is not None:
            entries = self.stage(name)
            return entries[-1].evals if entries else 0
        return sum(self.evals(n) for n in ("pso", "beam", "greedy"))

    def merged(self, other: "OptimizerTrace") -> "OptimizerTrace":
        return OptimizerTrace(
            entries=self.entries + other.entries,
            actions=self.actions + other.actions,
            final=other.final or self.final,
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [e.model_dump() for e in self.entries], columns=["stage", "iteration", "best_utility", "evals"]
        )
