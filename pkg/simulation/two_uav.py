"""Disk approximation of the two-UAV case.

Each UAV's accessible set is approximated by a ground disk of radius R_a(h)
around its projection; CNs form a homogeneous PPP of density lambda_c with
mean capacity f_bar. Capacities are returned in the unit of
``DiskModelParams.mean_capacity`` (GHz by convention).
"""

from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from scipy.optimize import bisect

from schemas.params import ChannelParams, DiskModelParams
from schemas.scenario import Task
from simulation.channel import air_ground_rate, transfer_delay
from utils.errors import DomainError, InvalidArgumentError
from utils.logger import Ca3dLogger
from utils.rng import make_rng, spawn_rngs

logger = Ca3dLogger().get_logger()

ArrayLike = Union[float, np.ndarray]

RADIUS_TOLERANCE = 0.1  # meters
DEFAULT_SEARCH_BOUND = float(np.hypot(4000.0, 4000.0))


def _out(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def representative_latency(
    node_dist: ArrayLike,
    altitude: float,
    task: Task,
    uav_ground_user_dist: float,
    params: ChannelParams,
    mean_capacity: float,
) -> ArrayLike:
    """Latency of the representative task relayed to a CN ``node_dist`` meters from the UAV projection"""
    up = transfer_delay(task.input_bits, air_ground_rate(uav_ground_user_dist, altitude, params.p_user, params))
    fwd = transfer_delay(task.input_bits, air_ground_rate(node_dist, altitude, params.p_uav, params))
    return _out(np.asarray(up) + np.asarray(fwd) + task.cycles / mean_capacity)


def effective_radius(
    altitude: float,
    task: Task,
    uav_ground_user_dist: float,
    params: ChannelParams,
    mean_capacity: float = 6.0e9,
    upper_bound: float = DEFAULT_SEARCH_BOUND,
) -> float:
    """Largest horizontal UAV-to-CN distance meeting the deadline, to 0.1 m.

    ``mean_capacity`` is in cycles/s. Returns 0 when the task misses its
    deadline even for a CN right under the UAV, and ``upper_bound`` when it
    meets the deadline all the way out.
    """
    if altitude <= 0.0:
        raise InvalidArgumentError("altitude", "must be strictly positive")

    def slack(r: float) -> float:
        value = float(representative_latency(r, altitude, task, uav_ground_user_dist, params, mean_capacity))
        return min(value, 1e12) - task.deadline

    if slack(0.0) > 0.0:
        return 0.0
    if slack(upper_bound) <= 0.0:
        return float(upper_bound)
    return float(bisect(slack, 0.0, upper_bound, xtol=RADIUS_TOLERANCE))


def altitude_radius_profile(
    altitudes: Sequence[float],
    task: Task,
    params: ChannelParams,
    mean_capacity: float = 6.0e9,
    upper_bound: float = DEFAULT_SEARCH_BOUND,
) -> pd.DataFrame:
    """R_a(h) for each altitude, with the GU at the UAV projection"""
    rows = [
        {"altitude": h, "radius": effective_radius(h, task, 0.0, params, mean_capacity, upper_bound)}
        for h in altitudes
    ]
    return pd.DataFrame(rows, columns=["altitude", "radius"])


def overlap_area(separation: ArrayLike, radius: float) -> ArrayLike:
    """Lens area of two radius-R disks whose centers are ``separation`` apart"""
    d = np.asarray(separation, dtype=float)
    if np.any(d < 0.0):
        raise InvalidArgumentError("separation", "must be non-negative")
    if radius < 0.0:
        raise InvalidArgumentError("radius", "must be non-negative")
    if radius == 0.0:
        return _out(np.zeros_like(d))
    inside = d < 2.0 * radius
    dc = np.where(inside, d, 0.0)
    lens = 2.0 * radius**2 * np.arccos(dc / (2.0 * radius)) - 0.5 * dc * np.sqrt(4.0 * radius**2 - dc**2)
    return _out(np.where(inside, lens, 0.0))


def union_area(separation: ArrayLike, radius: float) -> ArrayLike:
    return _out(2.0 * np.pi * radius**2 - np.asarray(overlap_area(separation, radius)))


def expected_unique_capacity(separation: ArrayLike, disk_params: DiskModelParams) -> ArrayLike:
    """E[Psi(d)] ~= f_bar * lambda_c * A_union(d)"""
    area = np.asarray(union_area(separation, disk_params.radius))
    return _out(disk_params.mean_capacity * disk_params.density * area)


def capacity_derivative(separation: float, disk_params: DiskModelParams) -> float:
    """dE[Psi]/dd = f_bar * lambda_c * sqrt(4R^2 - d^2) on [0, 2R)"""
    r = disk_params.radius
    if separation < 0.0:
        raise InvalidArgumentError("separation", "must be non-negative")
    if separation >= 2.0 * r:
        raise DomainError("separation", f"{separation} >= 2R_a = {2.0 * r}; the closed form holds on [0, 2R_a) only")
    return disk_params.mean_capacity * disk_params.density * float(np.sqrt(4.0 * r**2 - separation**2))


def optimal_capacity_only_separation(disk_params: DiskModelParams) -> float:
    return max(disk_params.min_sep, 2.0 * disk_params.radius)


class CurveCheckRow(BaseModel):
    d: float
    e_psi: float
    first_diff: Optional[float] = None
    second_diff: Optional[float] = None


class CurveCheckReport(BaseModel):
    """Grid check that E[Psi(d)] is strictly increasing and strictly concave"""

    saturated: bool = False
    note: str = ""
    rows: List[CurveCheckRow] = Field(default_factory=list)
    monotonicity_violations: List[float] = Field(default_factory=list)
    concavity_violations: List[float] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.monotonicity_violations and not self.concavity_violations

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.rows], columns=["d", "e_psi", "first_diff", "second_diff"])


def verify_capacity_curve(disk_params: DiskModelParams, grid_size: int, rel_tol: float = 1e-9) -> CurveCheckReport:
    """Forward and second differences of E[Psi] on a uniform grid over [d_min, 2R_a - eps].

    ``first_diff`` of row i is E[i+1] - E[i]; ``second_diff`` of row i is
    E[i+1] - 2E[i] + E[i-1]. A difference counts as a violation unless it
    clears zero by more than ``rel_tol`` times the largest |E|.
    """
    if grid_size < 3:
        raise InvalidArgumentError("grid_size", "needs at least 3 points for a second difference")
    r = disk_params.radius
    eps = 1e-6 * r
    hi = 2.0 * r - eps
    if disk_params.min_sep >= hi:
        e_const = float(expected_unique_capacity(disk_params.min_sep, disk_params))
        return CurveCheckReport(
            saturated=True,
            note=f"d_min >= 2R_a: E[Psi] is constant at {e_const:.9g} over the feasible separations",
        )

    d = np.linspace(disk_params.min_sep, hi, grid_size)
    e = np.asarray(expected_unique_capacity(d, disk_params))
    first = np.diff(e)
    second = e[2:] - 2.0 * e[1:-1] + e[:-2]
    scale = rel_tol * max(float(np.abs(e).max()), np.finfo(float).tiny)

    rows = [
        CurveCheckRow(
            d=float(d[i]),
            e_psi=float(e[i]),
            first_diff=float(first[i]) if i < len(first) else None,
            second_diff=float(second[i - 1]) if 1 <= i <= len(second) else None,
        )
        for i in range(grid_size)
    ]
    report = CurveCheckReport(
        rows=rows,
        monotonicity_violations=[float(d[i]) for i in np.flatnonzero(first <= scale)],
        concavity_violations=[float(d[i + 1]) for i in np.flatnonzero(second >= -scale)],
    )
    logger.info(
        f"Capacity-curve check over {grid_size} points: {len(report.monotonicity_violations)} monotonicity, "
        f"{len(report.concavity_violations)} concavity violations"
    )
    return report


def monte_carlo_overlap_area(separation: float, radius: float, samples: int, seed: int) -> float:
    """Hit-or-miss estimate of the lens area, sampling the lens bounding box"""
    if separation >= 2.0 * radius:
        return 0.0
    rng = make_rng(seed)
    half_height = np.sqrt(radius**2 - (separation / 2.0) ** 2)
    lo = np.array([separation - radius, -half_height])
    hi = np.array([radius, half_height])
    pts = rng.uniform(lo, hi, size=(samples, 2))
    in_first = (pts**2).sum(axis=1) <= radius**2
    in_second = ((pts[:, 0] - separation) ** 2 + pts[:, 1] ** 2) <= radius**2
    return float((in_first & in_second).mean() * np.prod(hi - lo))


def monte_carlo_unique_capacity(
    separation: float, disk_params: DiskModelParams, trials: int, seed: int
) -> tuple[float, float]:
    """Mean and standard error of the PPP capacity inside the disk union.

    Each trial draws its own PPP on the union's bounding box from a child seed.
    """
    r = disk_params.radius
    lo = np.array([-separation / 2.0 - r, -r])
    hi = np.array([separation / 2.0 + r, r])
    box_area = float(np.prod(hi - lo))
    totals = np.empty(trials)
    for t, rng in enumerate(spawn_rngs(seed, trials)):
        count = rng.poisson(disk_params.density * box_area)
        pts = rng.uniform(lo, hi, size=(count, 2))
        left = ((pts[:, 0] + separation / 2.0) ** 2 + pts[:, 1] ** 2) <= r**2
        right = ((pts[:, 0] - separation / 2.0) ** 2 + pts[:, 1] ** 2) <= r**2
        totals[t] = disk_params.mean_capacity * np.count_nonzero(left | right)
    return float(totals.mean()), float(totals.std(ddof=1) / np.sqrt(trials))
