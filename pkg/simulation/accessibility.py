"""Deployment evaluation: accessible sets, Psi, Omega, pair selection, P_succ, F(Q).

``AccessibilityEvaluator`` caches the scenario as arrays and evaluates a
deployment in one pass over the (K, M, N) latency tensor, so Psi, Omega and
P_succ of a single evaluation share the same accessible sets. The module-level
functions are thin wrappers around it.
"""

from typing import List, Optional, Set, Tuple

import numpy as np

from schemas.deployment import (
    Assignment,
    DeploymentLike,
    EvaluationReport,
    UavBreakdown,
    as_position_array,
)
from schemas.params import ChannelParams, DeploymentConstraints, UtilityWeights
from schemas.scenario import Scenario
from simulation.channel import air_ground_rate, transfer_delay
from utils.errors import InvalidArgumentError

GHZ = 1e9


class LatencyTables:
    """Latency tensor and deadline mask of one deployment"""

    def __init__(self, latency: np.ndarray, feasible: np.ndarray):
        self.latency = latency  # (K, M, N) seconds
        self.feasible = feasible  # (K, M, N) bool, deadline inclusive

    @property
    def access(self) -> np.ndarray:
        """(M, N) accessible-set membership: some user meets its deadline via (m, n)"""
        return self.feasible.any(axis=0)


class AccessibilityEvaluator:
    def __init__(
        self,
        scenario: Scenario,
        params: ChannelParams,
        weights: Optional[UtilityWeights] = None,
        local_radius: Optional[float] = None,
    ):
        self.scenario = scenario
        self.params = params
        self.weights = weights or UtilityWeights()
        # Restricts each UAV to CNs within this horizontal distance of its projection
        self.local_radius = local_radius

        self.user_xy = scenario.user_positions()
        self.node_xy = scenario.node_positions()
        self.capacity = scenario.node_capacities()
        self.bits = np.array([u.task.input_bits for u in scenario.users], dtype=float)
        self.cycles = np.array([u.task.cycles for u in scenario.users], dtype=float)
        self.deadline = np.array([u.task.deadline for u in scenario.users], dtype=float)
        self.evaluations = 0

    @property
    def num_users(self) -> int:
        return len(self.bits)

    @property
    def num_nodes(self) -> int:
        return len(self.capacity)

    def latency_tables(self, deployment: DeploymentLike) -> LatencyTables:
        q = as_position_array(deployment)
        k, m, n = self.num_users, len(q), self.num_nodes
        if k == 0 or m == 0 or n == 0:
            empty = np.zeros((k, m, n))
            return LatencyTables(empty + np.inf, empty.astype(bool))

        alt = q[:, 2]
        r_up = np.hypot(self.user_xy[:, None, 0] - q[None, :, 0], self.user_xy[:, None, 1] - q[None, :, 1])
        r_fwd = np.hypot(q[:, None, 0] - self.node_xy[None, :, 0], q[:, None, 1] - self.node_xy[None, :, 1])
        rate_up = np.asarray(air_ground_rate(r_up, alt[None, :], self.params.p_user, self.params))
        rate_fwd = np.asarray(air_ground_rate(r_fwd, alt[:, None], self.params.p_uav, self.params))

        d_up = np.asarray(transfer_delay(self.bits[:, None], rate_up))  # (K, M)
        d_fwd = np.asarray(transfer_delay(self.bits[:, None, None], rate_fwd[None, :, :]))  # (K, M, N)
        d_cmp = self.cycles[:, None] / self.capacity[None, :]  # (K, N)

        latency = d_up[:, :, None] + d_fwd + d_cmp[:, None, :]
        feasible = np.isfinite(latency) & (latency <= self.deadline[:, None, None])
        if self.local_radius is not None:
            feasible &= (r_fwd <= self.local_radius)[None, :, :]
        return LatencyTables(latency, feasible)

    def _psi(self, access: np.ndarray) -> float:
        if access.size == 0:
            return 0.0
        return float(self.capacity[access.any(axis=0)].sum()) / GHZ

    def _overlap_matrix(self, access: np.ndarray) -> np.ndarray:
        weighted = access * (self.capacity / GHZ)[None, :]
        return weighted @ access.T.astype(float)

    def _omega(self, access: np.ndarray) -> float:
        m = access.shape[0]
        if m < 2:
            return 0.0
        overlap = self._overlap_matrix(access)
        upper = overlap[np.triu_indices(m, k=1)]
        return float(2.0 * upper.sum() / (m * (m - 1)))

    def _selection(self, tables: LatencyTables) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-user flat argmin over feasible (m, n); row-major order breaks ties by m then n"""
        k, m, n = tables.latency.shape
        masked = np.where(tables.feasible, tables.latency, np.inf).reshape(k, m * n)
        if m * n == 0:
            return np.zeros(k, dtype=int), np.full(k, np.inf), np.zeros(k, dtype=bool)
        flat = np.argmin(masked, axis=1)
        best = masked[np.arange(k), flat]
        # A_k already holds only deadline-feasible pairs; the indicator re-checks it
        success = np.isfinite(best) & (best <= self.deadline)
        return flat, best, success

    def utility_value(self, deployment: DeploymentLike) -> float:
        """F(Q) alone; the hot path of both optimizer stages"""
        self.evaluations += 1
        tables = self.latency_tables(deployment)
        access = tables.access
        _, _, success = self._selection(tables)
        p_succ = float(success.mean()) if self.num_users else 0.0
        w = self.weights
        return w.alpha * self._psi(access) + w.beta * p_succ - w.gamma * self._omega(access)

    def evaluate(self, deployment: DeploymentLike) -> EvaluationReport:
        self.evaluations += 1
        q = as_position_array(deployment)
        tables = self.latency_tables(q)
        access = tables.access
        n_nodes = self.num_nodes

        flat, best, success = self._selection(tables)
        assignments: List[Optional[Assignment]] = []
        served = np.zeros(len(q), dtype=int)
        for k in range(self.num_users):
            if not success[k]:
                assignments.append(None)
                continue
            m, n = divmod(int(flat[k]), n_nodes)
            served[m] += 1
            assignments.append(Assignment(uav_id=m + 1, node_id=n + 1, latency=float(best[k])))

        per_uav = [
            UavBreakdown(
                uav_id=m + 1,
                accessible_nodes=[int(i) + 1 for i in np.flatnonzero(access[m])] if access.size else [],
                accessible_capacity_ghz=float(self.capacity[access[m]].sum()) / GHZ if access.size else 0.0,
                served_users=int(served[m]),
            )
            for m in range(len(q))
        ]

        psi = self._psi(access)
        omega = self._omega(access)
        p_succ = float(success.mean()) if self.num_users else 0.0
        w = self.weights
        return EvaluationReport(
            psi=psi,
            omega=omega,
            p_succ=p_succ,
            utility=w.alpha * psi + w.beta * p_succ - w.gamma * omega,
            per_user_assignment=assignments,
            per_uav=per_uav,
        )


def accessible_set(uav_index: int, deployment: DeploymentLike, scenario: Scenario, params: ChannelParams) -> Set[int]:
    """CN ids (1-based) in C_m for the 0-based UAV index ``uav_index``"""
    q = as_position_array(deployment)
    if not 0 <= uav_index < len(q):
        raise InvalidArgumentError("uav_index", f"{uav_index} not in [0, {len(q)})")
    access = AccessibilityEvaluator(scenario, params).latency_tables(q).access
    return {int(n) + 1 for n in np.flatnonzero(access[uav_index])}


def unique_capacity(deployment: DeploymentLike, scenario: Scenario, params: ChannelParams) -> float:
    evaluator = AccessibilityEvaluator(scenario, params)
    return evaluator._psi(evaluator.latency_tables(deployment).access)


def pairwise_overlap(
    m: int, m_other: int, deployment: DeploymentLike, scenario: Scenario, params: ChannelParams
) -> float:
    """O_{m,m'} in GHz"""
    if m == m_other:
        raise InvalidArgumentError("m_other", "pairwise overlap needs two distinct UAVs")
    q = as_position_array(deployment)
    for name, idx in (("m", m), ("m_other", m_other)):
        if not 0 <= idx < len(q):
            raise InvalidArgumentError(name, f"{idx} not in [0, {len(q)})")
    evaluator = AccessibilityEvaluator(scenario, params)
    access = evaluator.latency_tables(q).access
    if access.size == 0:
        return 0.0
    return float(evaluator._overlap_matrix(access)[m, m_other])


def overlap_penalty(deployment: DeploymentLike, scenario: Scenario, params: ChannelParams) -> float:
    evaluator = AccessibilityEvaluator(scenario, params)
    return evaluator._omega(evaluator.latency_tables(deployment).access)


def select_pair(
    user_index: int, deployment: DeploymentLike, scenario: Scenario, params: ChannelParams
) -> Optional[Tuple[int, int, float]]:
    """(m, n, latency) with 0-based indices, or None when A_k is empty"""
    if not 0 <= user_index < scenario.num_users:
        raise InvalidArgumentError("user_index", f"{user_index} not in [0, {scenario.num_users})")
    evaluator = AccessibilityEvaluator(scenario, params)
    tables = evaluator.latency_tables(deployment)
    flat, best, success = evaluator._selection(tables)
    if not success[user_index]:
        return None
    m, n = divmod(int(flat[user_index]), evaluator.num_nodes)
    return m, n, float(best[user_index])


def success_probability(deployment: DeploymentLike, scenario: Scenario, params: ChannelParams) -> float:
    if scenario.num_users == 0:
        raise InvalidArgumentError("scenario", "success probability needs at least one user")
    evaluator = AccessibilityEvaluator(scenario, params)
    _, _, success = evaluator._selection(evaluator.latency_tables(deployment))
    return float(success.mean())


def utility(
    deployment: DeploymentLike, scenario: Scenario, params: ChannelParams, weights: UtilityWeights
) -> EvaluationReport:
    return AccessibilityEvaluator(scenario, params, weights).evaluate(deployment)


def feasible(deployment: DeploymentLike, constraints: DeploymentConstraints, tol: float = 1e-9) -> bool:
    """Altitude bounds, region bounds and pairwise 3D separation"""
    q = as_position_array(deployment)
    region = constraints.region
    if np.any(q[:, 2] < constraints.h_min - tol) or np.any(q[:, 2] > constraints.h_max + tol):
        return False
    if np.any(q[:, :2] < region.lower - tol) or np.any(q[:, :2] > region.upper + tol):
        return False
    if len(q) > 1 and constraints.d_min > 0.0:
        diff = q[:, None, :] - q[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        if np.any(dist[np.triu_indices(len(q), k=1)] < constraints.d_min - tol):
            return False
    return True
