"""Air-ground channel and end-to-end latency model.

All functions accept scalars or numpy arrays (broadcasting) so the
deployment evaluator can reuse them on whole latency tensors. Angles are in
degrees throughout. A zero rate is reported as an infinite delay rather than
an error, which keeps accessibility evaluation total.
"""

from typing import Union

import numpy as np

from schemas.deployment import UavPosition
from schemas.params import ChannelParams
from schemas.scenario import ComputingNode, GroundUser, Task
from utils.errors import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]


def _result(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def elevation_angle_deg(horizontal_dist: ArrayLike, altitude: ArrayLike) -> ArrayLike:
    """theta = (180/pi) * arctan(h / r), in (0, 90]"""
    h = np.asarray(altitude, dtype=float)
    r = np.asarray(horizontal_dist, dtype=float)
    if np.any(h <= 0.0):
        raise InvalidArgumentError("altitude", "must be strictly positive")
    if np.any(r < 0.0):
        raise InvalidArgumentError("horizontal_dist", "must be non-negative")
    return _result(np.degrees(np.arctan2(h, r)))


def los_probability(theta_deg: ArrayLike, params: ChannelParams) -> ArrayLike:
    theta = np.asarray(theta_deg, dtype=float)
    return _result(1.0 / (1.0 + params.a * np.exp(-params.b * (theta - params.a))))


def channel_gain(link_dist: ArrayLike, theta_deg: ArrayLike, params: ChannelParams) -> ArrayLike:
    """Average large-scale gain: beta0 * d^-alpha * [P_LoS + eta * (1 - P_LoS)]"""
    d = np.asarray(link_dist, dtype=float)
    if np.any(d <= 0.0):
        raise InvalidArgumentError("link_dist", "must be strictly positive (gain is singular at 0)")
    p_los = np.asarray(los_probability(theta_deg, params))
    return _result(params.beta0 * d ** (-params.pathloss_exp) * (p_los + params.nlos_atten * (1.0 - p_los)))


def link_rate(tx_power: ArrayLike, gain: ArrayLike, params: ChannelParams) -> ArrayLike:
    """Shannon rate B * log2(1 + p*g / sigma^2) in bits/s"""
    snr = np.asarray(tx_power, dtype=float) * np.asarray(gain, dtype=float) / params.noise
    return _result(params.bandwidth * np.log2(1.0 + snr))


def transfer_delay(bits: ArrayLike, rate: ArrayLike) -> ArrayLike:
    """bits / rate, with a zero rate giving +inf"""
    bits_arr = np.asarray(bits, dtype=float)
    rate_arr = np.asarray(rate, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        delay = np.where(rate_arr > 0.0, bits_arr / np.where(rate_arr > 0.0, rate_arr, 1.0), np.inf)
    return _result(delay)


def air_ground_rate(horizontal_dist: ArrayLike, altitude: ArrayLike, tx_power: float, params: ChannelParams) -> ArrayLike:
    """Rate of a ground terminal <-> UAV link given the horizontal offset and altitude"""
    r = np.asarray(horizontal_dist, dtype=float)
    h = np.asarray(altitude, dtype=float)
    theta = elevation_angle_deg(r, h)
    gain = channel_gain(np.hypot(r, h), theta, params)
    return link_rate(tx_power, gain, params)


def _horizontal(a: tuple, uav: UavPosition) -> float:
    return float(np.hypot(a[0] - uav.x, a[1] - uav.y))


def uplink_delay(user: GroundUser, uav: UavPosition, params: ChannelParams) -> float:
    rate = air_ground_rate(_horizontal(user.position, uav), uav.h, params.p_user, params)
    return float(transfer_delay(user.task.input_bits, rate))


def forward_delay(task: Task, uav: UavPosition, cn: ComputingNode, params: ChannelParams) -> float:
    rate = air_ground_rate(_horizontal(cn.position, uav), uav.h, params.p_uav, params)
    return float(transfer_delay(task.input_bits, rate))


def compute_delay(task: Task, cn: ComputingNode) -> float:
    return task.cycles / cn.capacity


def end_to_end_latency(user: GroundUser, uav: UavPosition, cn: ComputingNode, params: ChannelParams) -> float:
    """D_up + D_fwd + D_cmp; +inf as soon as one leg is +inf"""
    return (
        uplink_delay(user, uav, params)
        + forward_delay(user.task, uav, cn, params)
        + compute_delay(user.task, cn)
    )
