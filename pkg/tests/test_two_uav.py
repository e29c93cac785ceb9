import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schemas.params import ChannelParams, DiskModelParams
from schemas.scenario import Task
from simulation.two_uav import (
    DEFAULT_SEARCH_BOUND,
    altitude_radius_profile,
    capacity_derivative,
    effective_radius,
    expected_unique_capacity,
    monte_carlo_overlap_area,
    monte_carlo_unique_capacity,
    optimal_capacity_only_separation,
    overlap_area,
    representative_latency,
    union_area,
    verify_capacity_curve,
)
from utils.errors import DomainError, InvalidArgumentError

UNIT_DISK = DiskModelParams(radius=1.0, density=1.0, mean_capacity=1.0)


def test_overlap_area_endpoints():
    assert overlap_area(0.0, 3.0) == pytest.approx(math.pi * 9.0)
    assert overlap_area(6.0, 3.0) == 0.0
    assert overlap_area(10.0, 3.0) == 0.0


def test_overlap_area_reference_value():
    # 2 acos(1/2) - sqrt(3)/2
    assert overlap_area(1.0, 1.0) == pytest.approx(1.228370, rel=1e-6)


def test_overlap_area_rejects_negative_inputs():
    with pytest.raises(InvalidArgumentError):
        overlap_area(-1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        overlap_area(1.0, -1.0)


def test_zero_radius_has_no_area():
    assert overlap_area(0.0, 0.0) == 0.0
    assert union_area(5.0, 0.0) == 0.0


@given(d=st.floats(min_value=0.0, max_value=5.0), r=st.floats(min_value=0.01, max_value=2.0))
def test_union_plus_overlap_is_two_disks(d, r):
    assert union_area(d, r) + overlap_area(d, r) == pytest.approx(2.0 * math.pi * r * r)


def test_array_separation_broadcasts():
    d = np.array([0.0, 1.0, 2.0, 3.0])
    area = overlap_area(d, 1.0)
    assert area.shape == (4,)
    assert np.all(np.diff(area) <= 0.0)


def test_expected_capacity_unit_disk_at_zero_separation():
    assert expected_unique_capacity(0.0, UNIT_DISK) == pytest.approx(math.pi)


def test_expected_capacity_saturates_beyond_two_radii():
    params = DiskModelParams(radius=100.0, density=1e-4, mean_capacity=6.0)
    saturated = expected_unique_capacity(np.array([200.0, 350.0, 1000.0]), params)
    assert np.allclose(saturated, 6.0 * 1e-4 * 2.0 * math.pi * 100.0**2)


def test_derivative_at_zero_separation():
    assert capacity_derivative(0.0, UNIT_DISK) == pytest.approx(2.0)


@pytest.mark.parametrize("d", [0.05, 0.5, 1.0, 1.5, 1.9])
def test_derivative_matches_central_difference(d):
    h = 1e-6
    numeric = (expected_unique_capacity(d + h, UNIT_DISK) - expected_unique_capacity(d - h, UNIT_DISK)) / (2.0 * h)
    assert capacity_derivative(d, UNIT_DISK) == pytest.approx(numeric, rel=1e-6)


def test_derivative_outside_closed_form_domain():
    with pytest.raises(DomainError):
        capacity_derivative(2.0, UNIT_DISK)
    with pytest.raises(InvalidArgumentError):
        capacity_derivative(-0.5, UNIT_DISK)


@pytest.mark.parametrize(
    "radius, min_sep, expected",
    [(500.0, 100.0, 1000.0), (500.0, 1200.0, 1200.0), (0.0, 50.0, 50.0)],
)
def test_capacity_only_separation(radius, min_sep, expected):
    params = DiskModelParams(radius=radius, density=1e-5, mean_capacity=6.0, min_sep=min_sep)
    assert optimal_capacity_only_separation(params) == pytest.approx(expected)


class TestCapacityCurveCheck:
    def test_increasing_and_concave_on_grid(self):
        params = DiskModelParams(radius=1.0, density=1.0, mean_capacity=1.0, min_sep=0.1)
        report = verify_capacity_curve(params, 100)
        assert report.passed
        assert not report.saturated
        assert len(report.rows) == 100
        assert report.rows[0].d == pytest.approx(0.1)
        assert report.rows[0].second_diff is None
        assert report.rows[-1].first_diff is None

    def test_realistic_scale_grid(self):
        radius = 450.0
        params = DiskModelParams(radius=radius, density=60 / 16e6, mean_capacity=6.0, min_sep=0.05 * radius)
        assert verify_capacity_curve(params, 200).passed

    def test_saturated_when_min_separation_exceeds_diameter(self):
        params = DiskModelParams(radius=1.0, density=1.0, mean_capacity=1.0, min_sep=3.0)
        report = verify_capacity_curve(params, 50)
        assert report.saturated
        assert report.passed
        assert report.rows == []
        assert "constant" in report.note

    def test_grid_needs_three_points(self):
        with pytest.raises(InvalidArgumentError):
            verify_capacity_curve(UNIT_DISK, 2)

    def test_frame_columns(self):
        frame = verify_capacity_curve(UNIT_DISK, 5).to_frame()
        assert list(frame.columns) == ["d", "e_psi", "first_diff", "second_diff"]
        assert len(frame) == 5


class TestEffectiveRadius:
    def test_brackets_the_deadline(self, channel):
        task = Task()
        radius = effective_radius(150.0, task, 0.0, channel)
        assert 0.0 < radius < DEFAULT_SEARCH_BOUND
        inside = representative_latency(radius - 0.2, 150.0, task, 0.0, channel, 6.0e9)
        outside = representative_latency(radius + 0.2, 150.0, task, 0.0, channel, 6.0e9)
        assert inside <= task.deadline < outside

    @pytest.mark.parametrize("altitude, user_dist", [(100.0, 0.0), (200.0, 0.0), (250.0, 100.0)])
    def test_agrees_with_one_meter_grid_scan(self, channel, altitude, user_dist):
        task = Task()
        grid = np.arange(0.0, DEFAULT_SEARCH_BOUND + 1.0, 1.0)
        latency = representative_latency(grid, altitude, task, user_dist, channel, 6.0e9)
        reachable = grid[latency <= task.deadline]
        assert reachable.size > 0
        radius = effective_radius(altitude, task, user_dist, channel)
        assert abs(radius - reachable.max()) <= 1.0

    def test_unreachable_deadline_gives_zero(self, channel):
        assert effective_radius(150.0, Task(deadline=1e-3), 0.0, channel) == 0.0

    def test_generous_deadline_hits_search_bound(self, channel):
        assert effective_radius(150.0, Task(deadline=1e6), 0.0, channel, upper_bound=500.0) == 500.0

    def test_rejects_ground_level(self, channel):
        with pytest.raises(InvalidArgumentError):
            effective_radius(0.0, Task(), 0.0, channel)

    def test_far_user_shrinks_radius(self, channel):
        task = Task()
        assert effective_radius(150.0, task, 300.0, channel) <= effective_radius(150.0, task, 0.0, channel)

    def test_profile_table(self):
        profile = altitude_radius_profile([100.0, 200.0, 300.0], Task(), ChannelParams())
        assert list(profile.columns) == ["altitude", "radius"]
        assert list(profile["altitude"]) == [100.0, 200.0, 300.0]
        assert (profile["radius"] >= 0.0).all()


def test_monte_carlo_overlap_matches_closed_form():
    estimate = monte_carlo_overlap_area(1.0, 1.0, samples=200_000, seed=5)
    assert estimate == pytest.approx(overlap_area(1.0, 1.0), abs=0.01)
    assert monte_carlo_overlap_area(2.5, 1.0, samples=10, seed=5) == 0.0


def test_monte_carlo_capacity_within_standard_errors():
    params = DiskModelParams(radius=1.0, density=50.0, mean_capacity=1.0)
    mean, se = monte_carlo_unique_capacity(1.0, params, trials=400, seed=21)
    assert se > 0.0
    assert abs(mean - expected_unique_capacity(1.0, params)) < 4.0 * se
