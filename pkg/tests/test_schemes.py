import math

import numpy as np
import pytest

from schemas.params import BeamParams, FixedBaselineParams
from schemes import SCHEMES, SchemeContext, build_schemes
from schemes.fixed import fixed_deploy_and_evaluate, fixed_placement
from schemes.greedy import greedy_deploy
from schemes.random_scheme import random_deploy
from simulation.accessibility import AccessibilityEvaluator, feasible
from utils.errors import ConfigError, InvalidArgumentError, SchemeException


@pytest.fixture
def context(compact_scenario, channel, weights, compact_constraints, fast_pso, fast_beam):
    return SchemeContext(
        scenario=compact_scenario,
        channel=channel,
        weights=weights,
        constraints=compact_constraints,
        pso=fast_pso,
        beam=fast_beam,
    )


def test_random_deploy_is_seeded_and_feasible(compact_scenario, compact_constraints):
    a = random_deploy(compact_scenario, compact_constraints, 4, seed=3)
    assert a == random_deploy(compact_scenario, compact_constraints, 4, seed=3)
    assert a != random_deploy(compact_scenario, compact_constraints, 4, seed=4)
    assert feasible(a, compact_constraints)


def test_random_deploy_rejects_zero_uavs(compact_scenario, compact_constraints):
    with pytest.raises(InvalidArgumentError):
        random_deploy(compact_scenario, compact_constraints, 0, seed=0)


def test_random_scheme_reports_its_own_layout(context):
    result = build_schemes(["random"])[0].deploy(context, 3, seed=2)
    assert result.initial == result.deployment
    assert result.trace is None
    assert result.execution_time >= 0.0


class TestFixed:
    def test_uavs_sit_at_mid_altitude_over_clusters(self, compact_scenario, compact_constraints):
        layout = fixed_placement(compact_scenario, compact_constraints, FixedBaselineParams(), 2, seed=1)
        q = layout.as_array()
        mid = 0.5 * (compact_constraints.h_min + compact_constraints.h_max)
        assert np.allclose(q[:, 2], mid)
        assert feasible(layout, compact_constraints)
        users = compact_scenario.user_positions()
        assert users[:, 0].min() - 1e-6 <= q[:, 0].min() and q[:, 0].max() <= users[:, 0].max() + 1e-6

    def test_configured_altitude(self, compact_scenario, compact_constraints):
        layout = fixed_placement(compact_scenario, compact_constraints, FixedBaselineParams(altitude=250.0), 1, seed=1)
        assert layout.positions[0].h == pytest.approx(250.0)

    def test_surplus_uavs_when_fewer_users(self, compact_scenario, compact_constraints):
        m = compact_scenario.num_users + 2
        layout = fixed_placement(compact_scenario, compact_constraints, FixedBaselineParams(), m, seed=0)
        assert layout.num_uavs == m
        assert feasible(layout, compact_constraints)

    def test_local_access_is_subset_of_full_access(self, compact_scenario, channel, weights, compact_constraints):
        params = FixedBaselineParams(local_radius=200.0)
        local = fixed_deploy_and_evaluate(compact_scenario, channel, weights, compact_constraints, params, 2, seed=1)
        layout = fixed_placement(compact_scenario, compact_constraints, params, 2, seed=1)
        full = AccessibilityEvaluator(compact_scenario, channel, weights).evaluate(layout)
        for restricted, unrestricted in zip(local.per_uav, full.per_uav):
            assert set(restricted.accessible_nodes) <= set(unrestricted.accessible_nodes)
        assert local.psi <= full.psi

    def test_infinite_radius_matches_full_evaluation(self, compact_scenario, channel, weights, compact_constraints):
        params = FixedBaselineParams(local_radius=math.inf)
        assert params.unrestricted
        local = fixed_deploy_and_evaluate(compact_scenario, channel, weights, compact_constraints, params, 2, seed=1)
        layout = fixed_placement(compact_scenario, compact_constraints, params, 2, seed=1)
        assert local == AccessibilityEvaluator(compact_scenario, channel, weights).evaluate(layout)

    @pytest.mark.parametrize("local_radius", [150.0, math.inf])
    def test_scheme_reports_what_the_module_function_reports(self, context, local_radius):
        fixed = FixedBaselineParams(local_radius=local_radius)
        context = context.model_copy(update={"fixed": fixed})
        result = build_schemes(["fixed"])[0].deploy(context, 2, seed=4)
        expected = fixed_deploy_and_evaluate(
            context.scenario, context.channel, context.weights, context.constraints, fixed, 2, seed=4
        )
        assert result.report == expected
        assert result.deployment == fixed_placement(context.scenario, context.constraints, fixed, 2, seed=4)
        assert result.initial == result.deployment


def test_greedy_never_loses_to_its_start(compact_scenario, channel, weights, compact_constraints):
    beam = BeamParams(max_passes=5)
    final, trace = greedy_deploy(compact_scenario, channel, weights, compact_constraints, beam, 2, seed=7)
    start = random_deploy(compact_scenario, compact_constraints, 2, seed=7)
    evaluator = AccessibilityEvaluator(compact_scenario, channel, weights)
    assert evaluator.utility_value(final) >= evaluator.utility_value(start)
    assert trace.stage("greedy")[0].best_utility == pytest.approx(evaluator.utility_value(start))
    assert feasible(final, compact_constraints)


def test_greedy_scheme_starts_from_random_layout(context):
    result = build_schemes(["greedy"])[0].deploy(context, 2, seed=7)
    assert result.initial == random_deploy(context.scenario, context.constraints, 2, seed=7)
    assert result.report.utility >= result.trace.stage("greedy")[0].best_utility


def test_ca3d_scheme_result(context):
    scheme = build_schemes(["ca3d"])[0]
    result = scheme.deploy(context, 2, seed=3)
    evaluator = AccessibilityEvaluator(context.scenario, context.channel, context.weights)
    assert result.report.utility >= evaluator.utility_value(result.initial)
    assert feasible(result.deployment, context.constraints)
    assert scheme.report()["execution_count"] == 1


def test_registry_builds_every_scheme():
    schemes = build_schemes(list(SCHEMES))
    assert [s.name for s in schemes] == ["ca3d", "random", "fixed", "greedy"]


def test_unknown_scheme_is_a_config_error():
    with pytest.raises(ConfigError):
        build_schemes(["random", "genetic"])


def test_zero_uavs_counts_as_error(context):
    scheme = build_schemes(["random"])[0]
    with pytest.raises(SchemeException):
        scheme.deploy(context, 0, seed=1)
    report = scheme.report()
    assert report["error_count"] == 1
    assert report["health_status"] == "degraded"
    scheme.reset_metrics()
    assert scheme.report()["error_count"] == 0


def test_unexpected_errors_are_wrapped(context, monkeypatch):
    scheme = build_schemes(["random"])[0]

    def explode(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(scheme, "_deploy_logic", explode)
    with pytest.raises(SchemeException) as exc:
        scheme.deploy(context, 2, seed=1)
    assert isinstance(exc.value.original_error, RuntimeError)
