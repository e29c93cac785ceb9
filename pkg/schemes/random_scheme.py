from optimizer.projection import project_array
from schemas.deployment import Deployment
from schemas.params import DeploymentConstraints
from schemas.scenario import Scenario
from schemes.base import BaseScheme, SchemeContext, SchemeResult
from simulation.accessibility import AccessibilityEvaluator
from utils.errors import InvalidArgumentError
from utils.rng import make_rng

RANDOM_STREAM = 2


def random_deploy(scenario: Scenario, constraints: DeploymentConstraints, num_uavs: int, seed: int) -> Deployment:
    """Uniform over region x [h_min, h_max], then projected"""
    if num_uavs < 1:
        raise InvalidArgumentError("M", "at least one UAV is required")
    rng = make_rng(seed, RANDOM_STREAM)
    lo = [*constraints.region.lower, constraints.h_min]
    hi = [*constraints.region.upper, constraints.h_max]
    return Deployment.from_array(project_array(rng.uniform(lo, hi, size=(num_uavs, 3)), constraints))


class RandomScheme(BaseScheme):
    def __init__(self, name: str = "random"):
        super().__init__(name)

    def _deploy_logic(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        deployment = random_deploy(context.scenario, context.constraints, num_uavs, seed)
        report = AccessibilityEvaluator(context.scenario, context.channel, context.weights).evaluate(deployment)
        return SchemeResult(
            scheme=self.name, num_uavs=num_uavs, seed=seed, initial=deployment, deployment=deployment, report=report
        )
