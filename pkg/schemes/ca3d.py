from optimizer.ca3d import ca3d_optimize
from schemes.base import BaseScheme, SchemeContext, SchemeResult
from schemes.random_scheme import random_deploy


class Ca3dScheme(BaseScheme):
    """CA3D warm-started from the run's random layout.

    The random layout seeds the first PSO particle, so the result never
    scores below the "before" layout reported next to it.
    """

    def __init__(self, name: str = "ca3d"):
        super().__init__(name)

    def _deploy_logic(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        initial = random_deploy(context.scenario, context.constraints, num_uavs, seed)
        pso = context.pso.model_copy(update={"seed": seed})
        deployment, report, trace = ca3d_optimize(
            context.scenario,
            context.channel,
            context.weights,
            context.constraints,
            pso,
            context.beam,
            num_uavs,
            initial=initial,
        )
        return SchemeResult(
            scheme=self.name,
            num_uavs=num_uavs,
            seed=seed,
            initial=initial,
            deployment=deployment,
            report=report,
            trace=trace,
        )
