import threading
import traceback
from abc import ABC, abstractmethod
from datetime import datetime
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from schemas.deployment import Deployment, EvaluationReport, OptimizerTrace
from schemas.params import (
    BeamParams,
    ChannelParams,
    DeploymentConstraints,
    FixedBaselineParams,
    PsoParams,
    UtilityWeights,
)
from schemas.scenario import Scenario
from utils.errors import SchemeException
from utils.logger import Ca3dLogger


class SchemeContext(BaseModel):
    """Everything a scheme needs besides M and the seed"""

    model_config = ConfigDict(frozen=True)

    scenario: Scenario
    channel: ChannelParams = Field(default_factory=ChannelParams)
    weights: UtilityWeights = Field(default_factory=UtilityWeights)
    constraints: DeploymentConstraints = Field(default_factory=DeploymentConstraints)
    pso: PsoParams = Field(default_factory=PsoParams)
    beam: BeamParams = Field(default_factory=BeamParams)
    fixed: FixedBaselineParams = Field(default_factory=FixedBaselineParams)


class SchemeResult(BaseModel):
    scheme: str
    num_uavs: int
    seed: int
    initial: Deployment
    deployment: Deployment
    report: EvaluationReport
    trace: Optional[OptimizerTrace] = None
    execution_time: float = 0.0


class BaseScheme(ABC):
    """Deployment scheme with validation, timing, logging and health counters"""

    def __init__(self, name: str):
        self.name = name
        self.logger = Ca3dLogger().get_logger()
        self.execution_count = 0
        self.error_count = 0
        self.last_execution_time: Optional[datetime] = None
        # parallel sweeps call deploy from executor threads
        self._counter_lock = threading.Lock()

    def validate_input(self, context: SchemeContext, num_uavs: int) -> bool:
        if num_uavs < 1:
            raise SchemeException(self.name, f"at least one UAV is required, got M={num_uavs}")
        if context.scenario.num_users == 0:
            raise SchemeException(self.name, "scenario has no ground users to serve")
        if context.constraints.region != context.scenario.region:
            self.logger.warning(f"Scheme '{self.name}': constraint region differs from the scenario region")
        return True

    @abstractmethod
    def _deploy_logic(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        """Core placement logic - to be implemented by subclasses"""

    def deploy(self, context: SchemeContext, num_uavs: int, seed: int) -> SchemeResult:
        start_time = datetime.now()
        try:
            self.validate_input(context, num_uavs)
            self.logger.info(f"Starting scheme '{self.name}' with M={num_uavs}, seed={seed}")

            result = self._deploy_logic(context, num_uavs, seed)
            elapsed = (datetime.now() - start_time).total_seconds()
            result = result.model_copy(update={"execution_time": elapsed})

            with self._counter_lock:
                self.execution_count += 1
                self.last_execution_time = datetime.now()
            Ca3dLogger().log_scheme_run(self.name, num_uavs, seed, result.report.to_row(), elapsed)
            return result

        except SchemeException:
            self._count_error()
            self.logger.error(f"Scheme '{self.name}' validation error: {traceback.format_exc()}")
            raise

        except Exception as e:
            self._count_error()
            self.logger.error(f"Scheme '{self.name}' unexpected error: {traceback.format_exc()}")
            raise SchemeException(self.name, f"Unexpected error during deployment: {str(e)}", e)

    def _count_error(self) -> None:
        with self._counter_lock:
            self.error_count += 1

    def report(self) -> dict:
        attempts = self.execution_count + self.error_count
        error_rate = self.error_count / max(attempts, 1)
        return {
            "scheme": self.name,
            "execution_count": self.execution_count,
            "error_count": self.error_count,
            "error_rate": error_rate,
            "last_execution": self.last_execution_time.isoformat() if self.last_execution_time else None,
            "health_status": "healthy" if error_rate < 0.1 else "degraded",
        }

    def reset_metrics(self) -> None:
        with self._counter_lock:
            self.execution_count = 0
            self.error_count = 0
            self.last_execution_time = None
