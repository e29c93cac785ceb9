import os
import time
import traceback
from datetime import datetime
from typing import Any, Dict, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

from orchestration.orchestrator import ExperimentCell, ExperimentOrchestrator
from schemas.deployment import Deployment, EvaluationReport
from schemas.params import (
    BeamParams,
    ChannelParams,
    DeploymentConstraints,
    DiskModelParams,
    FixedBaselineParams,
    PsoParams,
    UtilityWeights,
)
from schemas.scenario import Scenario
from schemes import SCHEMES, SchemeContext, SchemeResult, build_schemes
from simulation.accessibility import AccessibilityEvaluator
from simulation.two_uav import (
    capacity_derivative,
    expected_unique_capacity,
    optimal_capacity_only_separation,
    overlap_area,
    union_area,
)
from utils.errors import InvalidArgumentError, OrchestrationException, ProjectionError, SchemeException
from utils.logger import Ca3dLogger


class EvaluateRequest(BaseModel):
    scenario: Scenario
    deployment: Deployment
    channel: ChannelParams = Field(default_factory=ChannelParams)
    weights: UtilityWeights = Field(default_factory=UtilityWeights)
    local_radius: Optional[float] = Field(None, gt=0.0, description="Restrict CNs to this ground distance (m)")


class DeployRequest(BaseModel):
    scenario: Scenario
    scheme: str = Field("ca3d", description=f"One of {sorted(SCHEMES)}")
    num_uavs: int = Field(..., ge=1)
    seed: int = Field(0, ge=0)
    channel: ChannelParams = Field(default_factory=ChannelParams)
    weights: UtilityWeights = Field(default_factory=UtilityWeights)
    # None uses the default bounds over the scenario region
    constraints: Optional[DeploymentConstraints] = None
    pso: PsoParams = Field(default_factory=PsoParams)
    beam: BeamParams = Field(default_factory=BeamParams)
    fixed: FixedBaselineParams = Field(default_factory=FixedBaselineParams)

    @model_validator(mode="after")
    def _known_scheme(self) -> "DeployRequest":
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme '{self.scheme}'; choose from {sorted(SCHEMES)}")
        return self

    def context(self) -> SchemeContext:
        constraints = self.constraints or DeploymentConstraints(region=self.scenario.region)
        return SchemeContext(
            scenario=self.scenario,
            channel=self.channel,
            weights=self.weights,
            constraints=constraints,
            pso=self.pso,
            beam=self.beam,
            fixed=self.fixed,
        )


class DeployResponse(BaseModel):
    success: bool
    execution_time: float
    timestamp: str
    request_id: Optional[str]
    result: SchemeResult


class TwoUavRequest(BaseModel):
    disk: DiskModelParams
    separation: float = Field(..., ge=0.0)


class TwoUavResponse(BaseModel):
    overlap_area: float
    union_area: float
    expected_capacity_ghz: float
    # None once the disks no longer overlap
    capacity_derivative: Optional[float]
    optimal_separation: float


class HealthResponse(BaseModel):
    status: str
    timestamp: str
    orchestrator_health: Dict[str, Any]
    scheme_health: Dict[str, Any]
    performance_metrics: Dict[str, Any]


class ErrorResponse(BaseModel):
    error: str
    detail: str
    timestamp: str
    request_id: Optional[str]


def _no_seed_context(seed: int) -> SchemeContext:
    raise OrchestrationException("The service runs request-scoped scenarios only")


app = FastAPI(
    title="CA3D Deployment API",
    description="UAV gateway deployment and accessibility evaluation over a computing power network",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

logger = Ca3dLogger().get_logger()
orchestrator = ExperimentOrchestrator(build_schemes(SCHEMES), _no_seed_context)


def _error(request, status_code: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content=ErrorResponse(
            error=error,
            detail=detail,
            timestamp=datetime.now().isoformat(),
            request_id=getattr(request.state, "request_id", None),
        ).model_dump(),
    )


@app.exception_handler(HTTPException)
async def http_exception_handler(request, exc):
    logger.error(f"HTTP exception: {exc.status_code} - {exc.detail}")
    return _error(request, exc.status_code, f"HTTP {exc.status_code}", str(exc.detail))


@app.exception_handler(InvalidArgumentError)
async def invalid_argument_handler(request, exc):
    logger.warning(f"Invalid argument: {str(exc)}")
    return _error(request, 400, "Invalid Argument", str(exc))


@app.exception_handler(OrchestrationException)
async def orchestration_exception_handler(request, exc):
    logger.error(f"Orchestration exception: {str(exc)}")
    return _error(request, 500, "Orchestration Error", str(exc))


@app.exception_handler(Exception)
async def general_exception_handler(request, exc):
    logger.error(f"Unexpected exception: {traceback.format_exc()}")
    return _error(request, 500, "Internal Server Error", "An unexpected error occurred")


@app.middleware("http")
async def request_tracking_middleware(request, call_next):
    start_time = time.time()
    request_id = f"req_{int(start_time * 1000)}"
    request.state.request_id = request_id

    logger.info(f"Request {request_id} started: {request.method} {request.url}")
    response = await call_next(request)
    logger.info(f"Request {request_id} completed in {time.time() - start_time:.3f}s")

    response.headers["X-Request-ID"] = request_id
    return response


@app.get("/", response_model=Dict[str, Any])
async def read_root():
    return {
        "message": "CA3D Deployment API",
        "version": "1.0.0",
        "schemes": sorted(SCHEMES),
        "endpoints": {
            "evaluate": "/evaluate - Psi, Omega, P_succ and F of a given deployment",
            "deploy": "/deploy - run a deployment scheme on a scenario",
            "analytic": "/analytic/two-uav - two-UAV disk model quantities",
            "health": "/health - system health check",
            "schemes": "/schemes - scheme status and reports",
            "metrics": "/metrics - performance metrics",
            "docs": "/docs - API documentation",
        },
        "timestamp": datetime.now().isoformat(),
    }


@app.post("/evaluate", response_model=EvaluationReport)
def evaluate(request: EvaluateRequest):
    evaluator = AccessibilityEvaluator(
        request.scenario, request.channel, request.weights, local_radius=request.local_radius
    )
    report = evaluator.evaluate(request.deployment)
    logger.info(f"Evaluated {request.deployment.num_uavs} UAVs: F={report.utility:.6g}, P_succ={report.p_succ:.4f}")
    return report


@app.post("/deploy", response_model=DeployResponse)
def deploy(request: DeployRequest, http_request: Request):
    start_time = time.time()
    cell = ExperimentCell(scheme=request.scheme, num_uavs=request.num_uavs, seed=request.seed)
    try:
        run = orchestrator.run([cell], continue_on_error=False, context=request.context())
    except OrchestrationException as e:
        cause = e.__cause__
        # scheme rejected the input rather than crashing
        if isinstance(cause, SchemeException) and (
            cause.original_error is None or isinstance(cause.original_error, (InvalidArgumentError, ProjectionError))
        ):
            raise HTTPException(status_code=422, detail=str(cause))
        raise

    return DeployResponse(
        success=True,
        execution_time=time.time() - start_time,
        timestamp=datetime.now().isoformat(),
        request_id=getattr(http_request.state, "request_id", None),
        result=run.outcomes[0].result,
    )


@app.post("/analytic/two-uav", response_model=TwoUavResponse)
async def analytic_two_uav(request: TwoUavRequest):
    disk, d = request.disk, request.separation
    derivative = capacity_derivative(d, disk) if d < 2.0 * disk.radius else None
    return TwoUavResponse(
        overlap_area=float(overlap_area(d, disk.radius)),
        union_area=float(union_area(d, disk.radius)),
        expected_capacity_ghz=float(expected_unique_capacity(d, disk)),
        capacity_derivative=derivative,
        optimal_separation=optimal_capacity_only_separation(disk),
    )


@app.get("/health", response_model=HealthResponse)
async def health_check():
    orchestrator_health = orchestrator.get_health_status()
    scheme_reports = orchestrator.get_scheme_reports()

    overall_status = "healthy"
    if orchestrator_health["orchestrator_status"] != "healthy":
        overall_status = "degraded"
    if any(status != "healthy" for status in orchestrator_health["scheme_status"].values()):
        overall_status = "degraded"

    return HealthResponse(
        status=overall_status,
        timestamp=datetime.now().isoformat(),
        orchestrator_health=orchestrator_health,
        scheme_health=scheme_reports,
        performance_metrics=orchestrator_health["performance_metrics"],
    )


@app.get("/schemes", response_model=Dict[str, Any])
async def get_scheme_status():
    status = orchestrator.get_health_status()["scheme_status"]
    return {
        "scheme_reports": orchestrator.get_scheme_reports(),
        "scheme_status": status,
        "total_schemes": len(orchestrator.schemes),
        "healthy_schemes": sum(1 for s in status.values() if s == "healthy"),
        "timestamp": datetime.now().isoformat(),
    }


@app.get("/metrics", response_model=Dict[str, Any])
async def get_metrics():
    health_status = orchestrator.get_health_status()
    return {
        "performance_metrics": health_status["performance_metrics"],
        "orchestrator_status": health_status["orchestrator_status"],
        "scheme_metrics": orchestrator.get_scheme_reports(),
        "timestamp": datetime.now().isoformat(),
    }


@app.post("/reset-metrics")
async def reset_metrics():
    orchestrator.reset_metrics()
    return {"message": "Metrics reset successfully", "timestamp": datetime.now().isoformat()}


def main() -> None:
    import uvicorn

    uvicorn.run(app, host=os.getenv("CA3D_API_HOST", "0.0.0.0"), port=int(os.getenv("CA3D_API_PORT", "8000")))


if __name__ == "__main__":
    main()
