"""Sweep drivers behind the ``simulate`` command.

Result tables hold only seeded quantities so re-runs are byte-identical;
wall-clock times go to a separate timings table.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from orchestration.orchestrator import RESULT_COLUMNS, TIMING_COLUMNS, ExperimentCell, ExperimentOrchestrator
from schemas.config import ExperimentConfig
from schemas.deployment import Deployment, EvaluationReport
from schemes import SchemeContext, SchemeResult, build_schemes
from simulation.accessibility import AccessibilityEvaluator
from utils.errors import ConfigError, ScenarioParseError, ScenarioValidationError
from utils.logger import Ca3dLogger

logger = Ca3dLogger().get_logger()

SPACING_COLUMNS = ["altitude", "spacing", "seed", *EvaluationReport.CSV_COLUMNS, "status"]
FLOAT_FORMAT = "%.9g"

PathLike = Union[str, Path]


@dataclass
class SweepTables:
    results: pd.DataFrame
    timings: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=TIMING_COLUMNS))
    failed_cells: int = 0


def context_factory(config: ExperimentConfig) -> Callable[[int], SchemeContext]:
    constraints = config.deployment_constraints()

    def build(seed: int) -> SchemeContext:
        return SchemeContext(
            scenario=config.scenario.build(seed),
            channel=config.channel,
            weights=config.weights,
            constraints=constraints,
            pso=config.pso,
            beam=config.beam,
            fixed=config.fixed,
        )

    return build


def run_spacing_sweep(config: ExperimentConfig) -> pd.DataFrame:
    """Two UAVs at center +/- (d/2, 0) for every (altitude, spacing, seed)"""
    constraints = config.deployment_constraints()
    cx, cy = config.scenario.center
    rows = []
    for seed in config.seeds:
        evaluator = AccessibilityEvaluator(config.scenario.build(seed), config.channel, config.weights)
        for altitude in config.sweep.altitudes:
            for spacing in config.sweep.spacings:
                row = {"altitude": altitude, "spacing": spacing, "seed": seed}
                if spacing < constraints.d_min:
                    logger.warning(f"Spacing {spacing} m is below d_min={constraints.d_min} m; point skipped")
                    rows.append({**row, **{c: np.nan for c in EvaluationReport.CSV_COLUMNS}, "status": "skipped"})
                    Ca3dLogger().log_sweep_cell("spacing", (altitude, spacing, seed), "skipped")
                    continue
                q = np.array([[cx - spacing / 2.0, cy, altitude], [cx + spacing / 2.0, cy, altitude]])
                report = evaluator.evaluate(q)
                rows.append({**row, **report.to_row(), "status": "ok"})
                Ca3dLogger().log_sweep_cell("spacing", (altitude, spacing, seed), "ok")

    table = pd.DataFrame(rows, columns=SPACING_COLUMNS)
    return table.sort_values(["altitude", "spacing", "seed"], kind="stable").reset_index(drop=True)


def run_uav_count_sweep(config: ExperimentConfig, parallel: bool = False) -> SweepTables:
    schemes = build_schemes(config.schemes)
    orchestrator = ExperimentOrchestrator(schemes, context_factory(config))
    cells = [
        ExperimentCell(scheme=name, num_uavs=m, seed=seed)
        for name in config.schemes
        for m in config.sweep.uav_counts
        for seed in config.seeds
    ]
    run = orchestrator.run(cells, parallel=parallel, continue_on_error=True)
    return SweepTables(
        results=pd.DataFrame(run.rows(), columns=RESULT_COLUMNS),
        timings=pd.DataFrame(run.timing_rows(), columns=TIMING_COLUMNS),
        failed_cells=len(run.failed),
    )


class SingleRunDump(BaseModel):
    """Before/after record of one scheme run; re-evaluating it reproduces ``report``"""

    scheme: str
    num_uavs: int
    seed: int
    initial: Deployment
    deployment: Deployment
    initial_report: EvaluationReport
    report: EvaluationReport


def _evaluator_for(config: ExperimentConfig, scheme: str, seed: int) -> AccessibilityEvaluator:
    radius = None
    if scheme == "fixed" and not config.fixed.unrestricted:
        radius = config.fixed.local_radius
    return AccessibilityEvaluator(config.scenario.build(seed), config.channel, config.weights, local_radius=radius)


def run_single(
    config: ExperimentConfig, num_uavs: Optional[int] = None, seed: Optional[int] = None
) -> SingleRunDump:
    if len(config.schemes) != 1:
        raise ConfigError(f"A single run needs exactly one scheme, got {config.schemes}")
    scheme_name = config.schemes[0]
    num_uavs = num_uavs if num_uavs is not None else config.sweep.single_uavs
    seed = seed if seed is not None else config.seeds[0]

    scheme = build_schemes([scheme_name])[0]
    result: SchemeResult = scheme.deploy(context_factory(config)(seed), num_uavs, seed)
    return SingleRunDump(
        scheme=scheme_name,
        num_uavs=num_uavs,
        seed=seed,
        initial=result.initial,
        deployment=result.deployment,
        initial_report=_evaluator_for(config, scheme_name, seed).evaluate(result.initial),
        report=result.report,
    )


def reevaluate(config: ExperimentConfig, dump: SingleRunDump) -> EvaluationReport:
    return _evaluator_for(config, dump.scheme, dump.seed).evaluate(dump.deployment)


def save_single_dump(dump: SingleRunDump, path: PathLike) -> None:
    Path(path).write_text(dump.model_dump_json(indent=2), encoding="utf-8")


def load_single_dump(path: PathLike) -> SingleRunDump:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(str(path), e.msg, line=e.lineno, column=e.colno) from e

    try:
        return SingleRunDump.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ScenarioValidationError(str(path), ".".join(map(str, first["loc"])) or "<root>", first["msg"]) from e


def write_table(table: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path
