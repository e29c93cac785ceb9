import asyncio
import traceback
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from schemas.deployment import EvaluationReport
from schemes.base import BaseScheme, SchemeContext, SchemeResult
from utils.errors import OrchestrationException
from utils.logger import Ca3dLogger

CellKey = Tuple[str, int, int]

RESULT_COLUMNS = ["scheme", "num_uavs", "seed", *EvaluationReport.CSV_COLUMNS, "status", "error"]
TIMING_COLUMNS = ["scheme", "num_uavs", "seed", "elapsed_s"]


class ExperimentCell(BaseModel):
    """One (scheme, M, seed) point of a sweep"""

    model_config = ConfigDict(frozen=True)

    scheme: str
    num_uavs: int
    seed: int

    @property
    def key(self) -> CellKey:
        return (self.scheme, self.num_uavs, self.seed)


class CellOutcome(BaseModel):
    cell: ExperimentCell
    result: Optional[SchemeResult] = None
    error: Optional[str] = None
    execution_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None

    def row(self) -> Dict[str, Any]:
        metrics = self.result.report.to_row() if self.result is not None else {c: None for c in EvaluationReport.CSV_COLUMNS}
        return {
            "scheme": self.cell.scheme,
            "num_uavs": self.cell.num_uavs,
            "seed": self.cell.seed,
            **metrics,
            "status": "ok" if self.ok else "failed",
            "error": self.error or "",
        }


class ExperimentRun(BaseModel):
    execution_id: str
    outcomes: List[CellOutcome]
    execution_time: float

    @property
    def failed(self) -> List[CellOutcome]:
        return [o for o in self.outcomes if not o.ok]

    def rows(self) -> List[Dict[str, Any]]:
        return [o.row() for o in self.outcomes]

    def timing_rows(self) -> List[Dict[str, Any]]:
        return [
            {"scheme": o.cell.scheme, "num_uavs": o.cell.num_uavs, "seed": o.cell.seed, "elapsed_s": o.execution_time}
            for o in self.outcomes
        ]


class ExperimentOrchestrator:
    """Runs sweep cells through the registered schemes.

    ``context_for_seed`` builds the scheme context of a seed; contexts are
    cached so every scheme and M of one seed sees the same scenario. Outcomes
    are sorted by cell key, so the output does not depend on scheduling.
    """

    def __init__(self, schemes: List[BaseScheme], context_for_seed: Callable[[int], SchemeContext]):
        self.schemes = {scheme.name: scheme for scheme in schemes}
        self.context_for_seed = context_for_seed
        self.logger = Ca3dLogger().get_logger()
        self._contexts: Dict[int, SchemeContext] = {}
        self.execution_history: List[Dict[str, Any]] = []
        self.performance_metrics = {
            "total_executions": 0,
            "successful_executions": 0,
            "failed_executions": 0,
            "average_execution_time": 0.0,
        }
        self.scheme_status = {name: "healthy" for name in self.schemes}

    def run(
        self,
        cells: List[ExperimentCell],
        parallel: bool = False,
        continue_on_error: bool = True,
        context: Optional[SchemeContext] = None,
    ) -> ExperimentRun:
        """Run every cell; ``context`` replaces the per-seed contexts when given"""
        start_time = datetime.now()
        execution_id = f"exec_{int(start_time.timestamp())}"
        self.logger.info(f"Starting experiment {execution_id} with {len(cells)} cells")

        try:
            self._validate_cells(cells)
            if parallel:
                outcomes = self._run_parallel(cells, continue_on_error, context)
            else:
                outcomes = self._run_sequential(cells, continue_on_error, context)
            outcomes.sort(key=lambda o: o.cell.key)

            execution_time = (datetime.now() - start_time).total_seconds()
            run = ExperimentRun(execution_id=execution_id, outcomes=outcomes, execution_time=execution_time)
            self._update_performance_metrics(execution_time, success=not run.failed)
            self._store_execution_history(execution_id, len(cells), len(run.failed), execution_time, True)
            self.logger.info(
                f"Experiment {execution_id} finished in {execution_time:.3f}s, {len(run.failed)} failed cells"
            )
            return run

        except Exception as e:
            self.logger.error(f"Experiment {execution_id} failed: {traceback.format_exc()}")
            self._update_performance_metrics(0.0, success=False)
            self._store_execution_history(execution_id, len(cells), len(cells), 0.0, False, str(e))
            if isinstance(e, OrchestrationException):
                raise
            raise OrchestrationException(f"Experiment failed: {str(e)}") from e

    def _validate_cells(self, cells: List[ExperimentCell]) -> None:
        unknown = sorted({c.scheme for c in cells if c.scheme not in self.schemes})
        if unknown:
            raise OrchestrationException(f"Cells reference unregistered schemes: {unknown}")
        keys = [c.key for c in cells]
        if len(keys) != len(set(keys)):
            raise OrchestrationException("Duplicate (scheme, M, seed) cells")

    def context(self, seed: int) -> SchemeContext:
        if seed not in self._contexts:
            self._contexts[seed] = self.context_for_seed(seed)
        return self._contexts[seed]

    def _execute(self, cell: ExperimentCell, context: Optional[SchemeContext] = None) -> CellOutcome:
        start_time = datetime.now()
        context = context if context is not None else self.context(cell.seed)
        result = self.schemes[cell.scheme].deploy(context, cell.num_uavs, cell.seed)
        elapsed = (datetime.now() - start_time).total_seconds()
        return CellOutcome(cell=cell, result=result, execution_time=elapsed)

    def _record_failure(self, cell: ExperimentCell, e: Exception, continue_on_error: bool) -> CellOutcome:
        error_msg = f"Cell {cell.key} failed: {str(e)}"
        self.logger.error(error_msg)
        self.scheme_status[cell.scheme] = "failed"
        Ca3dLogger().log_sweep_cell("cells", cell.key, "failed")
        if not continue_on_error:
            raise OrchestrationException(error_msg) from e
        return CellOutcome(cell=cell, error=str(e))

    def _run_sequential(
        self, cells: List[ExperimentCell], continue_on_error: bool, context: Optional[SchemeContext]
    ) -> List[CellOutcome]:
        outcomes = []
        for cell in cells:
            try:
                outcome = self._execute(cell, context)
                Ca3dLogger().log_sweep_cell("cells", cell.key, "ok")
            except Exception as e:
                outcome = self._record_failure(cell, e, continue_on_error)
            outcomes.append(outcome)
        return outcomes

    def _run_parallel(
        self, cells: List[ExperimentCell], continue_on_error: bool, context: Optional[SchemeContext]
    ) -> List[CellOutcome]:
        # scenario construction stays on this thread
        if context is None:
            for seed in sorted({c.seed for c in cells}):
                self.context(seed)

        loop = asyncio.new_event_loop()
        try:
            return loop.run_until_complete(self._async_run_cells(cells, continue_on_error, context))
        finally:
            loop.close()

    async def _async_run_cells(
        self, cells: List[ExperimentCell], continue_on_error: bool, context: Optional[SchemeContext]
    ) -> List[CellOutcome]:
        loop = asyncio.get_running_loop()
        tasks = [(cell, loop.run_in_executor(None, self._execute, cell, context)) for cell in cells]

        outcomes = []
        for i, (cell, task) in enumerate(tasks):
            try:
                outcomes.append(await task)
                Ca3dLogger().log_sweep_cell("cells", cell.key, "ok")
            except Exception as e:
                if not continue_on_error:
                    await self._drain(tasks[i + 1 :])
                outcomes.append(self._record_failure(cell, e, continue_on_error))
        return outcomes

    async def _drain(self, pending: List[Tuple[ExperimentCell, "asyncio.Future[CellOutcome]"]]) -> None:
        """Wait out cells already handed to the executor so none outlives the run"""
        results = await asyncio.gather(*(task for _, task in pending), return_exceptions=True)
        for (cell, _), result in zip(pending, results):
            if isinstance(result, Exception):
                self.logger.error(f"Cell {cell.key} failed while the run was stopping: {result}")
                self.scheme_status[cell.scheme] = "failed"
                Ca3dLogger().log_sweep_cell("cells", cell.key, "failed")
            else:
                Ca3dLogger().log_sweep_cell("cells", cell.key, "ok")

    def _update_performance_metrics(self, execution_time: float, success: bool) -> None:
        self.performance_metrics["total_executions"] += 1
        if success:
            self.performance_metrics["successful_executions"] += 1
        else:
            self.performance_metrics["failed_executions"] += 1

        n = self.performance_metrics["total_executions"]
        total_time = self.performance_metrics["average_execution_time"] * (n - 1) + execution_time
        self.performance_metrics["average_execution_time"] = total_time / n

    def _store_execution_history(
        self,
        execution_id: str,
        num_cells: int,
        num_failed: int,
        execution_time: float,
        success: bool,
        error_msg: Optional[str] = None,
    ) -> None:
        self.execution_history.append(
            {
                "execution_id": execution_id,
                "timestamp": datetime.now().isoformat(),
                "cells": num_cells,
                "failed_cells": num_failed,
                "execution_time": execution_time,
                "success": success,
                "error_message": error_msg,
            }
        )
        # Keep only last 100 executions
        if len(self.execution_history) > 100:
            self.execution_history = self.execution_history[-100:]

    def get_health_status(self) -> dict:
        return {
            "orchestrator_status": "healthy" if self.performance_metrics["failed_executions"] == 0 else "degraded",
            "scheme_status": self.scheme_status.copy(),
            "performance_metrics": self.performance_metrics.copy(),
            "last_execution": self.execution_history[-1] if self.execution_history else None,
        }

    def get_scheme_reports(self) -> dict:
        return {name: scheme.report() for name, scheme in self.schemes.items()}

    def reset_metrics(self) -> None:
        self.performance_metrics = {
            "total_executions": 0,
            "successful_executions": 0,
            "failed_executions": 0,
            "average_execution_time": 0.0,
        }
        self.execution_history.clear()
        self.scheme_status = {name: "healthy" for name in self.schemes}
        for scheme in self.schemes.values():
            scheme.reset_metrics()
        self.logger.info("Orchestrator metrics reset")
