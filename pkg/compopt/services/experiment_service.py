"""Service for running an experiment config: every (cell, algorithm) pair, then the summary."""
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from compopt.algorithms.registry import THEORY_STEP_ALGORITHMS, run_algorithm
from compopt.core.oracles import objective
from compopt.core.trace import Trace
from compopt.exceptions import CompoptError, DivergenceError, OptimumNotConvergedError
from compopt.models.report_schemas import RunSummary
from compopt.models.schemas import AlgorithmSpec, ExperimentCell, ExperimentConfig, RunConfig
from compopt.problems import build_problem, optimum_oracle
from compopt.services.csv_service import csv_service
from compopt.services.plot_service import plot_service
from compopt.theory.defaults import theoretical_step

logger = logging.getLogger(__name__)

# methods whose batch follows the sweep
BATCHED_ALGORITHMS = ("scdf-svrg", "scdf-saga", "c-svrg")


class ExperimentOutcome:
    """Summary rows of a finished experiment and where they were written."""

    def __init__(self, rows: List[RunSummary], out_dir: Path, summary_path: Path):
        self.rows = rows
        self.out_dir = out_dir
        self.summary_path = summary_path

    @property
    def ok(self) -> bool:
        return all(row.status == "ok" for row in self.rows)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1


def _run_config(cfg: ExperimentConfig, spec: AlgorithmSpec, cell: ExperimentCell, problem) -> RunConfig:
    batch = cell.batch if cell.batch is not None and spec.name in BATCHED_ALGORITHMS else spec.batch
    eta = spec.eta
    if eta is None and spec.name in THEORY_STEP_ALGORITHMS:
        eta = theoretical_step(problem, spec.name, batch, cfg.safety_factor, cfg.problem.seed)
    return RunConfig(
        eta=eta if eta is not None else 0.0,
        epochs=spec.epochs,
        inner_iters=spec.inner_iters,
        batch=batch,
        record_every=cfg.record_every,
        seed=cfg.problem.seed,
        max_queries=spec.max_queries,
        timing=cfg.timing,
    )


def _summary(cell: str, spec: AlgorithmSpec, trace: Trace, counts: Dict[str, int], status: str,
             path: Optional[Path], problem, x=None, message: Optional[str] = None) -> RunSummary:
    if len(trace):
        iterations, queries, final_objective, gap = trace.last[0], trace.last[1], trace.last[2], trace.last[3]
    else:
        iterations, queries, gap = 0, 0, float("nan")
        final_objective = objective(problem, x) if x is not None else float("nan")
    return RunSummary(
        cell=cell,
        label=spec.label,
        algorithm=spec.name,
        status=status,
        iterations=int(iterations),
        queries=int(queries),
        counts=counts,
        final_objective=float(final_objective),
        final_gap=None if not np.isfinite(gap) else float(gap),
        trace_file=str(path) if path is not None else None,
        message=message,
    )


def run_cell(cfg: ExperimentConfig, cell: ExperimentCell, out_dir) -> List[RunSummary]:
    """Run every algorithm of the config on one (kappa, batch) cell; write its CSVs and plots."""
    problem = build_problem(cfg.problem.model_copy(update={"kappa": cell.kappa}))
    x0 = np.zeros(problem.dim_x)
    try:
        optimum = optimum_oracle(problem)
    except OptimumNotConvergedError as exc:
        logger.warning(f"{cell.name}: no optimum ({exc}); gaps will be NaN")
        optimum = None

    rows: List[RunSummary] = []
    traces: Dict[str, Trace] = {}
    for spec in cfg.algorithms:
        path = csv_service.trace_path(out_dir, cell.name, spec.label)
        try:
            run_cfg = _run_config(cfg, spec, cell, problem)
            result = run_algorithm(spec, problem, x0, run_cfg, optimum)
        except DivergenceError as exc:
            trace = exc.trace if exc.trace is not None else Trace(spec.label)
            csv_service.write_trace(trace, path)
            traces[spec.label] = trace
            rows.append(_summary(cell.name, spec, trace, {}, "diverged", path, problem, x0, str(exc)))
            continue
        except CompoptError as exc:
            logger.error(f"{cell.name}/{spec.label}: {exc}")
            rows.append(_summary(cell.name, spec, Trace(spec.label), {}, "failed", None, problem, x0, str(exc)))
            continue
        csv_service.write_trace(result.trace, path)
        traces[spec.label] = result.trace
        rows.append(_summary(cell.name, spec, result.trace, result.counter.as_dict(), "ok", path, problem))

    cell_dir = Path(out_dir) / cell.name
    if cfg.plot and traces:
        plot_service.write_svg(traces, cell.name, cell_dir / "convergence.svg")
    if cfg.html and traces:
        plot_service.write_html(traces, cell.name, cell_dir / "convergence.html")
    return rows


def _run_cell_job(cfg_data: dict, cell_data: dict, out_dir: str) -> Tuple[str, List[dict]]:
    cfg = ExperimentConfig.model_validate(cfg_data)
    cell = ExperimentCell.model_validate(cell_data)
    return cell.name, [row.model_dump() for row in run_cell(cfg, cell, out_dir)]


class ExperimentService:
    """Service for fanning cells out over worker processes."""

    def run(self, cfg: ExperimentConfig, jobs: int = 1, progress: bool = True) -> ExperimentOutcome:
        out_dir = Path(cfg.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        cells = cfg.cells()
        by_cell: Dict[str, List[RunSummary]] = {}

        if jobs <= 1 or len(cells) == 1:
            for cell in tqdm(cells, desc="Cells", disable=not progress):
                by_cell[cell.name] = run_cell(cfg, cell, out_dir)
        else:
            cfg_data = cfg.model_dump()
            with ProcessPoolExecutor(max_workers=min(jobs, len(cells))) as pool:
                futures = [
                    pool.submit(_run_cell_job, cfg_data, cell.model_dump(), str(out_dir)) for cell in cells
                ]
                for future in tqdm(as_completed(futures), total=len(futures), desc="Cells", disable=not progress):
                    name, rows = future.result()
                    by_cell[name] = [RunSummary.model_validate(r) for r in rows]

        # summary order follows the config, not completion order
        rows = [row for cell in cells for row in by_cell[cell.name]]
        summary_path = csv_service.write_summary(rows, out_dir)
        outcome = ExperimentOutcome(rows, out_dir, summary_path)
        logger.info(f"experiment finished: {len(rows)} runs, exit code {outcome.exit_code}")
        return outcome


# Global instance
experiment_service = ExperimentService()


def run_experiment(cfg: ExperimentConfig, jobs: int = 1, progress: bool = True) -> ExperimentOutcome:
    return experiment_service.run(cfg, jobs=jobs, progress=progress)
