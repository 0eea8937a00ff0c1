"""Config names of the optimizers and a single entry point to run any of them."""
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from compopt.algorithms.baselines import run_compositional_svrg, run_scgd, run_sgd
from compopt.algorithms.scdf import run_scdf, run_scdf_saga, run_scdf_svrg
from compopt.algorithms.state import RunResult
from compopt.core.problem import CompositionProblem
from compopt.models.schemas import AlgorithmSpec, RunConfig

Runner = Callable[..., RunResult]

ALGORITHMS: Dict[str, Runner] = {
    "scdf": run_scdf,
    "scdf-svrg": run_scdf_svrg,
    "scdf-saga": run_scdf_saga,
    "sgd": run_sgd,
    "sgd-exact": run_sgd,
    "scgd": run_scgd,
    "c-svrg": run_compositional_svrg,
}

# methods whose step can default to the theoretical bound
THEORY_STEP_ALGORITHMS = ("scdf-svrg", "scdf-saga")


def run_algorithm(
    spec: AlgorithmSpec,
    problem: CompositionProblem,
    x0: np.ndarray,
    cfg: RunConfig,
    optimum: Optional[Tuple[np.ndarray, float]] = None,
) -> RunResult:
    runner = ALGORITHMS[spec.name]
    if spec.name == "sgd":
        return runner(problem, x0, cfg, inner_mode="single_sample", optimum=optimum, label=spec.label)
    if spec.name == "sgd-exact":
        return runner(problem, x0, cfg, inner_mode="exact_inner", optimum=optimum, label=spec.label)
    if spec.name == "scgd":
        return runner(problem, x0, cfg, spec.scgd_schedule(), optimum=optimum, label=spec.label)
    return runner(problem, x0, cfg, optimum=optimum, label=spec.label)
