"""Duality-free composition optimizers, baselines and their shared run loop."""
from compopt.algorithms.baselines import (
    compositional_svrg_direction,
    run_compositional_svrg,
    run_scgd,
    run_sgd,
    snapshot_composition_gradient,
)
from compopt.algorithms.loop import RunLoop
from compopt.algorithms.monitor import gradient_estimate_norm_monitor, summarize_estimate_norms
from compopt.algorithms.registry import ALGORITHMS, run_algorithm
from compopt.algorithms.scdf import run_scdf, run_scdf_saga, run_scdf_svrg
from compopt.algorithms.state import DualState, RunResult

__all__ = [
    "ALGORITHMS",
    "DualState",
    "RunLoop",
    "RunResult",
    "compositional_svrg_direction",
    "gradient_estimate_norm_monitor",
    "run_algorithm",
    "run_compositional_svrg",
    "run_scdf",
    "run_scdf_saga",
    "run_scdf_svrg",
    "run_scgd",
    "run_sgd",
    "snapshot_composition_gradient",
    "summarize_estimate_norms",
]
