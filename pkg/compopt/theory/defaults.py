"""Theoretical default step sizes for the variance-reduced SCDF methods."""
import logging

import numpy as np

from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.services.prng import PrngStream
from compopt.theory.bounds import saga_bounds, svrg_step_bound
from compopt.theory.constants import estimate_constants

logger = logging.getLogger(__name__)

SAMPLE_POINTS = 4
PAIRS = 16
MAX_COMPONENTS = 64


def theoretical_step(
    problem: CompositionProblem,
    name: str,
    batch: int,
    safety_factor: float,
    seed: int,
) -> float:
    """Step from the non-convex bound with estimated constants inflated by ``safety_factor``.

    Raises ConfigurationError when the bound is vacuous or infeasible for this
    batch; the config must then give ``eta`` explicitly.
    """
    if name not in ("scdf-svrg", "scdf-saga"):
        raise ConfigurationError(f"no theoretical step for {name!r}")
    stream = PrngStream(seed, "theoretical-step")
    points = [stream.standard_normal(problem.dim_x) for _ in range(SAMPLE_POINTS)]
    points[0] = np.zeros(problem.dim_x)
    constants = estimate_constants(problem, points, PAIRS, seed, max_components=MAX_COMPONENTS)
    constants = constants.scaled(safety_factor)

    if name == "scdf-svrg":
        bound = svrg_step_bound(constants, problem.lam, problem.n, batch)
        eta, reason = bound.eta_max, bound.message
    else:
        resolved = saga_bounds(constants, problem.lam, problem.n, A=batch)
        eta = resolved.eta_max if resolved.feasible else None
        reason = resolved.message
    if eta is None or eta <= 0:
        raise ConfigurationError(f"{name}: no usable theoretical step for batch {batch} ({reason}); set eta")
    logger.info(f"{name}: theoretical step {eta:.6g} for batch {batch}")
    return float(eta)
