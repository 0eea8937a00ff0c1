"""Reference optimum (x*, P*) used for the gap column of traces."""
import logging
from typing import Tuple

import numpy as np

from compopt.config import OPTIMUM_GTOL, OPTIMUM_MAX_ITER
from compopt.core.oracles import full_gradient, objective
from compopt.core.problem import CompositionProblem
from compopt.exceptions import OptimumNotConvergedError

logger = logging.getLogger(__name__)

# Line-search halvings before a Newton step is declared stuck
_MAX_HALVINGS = 40
# Newton steps taken past the relative target toward the absolute floor
_FLOOR_STEPS = 5


def _fd_hessian(problem: CompositionProblem, x: np.ndarray) -> np.ndarray:
    """Central-difference Hessian of the exact gradient, symmetrised."""
    h = 1e-4 * (1.0 + float(np.linalg.norm(x)))
    hess = np.empty((problem.dim_x, problem.dim_x))
    for k in range(problem.dim_x):
        e = np.zeros(problem.dim_x)
        e[k] = h
        hess[:, k] = (full_gradient(problem, x + e) - full_gradient(problem, x - e)) / (2.0 * h)
    return 0.5 * (hess + hess.T)


def newton_polish(
    problem: CompositionProblem,
    x0=None,
    max_iter: int = OPTIMUM_MAX_ITER,
) -> np.ndarray:
    """Damped Newton iteration on the exact deterministic gradient.

    Converges once ||grad P|| <= OPTIMUM_GTOL * max(1, ||grad P(x0)||); raises
    OptimumNotConvergedError when that relative target is not reached. Past it,
    up to _FLOOR_STEPS more steps push toward the absolute floor OPTIMUM_GTOL and
    stop early when the floor is met or the line search stalls on round-off.
    """
    x = np.zeros(problem.dim_x) if x0 is None else problem.check_x(x0).copy()
    grad = full_gradient(problem, x)
    tol = OPTIMUM_GTOL * max(1.0, float(np.linalg.norm(grad)))
    value = objective(problem, x)
    floor_steps = 0

    for it in range(max_iter):
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= OPTIMUM_GTOL or (gnorm <= tol and floor_steps >= _FLOOR_STEPS):
            logger.info(f"optimum polish converged after {it} iterations (||grad||={gnorm:.3e})")
            return x
        polishing = gnorm <= tol
        if polishing:
            floor_steps += 1
        hess = _fd_hessian(problem, x)
        try:
            step = np.linalg.solve(hess, grad)
            if not np.all(np.isfinite(step)) or grad @ step <= 0:
                raise np.linalg.LinAlgError("not a descent direction")
        except np.linalg.LinAlgError:
            step = grad / max(1.0, float(np.linalg.norm(hess, 2)))

        t = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = x - t * step
            cand_grad = full_gradient(problem, candidate)
            cand_value = objective(problem, candidate)
            # near the optimum objective differences drown in round-off; the gradient decides
            if cand_value < value or np.linalg.norm(cand_grad) < gnorm:
                break
            t *= 0.5
        else:
            if polishing:
                logger.info(f"optimum polish stalled at ||grad||={gnorm:.3e} after {it} iterations")
                return x
            raise OptimumNotConvergedError(it, gnorm, tol)
        x, grad, value = candidate, cand_grad, cand_value

    raise OptimumNotConvergedError(max_iter, float(np.linalg.norm(grad)), tol)


def optimum_oracle(problem: CompositionProblem) -> Tuple[np.ndarray, float]:
    """Return (x*, P*), cached on the problem instance.

    Closed-form minimisers are used where the problem provides one; otherwise the
    optimum comes from newton_polish.
    """
    if problem._optimum_cache is not None:
        return problem._optimum_cache

    x_star = problem.closed_form_optimum()
    if x_star is None:
        logger.info(f"no closed form for {problem!r}; polishing numerically")
        x_star = newton_polish(problem)
    x_star = np.asarray(x_star, dtype=float)
    x_star.setflags(write=False)
    result = (x_star, objective(problem, x_star))
    problem._optimum_cache = result
    return result
