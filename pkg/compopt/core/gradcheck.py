"""Central-difference verification of the analytic oracles."""
import logging
from typing import Iterable, List

import numpy as np

from compopt.config import FD_STEP, GRADCHECK_TOL
from compopt.core.oracles import inner_value
from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.models.report_schemas import ComponentCheck, GradientCheckReport

logger = logging.getLogger(__name__)

# Jacobians of this many inner components are compared at once
_CHUNK = 64


def _relative_error(numeric: np.ndarray, analytic: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(analytic), initial=0.0)))
    return float(np.max(np.abs(numeric - analytic), initial=0.0)) / scale


def _fd_step(point: np.ndarray) -> float:
    return FD_STEP * (1.0 + float(np.linalg.norm(point)))


def _check_inner(problem: CompositionProblem, points: List[np.ndarray]):
    errors = np.zeros(problem.m)
    finite = np.ones(problem.m, dtype=bool)
    worst_point = np.zeros(problem.m, dtype=int)
    for p, x in enumerate(points):
        h = _fd_step(x)
        for start in range(0, problem.m, _CHUNK):
            idx = list(range(start, min(start + _CHUNK, problem.m)))
            analytic = problem.jac_g_batch(idx, x)
            numeric = np.empty_like(analytic)
            for k in range(problem.dim_x):
                e = np.zeros(problem.dim_x)
                e[k] = h
                numeric[:, :, k] = (
                    problem.eval_g_batch(idx, x + e) - problem.eval_g_batch(idx, x - e)
                ) / (2.0 * h)
            for row, j in enumerate(idx):
                if not (np.all(np.isfinite(analytic[row])) and np.all(np.isfinite(numeric[row]))):
                    finite[j] = False
                    continue
                err = _relative_error(numeric[row], analytic[row])
                if err > errors[j]:
                    errors[j] = err
                    worst_point[j] = p
    return errors, finite, worst_point


def _check_outer(problem: CompositionProblem, points: List[np.ndarray]):
    errors = np.zeros(problem.n)
    finite = np.ones(problem.n, dtype=bool)
    worst_point = np.zeros(problem.n, dtype=int)
    idx = range(problem.n)
    for p, x in enumerate(points):
        y = inner_value(problem, x)
        h = _fd_step(y)
        analytic = problem.grad_f_batch(idx, y)
        numeric = np.empty_like(analytic)
        for k in range(problem.dim_y):
            e = np.zeros(problem.dim_y)
            e[k] = h
            numeric[:, k] = (problem.eval_f_batch(idx, y + e) - problem.eval_f_batch(idx, y - e)) / (
                2.0 * h
            )
        for i in idx:
            if not (np.all(np.isfinite(analytic[i])) and np.all(np.isfinite(numeric[i]))):
                finite[i] = False
                continue
            err = _relative_error(numeric[i], analytic[i])
            if err > errors[i]:
                errors[i] = err
                worst_point[i] = p
    return errors, finite, worst_point


def check_gradients(
    problem: CompositionProblem,
    trial_points: Iterable,
    tol: float = GRADCHECK_TOL,
) -> GradientCheckReport:
    """Compare jac_g against eval_g and grad_f against eval_f by central differences.

    The outer gradients are checked at y = G(x) for each trial point x. The report
    holds the maximum relative error per component; non-finite evaluations are
    flagged instead of raised.
    """
    if tol <= 0:
        raise ConfigurationError(f"tol must be positive, got {tol}")
    points = [problem.check_x(x) for x in trial_points]
    if not points:
        raise ConfigurationError("check_gradients needs at least one trial point")

    components: List[ComponentCheck] = []
    with np.errstate(all="ignore"):
        for kind, (errors, finite, worst) in (
            ("G", _check_inner(problem, points)),
            ("F", _check_outer(problem, points)),
        ):
            for index, (err, ok, p) in enumerate(zip(errors, finite, worst)):
                components.append(
                    ComponentCheck(
                        kind=kind,
                        index=index,
                        max_rel_error=float(err) if ok else float("nan"),
                        finite=bool(ok),
                        worst_point=int(p),
                        passed=bool(ok and err <= tol),
                    )
                )

    report = GradientCheckReport(
        tol=tol,
        num_points=len(points),
        components=components,
        passed=all(c.passed for c in components),
    )
    logger.info(
        "gradient check on %r: %s (max error %.3e)",
        problem,
        "pass" if report.passed else "FAIL",
        report.max_error,
    )
    return report


def random_trial_points(problem: CompositionProblem, count: int, rng: np.random.Generator, scale: float = 1.0):
    """Gaussian trial points for check_gradients."""
    return [scale * rng.standard_normal(problem.dim_x) for _ in range(count)]
