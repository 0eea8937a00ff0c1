"""Comparison methods: plain SGD, SCGD and compositional SVRG.

These are primal-only. Their trace column ``grad_est_sq`` holds the squared norm
of the step direction they took (the exact ||grad P(x0)||^2 on the initial row).
"""
import logging
from typing import Literal, Optional, Tuple

import numpy as np

from compopt.algorithms.loop import RunLoop
from compopt.algorithms.scdf import check_batch, draw_batch
from compopt.algorithms.state import RunResult
from compopt.core.oracles import full_gradient, inner_jacobian, inner_value, outer_gradient
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.estimators.minibatch import MiniBatch
from compopt.estimators.svrg import SvrgSnapshot, svrg_estimate, take_snapshot
from compopt.exceptions import ConfigurationError
from compopt.models.schemas import RunConfig, ScgdSchedule

logger = logging.getLogger(__name__)

Optimum = Optional[Tuple[np.ndarray, float]]
InnerMode = Literal["single_sample", "exact_inner"]


def _initial_direction_sq(problem: CompositionProblem, x: np.ndarray) -> float:
    grad = full_gradient(problem, x)
    return float(grad @ grad)


def run_sgd(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    inner_mode: InnerMode = "single_sample",
    optimum: Optimum = None,
    label: Optional[str] = None,
) -> RunResult:
    """x <- x - eta (J^T grad F_i(y) + lambda x).

    single_sample uses y = G_j(x), J = dG_j(x) for one sampled j (2 G-queries,
    biased); exact_inner uses G(x) and dG(x) (2m G-queries).
    """
    if inner_mode not in ("single_sample", "exact_inner"):
        raise ConfigurationError(f"unknown inner mode {inner_mode!r}")
    single = inner_mode == "single_sample"
    label = label or ("sgd" if single else "sgd-exact")
    x = problem.check_x(x0).astype(float)
    loop = RunLoop(problem, cfg, label, optimum)
    direction_sq = _initial_direction_sq(problem, x)

    def monitor() -> float:
        return direction_sq

    loop.record(x, monitor())

    step_cost = 2 if single else 2 * problem.m
    for _ in range(cfg.total_iters):
        if not loop.affordable(step_cost):
            loop.budget_exhausted()
            break
        i = loop.sample_outer()
        if single:
            j = int(loop.inner_stream.integers(problem.m))
            y, jac = problem.eval_g(j, x), problem.jac_g(j, x)
            loop.counter.g_evals += 1
            loop.counter.g_jacs += 1
        else:
            y = inner_value(problem, x, loop.counter)
            jac = inner_jacobian(problem, x, loop.counter)
        loop.counter.f_grads += 1
        d = jac.T @ problem.grad_f(i, y) + problem.lam * x
        x = x - cfg.eta * d
        direction_sq = float(d @ d)
        loop.step(x, monitor)

    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter)


def run_scgd(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    schedule: ScgdSchedule,
    optimum: Optimum = None,
    label: str = "scgd",
) -> RunResult:
    """Stochastic compositional gradient descent.

        y <- (1 - beta_k) y + beta_k G_j(x)
        x <- x - alpha_k (dG_j(x)^T grad F_i(y) + lambda x)

    with y0 = G_j0(x0). The schedule replaces cfg.eta. 2 G-queries per step.
    """
    if not 0 < schedule.beta <= 1:
        raise ConfigurationError(f"SCGD tracking weight must lie in (0, 1], got {schedule.beta}")
    x = problem.check_x(x0).astype(float)
    loop = RunLoop(problem, cfg, label, optimum)
    direction_sq = _initial_direction_sq(problem, x)

    def monitor() -> float:
        return direction_sq

    loop.record(x, monitor())
    if not loop.affordable(1):
        loop.budget_exhausted()
        loop.finish(x, monitor)
        return RunResult(loop.trace, x, loop.counter, extras={"y": None})

    y = problem.eval_g(int(loop.inner_stream.integers(problem.m)), x)
    loop.counter.g_evals += 1

    for k in range(1, cfg.total_iters + 1):
        if not loop.affordable(2):
            loop.budget_exhausted()
            break
        alpha_k, beta_k = schedule.rates(k)
        j = int(loop.inner_stream.integers(problem.m))
        i = loop.sample_outer()
        y = (1.0 - beta_k) * y + beta_k * problem.eval_g(j, x)
        jac = problem.jac_g(j, x)
        loop.counter.g_evals += 1
        loop.counter.g_jacs += 1
        loop.counter.f_grads += 1
        d = jac.T @ problem.grad_f(i, y) + problem.lam * x
        x = x - alpha_k * d
        direction_sq = float(d @ d)
        loop.step(x, monitor)

    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter, extras={"y": y})


def snapshot_composition_gradient(
    problem: CompositionProblem,
    snapshot: SvrgSnapshot,
    counter: Optional[QueryCounter] = None,
) -> np.ndarray:
    """dG(x~)^T grad F(G(x~)) from the snapshot; costs n outer gradients."""
    return snapshot.jac_tilde.T @ outer_gradient(problem, snapshot.g_tilde, counter)


def compositional_svrg_direction(
    problem: CompositionProblem,
    snapshot: SvrgSnapshot,
    composition_grad_tilde: np.ndarray,
    x: np.ndarray,
    i: int,
    batch: MiniBatch,
    counter: Optional[QueryCounter] = None,
) -> np.ndarray:
    """J_hat^T grad F_i(G_hat) - dG(x~)^T grad F_i(G(x~)) + dG(x~)^T grad F(G(x~)) + lambda x."""
    y, jac = svrg_estimate(snapshot, problem, x, batch, counter)
    if counter is not None:
        counter.f_grads += 2
    return (
        jac.T @ problem.grad_f(i, y)
        - snapshot.jac_tilde.T @ problem.grad_f(i, snapshot.g_tilde)
        + composition_grad_tilde
        + problem.lam * x
    )


def run_compositional_svrg(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    optimum: Optimum = None,
    label: str = "c-svrg",
) -> RunResult:
    """Primal compositional SVRG with the same epoch layout as SCDF-SVRG.

    Snapshot: 2m G-queries and n outer gradients. Inner step: 4A G-queries and
    two outer gradients. The next snapshot is the average of x_1..x_K.
    """
    check_batch(problem, cfg)
    K = cfg.inner_iters
    x_tilde = problem.check_x(x0).astype(float)
    x = x_tilde
    loop = RunLoop(problem, cfg, label, optimum)
    direction_sq = _initial_direction_sq(problem, x)

    def monitor() -> float:
        return direction_sq

    loop.record(x, monitor())

    exhausted = False
    for _ in range(cfg.epochs):
        if not loop.affordable(2 * problem.m):
            exhausted = True
            break
        snapshot = take_snapshot(problem, x_tilde, loop.counter)
        grad_tilde = snapshot_composition_gradient(problem, snapshot, loop.counter)
        x = x_tilde.copy()
        if K == 0:
            continue

        x_sum = np.zeros_like(x)
        for k in range(1, K + 1):
            if not loop.affordable(4 * cfg.batch):
                exhausted = True
                break
            batch = draw_batch(loop, cfg)
            i = loop.sample_outer()
            d = compositional_svrg_direction(problem, snapshot, grad_tilde, x, i, batch, loop.counter)
            x = x - cfg.eta * d
            x_sum += x
            direction_sq = float(d @ d)
            loop.step(x, monitor, record=k < K)
        if exhausted:
            break
        x_tilde = x_sum / K
        x = x_tilde
        loop.record(x, monitor())

    if exhausted:
        loop.budget_exhausted()
    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter)
