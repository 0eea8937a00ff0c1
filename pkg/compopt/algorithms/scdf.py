"""Duality-free stochastic composition optimizers.

All three methods share the paired update, for a sampled outer index i and an
estimate (y, J) of (G(x), dG(x)):

    d      = J^T grad F_i(y) + beta_i
    beta_i = beta_i - lambda * n * eta * d
    x      = x - eta * d

which keeps lambda x = mean_i beta_i when it holds initially. SCDF uses the exact
inner map, SCDF-SVRG a per-epoch snapshot and SCDF-SAGA a per-index table.
"""
import logging
from typing import Callable, Optional, Tuple

import numpy as np

from compopt.algorithms.loop import RunLoop
from compopt.algorithms.state import DualState, RunResult
from compopt.core.oracles import inner_jacobian, inner_value
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.estimators.minibatch import MiniBatch, full_minibatch, sample_minibatch
from compopt.estimators.saga import SagaTable, saga_estimate, saga_update_table
from compopt.estimators.svrg import svrg_estimate, take_snapshot
from compopt.exceptions import ConfigurationError
from compopt.models.schemas import RunConfig

logger = logging.getLogger(__name__)

Optimum = Optional[Tuple[np.ndarray, float]]
Observer = Optional[Callable[[int, np.ndarray, DualState], None]]


def require_positive_lambda(problem: CompositionProblem) -> None:
    if problem.lam <= 0:
        raise ConfigurationError("duality-free methods need lambda > 0")


def check_batch(problem: CompositionProblem, cfg: RunConfig) -> None:
    if cfg.enumerate_batch and cfg.batch != problem.m:
        raise ConfigurationError(f"enumerate_batch needs batch = m = {problem.m}, got {cfg.batch}")


def draw_batch(loop: RunLoop, cfg: RunConfig) -> MiniBatch:
    if cfg.enumerate_batch:
        return full_minibatch(loop.problem.m)
    return sample_minibatch(loop.inner_stream, loop.problem.m, cfg.batch)


def estimate_norm_sq(problem: CompositionProblem, y, jac, beta) -> float:
    """(1/n) sum_i ||J^T grad F_i(y) + beta_i||^2, unmetered."""
    directions = problem.grad_f_batch(range(problem.n), y) @ jac + beta
    return float(np.mean(np.sum(directions ** 2, axis=1)))


def dual_free_update(
    problem: CompositionProblem,
    x: np.ndarray,
    dual: DualState,
    i: int,
    y: np.ndarray,
    jac: np.ndarray,
    eta: float,
    counter: QueryCounter,
) -> np.ndarray:
    """Apply the paired update in place on beta_i; return the new x."""
    counter.f_grads += 1
    d = jac.T @ problem.grad_f(i, y) + dual.beta[i]
    dual.beta[i] -= problem.lam * problem.n * eta * d
    return x - eta * d


def _attach(loop: RunLoop, observer: Observer, get_dual: Callable[[], DualState]) -> None:
    if observer is not None:
        loop.observer = lambda it, x: observer(it, x, get_dual())


def run_scdf(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    optimum: Optimum = None,
    label: str = "scdf",
    observer: Observer = None,
) -> RunResult:
    """SCDF: exact inner map, m + m G-queries and one outer gradient per step."""
    require_positive_lambda(problem)
    x = problem.check_x(x0).astype(float)
    dual = DualState.from_primal(x, problem.n, problem.lam)
    loop = RunLoop(problem, cfg, label, optimum)
    _attach(loop, observer, lambda: dual)

    y, jac = inner_value(problem, x), inner_jacobian(problem, x)

    def monitor() -> float:
        return estimate_norm_sq(problem, y, jac, dual.beta)

    loop.record(x, monitor())

    step_cost = 2 * problem.m
    for _ in range(cfg.total_iters):
        if not loop.affordable(step_cost):
            loop.budget_exhausted()
            break
        i = loop.sample_outer()
        y = inner_value(problem, x, loop.counter)
        jac = inner_jacobian(problem, x, loop.counter)
        x = dual_free_update(problem, x, dual, i, y, jac, cfg.eta, loop.counter)
        loop.step(x, monitor)

    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter, dual)


def run_scdf_svrg(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    optimum: Optimum = None,
    label: str = "scdf-svrg",
    observer: Observer = None,
) -> RunResult:
    """SCDF-SVRG.

    Each epoch takes a snapshot at x~ (2m G-queries), runs K inner steps of 4A
    G-queries from (x~, beta~), and moves the snapshot to the averages of
    x_1..x_K and beta^1..beta^K. Epoch ends are always recorded, with x~.
    """
    require_positive_lambda(problem)
    check_batch(problem, cfg)
    n, m, K = problem.n, problem.m, cfg.inner_iters
    x_tilde = problem.check_x(x0).astype(float)
    dual_tilde = DualState.from_primal(x_tilde, n, problem.lam)
    x, dual = x_tilde, dual_tilde
    loop = RunLoop(problem, cfg, label, optimum)
    _attach(loop, observer, lambda: dual)

    y, jac = inner_value(problem, x), inner_jacobian(problem, x)

    def monitor() -> float:
        return estimate_norm_sq(problem, y, jac, dual.beta)

    loop.record(x, monitor())

    exhausted = False
    for s in range(cfg.epochs):
        if not loop.affordable(2 * m):
            exhausted = True
            break
        snapshot = take_snapshot(problem, x_tilde, loop.counter, epoch=s)
        x, dual = x_tilde.copy(), dual_tilde.copy()
        if K == 0:
            continue

        x_sum = np.zeros_like(x)
        # lazy running sum of beta: row i is settled up to step stamp[i]
        beta_sum = np.zeros_like(dual.beta)
        stamp = np.zeros(n, dtype=np.int64)
        for k in range(1, K + 1):
            if not loop.affordable(4 * cfg.batch):
                exhausted = True
                break
            batch = draw_batch(loop, cfg)
            y, jac = svrg_estimate(snapshot, problem, x, batch, loop.counter)
            i = loop.sample_outer()
            beta_sum[i] += dual.beta[i] * (k - 1 - stamp[i])
            stamp[i] = k - 1
            x = dual_free_update(problem, x, dual, i, y, jac, cfg.eta, loop.counter)
            x_sum += x
            loop.step(x, monitor, record=k < K)
        if exhausted:
            break

        beta_sum += dual.beta * (K - stamp)[:, None]
        x_tilde, dual_tilde = x_sum / K, DualState(beta_sum / K)
        x, dual = x_tilde, dual_tilde
        loop.record(x, monitor())
        logger.debug(f"{label}: epoch {s + 1}/{cfg.epochs} done, {loop.counter.g_queries} G-queries")

    if exhausted:
        loop.budget_exhausted()
    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter, dual)


def run_scdf_saga(
    problem: CompositionProblem,
    x0,
    cfg: RunConfig,
    optimum: Optimum = None,
    label: str = "scdf-saga",
    observer: Observer = None,
) -> RunResult:
    """SCDF-SAGA: table at phi_j = x0 (m + m G-queries), then 2A G-queries per step."""
    require_positive_lambda(problem)
    check_batch(problem, cfg)
    x = problem.check_x(x0).astype(float)
    dual = DualState.from_primal(x, problem.n, problem.lam)
    loop = RunLoop(problem, cfg, label, optimum)
    _attach(loop, observer, lambda: dual)

    y, jac = inner_value(problem, x), inner_jacobian(problem, x)

    def monitor() -> float:
        return estimate_norm_sq(problem, y, jac, dual.beta)

    loop.record(x, monitor())

    if not loop.affordable(2 * problem.m):
        loop.budget_exhausted()
        loop.finish(x, monitor)
        return RunResult(loop.trace, x, loop.counter, dual)
    table = SagaTable.initialize(problem, x, loop.counter)

    for _ in range(cfg.total_iters):
        if not loop.affordable(2 * cfg.batch):
            loop.budget_exhausted()
            break
        batch = draw_batch(loop, cfg)
        y, jac, evaluations = saga_estimate(table, problem, x, batch, loop.counter, return_evaluations=True)
        saga_update_table(table, problem, x, batch, evaluations)
        i = loop.sample_outer()
        x = dual_free_update(problem, x, dual, i, y, jac, cfg.eta, loop.counter)
        loop.step(x, monitor)

    loop.finish(x, monitor)
    return RunResult(loop.trace, x, loop.counter, dual, extras={"table": table})
