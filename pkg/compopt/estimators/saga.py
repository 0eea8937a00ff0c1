"""Table-anchored estimates of the inner map and its Jacobian.

Each inner index j keeps a stored point phi_j together with G_j(phi_j) and
dG_j(phi_j). The running averages G~ and dG~ are updated per entry with a 1/m
delta and rebuilt from the caches every SAGA_RECOMPUTE_PERIOD entry updates.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from compopt.config import SAGA_RECOMPUTE_PERIOD
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.estimators.minibatch import MiniBatch

logger = logging.getLogger(__name__)

Evaluations = Tuple[np.ndarray, np.ndarray]


class SagaTable:
    """Per-index stored points and cached inner evaluations. Single writer."""

    def __init__(self, phi, g_cache, jac_cache, recompute_period: int = SAGA_RECOMPUTE_PERIOD):
        self.phi = np.array(phi, dtype=float)
        self.g_cache = np.array(g_cache, dtype=float)
        self.jac_cache = np.array(jac_cache, dtype=float)
        self.m = self.phi.shape[0]
        self.recompute_period = int(recompute_period)
        self.updates = 0
        self.recompute()

    @classmethod
    def initialize(
        cls,
        problem: CompositionProblem,
        x0,
        counter: Optional[QueryCounter] = None,
        recompute_period: int = SAGA_RECOMPUTE_PERIOD,
    ) -> "SagaTable":
        """phi_j = x0 for every j; costs m G_j values and m Jacobians."""
        x0 = problem.check_x(x0)
        indices = np.arange(problem.m)
        if counter is not None:
            counter.g_evals += problem.m
            counter.g_jacs += problem.m
        return cls(
            np.tile(x0, (problem.m, 1)),
            problem.eval_g_batch(indices, x0),
            problem.jac_g_batch(indices, x0),
            recompute_period=recompute_period,
        )

    def recompute(self) -> None:
        """Rebuild the averages from the caches."""
        self.g_avg = self.g_cache.mean(axis=0)
        self.jac_avg = self.jac_cache.mean(axis=0)

    def average_drift(self) -> float:
        """Largest entry-wise gap between the running and from-scratch averages."""
        return max(
            float(np.max(np.abs(self.g_avg - self.g_cache.mean(axis=0)))),
            float(np.max(np.abs(self.jac_avg - self.jac_cache.mean(axis=0)))),
        )

    def coherence_error(self, problem: CompositionProblem) -> float:
        """Largest gap between the caches and fresh evaluations at phi (unmetered)."""
        worst = 0.0
        for j in range(self.m):
            worst = max(
                worst,
                float(np.max(np.abs(self.g_cache[j] - problem.eval_g(j, self.phi[j])))),
                float(np.max(np.abs(self.jac_cache[j] - problem.jac_g(j, self.phi[j])))),
            )
        return worst

    def __repr__(self) -> str:
        return f"SagaTable(m={self.m}, updates={self.updates})"


def saga_estimate(
    table: SagaTable,
    problem: CompositionProblem,
    x,
    batch: MiniBatch,
    counter: Optional[QueryCounter] = None,
    return_evaluations: bool = False,
):
    """(G_hat, dG_hat) from the cached values; meters A G_j values and A Jacobians.

    With ``return_evaluations`` the per-index G_j(x), dG_j(x) are returned as a
    third element so saga_update_table can reuse them.
    """
    x = problem.check_x(x)
    idx = batch.indices
    A = batch.size
    if counter is not None:
        counter.g_evals += A
        counter.g_jacs += A
    g_vals = problem.eval_g_batch(idx, x)
    jac_vals = problem.jac_g_batch(idx, x)
    g_hat = (g_vals - table.g_cache[idx]).sum(axis=0) / A + table.g_avg
    jac_hat = (jac_vals - table.jac_cache[idx]).sum(axis=0) / A + table.jac_avg
    if return_evaluations:
        return g_hat, jac_hat, (g_vals, jac_vals)
    return g_hat, jac_hat


def saga_update_table(
    table: SagaTable,
    problem: CompositionProblem,
    x,
    batch: MiniBatch,
    evaluations: Optional[Evaluations] = None,
    counter: Optional[QueryCounter] = None,
) -> None:
    """Set phi_j = x for every j in the batch, in order.

    Duplicates are applied sequentially, so a repeated index contributes a zero
    delta. Pass the evaluations returned by saga_estimate to avoid new queries;
    without them the batch is evaluated (and metered when a counter is given).
    """
    x = problem.check_x(x)
    idx = batch.indices
    if evaluations is None:
        if counter is not None:
            counter.g_evals += batch.size
            counter.g_jacs += batch.size
        evaluations = (problem.eval_g_batch(idx, x), problem.jac_g_batch(idx, x))
    g_vals, jac_vals = evaluations

    inv_m = 1.0 / table.m
    for pos, j in enumerate(idx.tolist()):
        table.g_avg += (g_vals[pos] - table.g_cache[j]) * inv_m
        table.jac_avg += (jac_vals[pos] - table.jac_cache[j]) * inv_m
        table.g_cache[j] = g_vals[pos]
        table.jac_cache[j] = jac_vals[pos]
        table.phi[j] = x
        table.updates += 1
        if table.updates % table.recompute_period == 0:
            logger.debug(f"rebuilding SAGA averages after {table.updates} updates")
            table.recompute()
