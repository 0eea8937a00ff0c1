"""Snapshot-anchored estimates of the inner map and its Jacobian.

    G_hat  = (1/A) sum_{j in batch} (G_j(x)  - G_j(x~))  + G(x~)
    dG_hat = (1/A) sum_{j in batch} (dG_j(x) - dG_j(x~)) + dG(x~)
"""
from typing import Optional, Tuple

import numpy as np

from compopt.core.oracles import inner_jacobian, inner_value
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.estimators.minibatch import MiniBatch


class SvrgSnapshot:
    """Reference point x~ with the exact full averages G(x~) and dG(x~)."""

    __slots__ = ("x_tilde", "g_tilde", "jac_tilde", "epoch")

    def __init__(self, x_tilde, g_tilde, jac_tilde, epoch: int = 0):
        self.x_tilde = np.array(x_tilde, dtype=float)
        self.g_tilde = np.asarray(g_tilde, dtype=float)
        self.jac_tilde = np.asarray(jac_tilde, dtype=float)
        self.epoch = int(epoch)
        for arr in (self.x_tilde, self.g_tilde, self.jac_tilde):
            arr.setflags(write=False)

    def max_deviation(self, problem: CompositionProblem) -> float:
        """Largest entry-wise gap to a fresh full evaluation at x~ (unmetered)."""
        return max(
            float(np.max(np.abs(inner_value(problem, self.x_tilde) - self.g_tilde))),
            float(np.max(np.abs(inner_jacobian(problem, self.x_tilde) - self.jac_tilde))),
        )

    def __repr__(self) -> str:
        return f"SvrgSnapshot(epoch={self.epoch}, dim_x={self.x_tilde.size})"


def take_snapshot(
    problem: CompositionProblem,
    x_tilde,
    counter: Optional[QueryCounter] = None,
    epoch: int = 0,
) -> SvrgSnapshot:
    """Costs m G_j values and m Jacobians."""
    x_tilde = problem.check_x(x_tilde)
    return SvrgSnapshot(
        x_tilde,
        inner_value(problem, x_tilde, counter),
        inner_jacobian(problem, x_tilde, counter),
        epoch,
    )


def svrg_estimate(
    snapshot: SvrgSnapshot,
    problem: CompositionProblem,
    x,
    batch: MiniBatch,
    counter: Optional[QueryCounter] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """(G_hat, dG_hat); meters 2A G_j values and 2A Jacobians."""
    x = problem.check_x(x)
    idx = batch.indices
    A = batch.size
    if counter is not None:
        counter.g_evals += 2 * A
        counter.g_jacs += 2 * A
    g_hat = (problem.eval_g_sum(idx, x) - problem.eval_g_sum(idx, snapshot.x_tilde)) / A + snapshot.g_tilde
    jac_hat = (problem.jac_g_sum(idx, x) - problem.jac_g_sum(idx, snapshot.x_tilde)) / A + snapshot.jac_tilde
    return g_hat, jac_hat
