"""Least-squares Bellman-residual toy: min_x ||mean_j(B_j x - b_j)||^2 + (lambda/2)||x||^2."""
import numpy as np

from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.services.prng import PrngStream


class BellmanToyProblem(CompositionProblem):
    """G_j(x) = B_j x - b_j and a single outer function F(y) = ||y||^2."""

    family = "bellman"

    def __init__(self, operators, offsets, lam: float):
        operators = np.array(operators, dtype=float)
        offsets = np.array(offsets, dtype=float)
        if operators.ndim != 3 or offsets.shape != operators.shape[:2]:
            raise ConfigurationError(
                f"expected operators (m, M, N) and offsets (m, M), got {operators.shape} and {offsets.shape}"
            )
        m, dim_y, dim_x = operators.shape
        super().__init__(n=1, m=m, dim_x=dim_x, dim_y=dim_y, lam=lam)
        self.operators = operators
        self.offsets = offsets
        self.operators.setflags(write=False)
        self.offsets.setflags(write=False)

    def eval_g(self, j, x):
        return self.operators[j] @ x - self.offsets[j]

    def jac_g(self, j, x):
        return self.operators[j].copy()

    def eval_g_batch(self, indices, x):
        idx = np.asarray(indices, dtype=int)
        return self.operators[idx] @ x - self.offsets[idx]

    def jac_g_batch(self, indices, x):
        return self.operators[np.asarray(indices, dtype=int)].copy()

    def eval_g_sum(self, indices, x):
        idx = np.asarray(indices, dtype=int)
        return self.operators[idx].sum(axis=0) @ x - self.offsets[idx].sum(axis=0)

    def jac_g_sum(self, indices, x):
        return self.operators[np.asarray(indices, dtype=int)].sum(axis=0)

    def eval_f(self, i, y):
        return float(y @ y)

    def grad_f(self, i, y):
        return 2.0 * y

    @property
    def mean_operator(self) -> np.ndarray:
        return self.operators.mean(axis=0)

    @property
    def mean_offset(self) -> np.ndarray:
        return self.offsets.mean(axis=0)

    def closed_form_optimum(self):
        """Solve (2 B^T B + lambda I) x = 2 B^T b with B, b the exact averages."""
        op, off = self.mean_operator, self.mean_offset
        lhs = 2.0 * op.T @ op + self.lam * np.eye(self.dim_x)
        rhs = 2.0 * op.T @ off
        try:
            return np.linalg.solve(lhs, rhs)
        except np.linalg.LinAlgError:
            # singular only when lambda = 0 and B is rank deficient
            return np.linalg.lstsq(lhs, rhs, rcond=None)[0]


def generate_bellman_toy(
    m: int,
    M: int,
    N: int,
    lam: float,
    seed: int,
    noise: float = 0.5,
) -> BellmanToyProblem:
    """Sampled operators B_j = B + noise * E_j around a seeded mean operator near identity."""
    if m < 1 or M < 1 or N < 1:
        raise ConfigurationError(f"need m, M, N >= 1, got m={m}, M={M}, N={N}")
    if noise < 0:
        raise ConfigurationError(f"noise must be nonnegative, got {noise}")

    stream = PrngStream(seed, "bellman")
    scale = 1.0 / np.sqrt(M)
    mean_op = np.eye(M, N) + 0.3 * scale * stream.child("mean-operator").standard_normal((M, N))
    mean_off = stream.child("mean-offset").standard_normal(M)
    operators = mean_op + noise * scale * stream.child("operators").standard_normal((m, M, N))
    offsets = mean_off + noise * stream.child("offsets").standard_normal((m, M))
    return BellmanToyProblem(operators, offsets, lam)
