"""Strongly convex objective whose outer components are not all convex.

Two outer components over affine inner maps G_j(x) = C_j x - c_j:

    F_1(y) = 1/2 y^T (2H + alpha I) y + h_1^T y     strongly convex
    F_2(y) = -alpha/2 ||y||^2 + h_2^T y             concave

Their average is 1/2 y^T H y + mean(h)^T y with H positive definite, so P is
lambda-strongly convex even though F_2 is concave.
"""
import numpy as np

from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.services.prng import PrngStream


class SplitQuadraticProblem(CompositionProblem):
    family = "split-quadratic"

    def __init__(self, operators, offsets, hessian, linear_terms, alpha: float, lam: float):
        operators = np.array(operators, dtype=float)
        offsets = np.array(offsets, dtype=float)
        hessian = np.array(hessian, dtype=float)
        linear_terms = np.array(linear_terms, dtype=float)
        m, dim_y, dim_x = operators.shape
        if hessian.shape != (dim_y, dim_y) or linear_terms.shape != (2, dim_y):
            raise ConfigurationError("hessian must be (M, M) and linear_terms (2, M)")
        if alpha <= 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        super().__init__(n=2, m=m, dim_x=dim_x, dim_y=dim_y, lam=lam)
        self.operators = operators
        self.offsets = offsets
        self.hessian = hessian
        self.linear_terms = linear_terms
        self.alpha = float(alpha)
        self._curvatures = (2.0 * hessian + self.alpha * np.eye(dim_y), -self.alpha * np.eye(dim_y))

    def eval_g(self, j, x):
        return self.operators[j] @ x - self.offsets[j]

    def jac_g(self, j, x):
        return self.operators[j].copy()

    def eval_g_sum(self, indices, x):
        idx = np.asarray(indices, dtype=int)
        return self.operators[idx].sum(axis=0) @ x - self.offsets[idx].sum(axis=0)

    def jac_g_sum(self, indices, x):
        return self.operators[np.asarray(indices, dtype=int)].sum(axis=0)

    def eval_f(self, i, y):
        return float(0.5 * y @ self._curvatures[i] @ y + self.linear_terms[i] @ y)

    def grad_f(self, i, y):
        return self._curvatures[i] @ y + self.linear_terms[i]

    def closed_form_optimum(self):
        op = self.operators.mean(axis=0)
        off = self.offsets.mean(axis=0)
        h_bar = self.linear_terms.mean(axis=0)
        lhs = op.T @ self.hessian @ op + self.lam * np.eye(self.dim_x)
        rhs = op.T @ (self.hessian @ off - h_bar)
        return np.linalg.solve(lhs, rhs)

    def describe(self):
        info = super().describe()
        info["alpha"] = self.alpha
        return info


def generate_split_quadratic(
    m: int,
    M: int,
    N: int,
    alpha: float,
    lam: float,
    seed: int,
    noise: float = 0.5,
) -> SplitQuadraticProblem:
    if m < 1 or M < 1 or N < 1:
        raise ConfigurationError(f"need m, M, N >= 1, got m={m}, M={M}, N={N}")
    if lam <= 0:
        raise ConfigurationError("the split quadratic needs lambda > 0 to be strongly convex")

    stream = PrngStream(seed, "split-quadratic")
    scale = 1.0 / np.sqrt(M)
    mean_op = np.eye(M, N) + 0.3 * scale * stream.child("mean-operator").standard_normal((M, N))
    operators = mean_op + noise * scale * stream.child("operators").standard_normal((m, M, N))
    offsets = stream.child("offsets").standard_normal((m, M))
    w = stream.child("hessian").standard_normal((M, M)) * scale
    hessian = w.T @ w + 0.5 * np.eye(M)
    linear_terms = stream.child("linear").standard_normal((2, M))
    return SplitQuadraticProblem(operators, offsets, hessian, linear_terms, alpha, lam)
