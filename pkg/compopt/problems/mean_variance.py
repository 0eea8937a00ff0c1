"""Mean-variance portfolio problem in composition form.

The maximisation  mean_i <r_i, x> - mean_i (<r_i, x> - mean_j <r_j, x>)^2  is stored
as its negation:

    G_j(x) = [x; <r_j, x>]                       (dim_y = N + 1)
    F_i(y) = -<r_i, y1> + (<r_i, y1> - y2)^2      y = [y1; y2]

With ``unregularized_shift`` each F_i also subtracts (lambda/2)||y1||^2, so the
regulariser added back by the composition form cancels and P(x) is the plain
mean-variance objective.
"""
from typing import Optional, Sequence

import numpy as np

from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.services.prng import PrngStream


class MeanVarianceProblem(CompositionProblem):
    family = "mean-variance"

    def __init__(
        self,
        rewards,
        lam: float,
        unregularized_shift: bool = False,
        covariance: Optional[np.ndarray] = None,
    ):
        rewards = np.array(rewards, dtype=float, ndmin=2)
        n, dim = rewards.shape
        super().__init__(n=n, m=n, dim_x=dim, dim_y=dim + 1, lam=lam)
        self.rewards = rewards
        self.rewards.setflags(write=False)
        self.unregularized_shift = bool(unregularized_shift)
        self.covariance = covariance
        self._shift = self.lam if self.unregularized_shift else 0.0

    # --- inner maps --------------------------------------------------------

    def eval_g(self, j, x):
        return np.concatenate([x, [self.rewards[j] @ x]])

    def jac_g(self, j, x):
        jac = np.empty((self.dim_y, self.dim_x))
        jac[: self.dim_x] = np.eye(self.dim_x)
        jac[self.dim_x] = self.rewards[j]
        return jac

    def eval_g_batch(self, indices: Sequence[int], x):
        idx = np.asarray(indices, dtype=int)
        out = np.empty((idx.size, self.dim_y))
        out[:, : self.dim_x] = x
        out[:, self.dim_x] = self.rewards[idx] @ x
        return out

    def jac_g_batch(self, indices: Sequence[int], x):
        idx = np.asarray(indices, dtype=int)
        out = np.zeros((idx.size, self.dim_y, self.dim_x))
        out[:, : self.dim_x, :] = np.eye(self.dim_x)
        out[:, self.dim_x, :] = self.rewards[idx]
        return out

    def eval_g_sum(self, indices: Sequence[int], x):
        idx = np.asarray(indices, dtype=int)
        return np.concatenate([idx.size * x, [np.sum(self.rewards[idx] @ x)]])

    def jac_g_sum(self, indices: Sequence[int], x):
        idx = np.asarray(indices, dtype=int)
        out = np.zeros((self.dim_y, self.dim_x))
        out[: self.dim_x] = idx.size * np.eye(self.dim_x)
        out[self.dim_x] = self.rewards[idx].sum(axis=0)
        return out

    # --- outer functions ---------------------------------------------------

    def eval_f(self, i, y):
        y1, y2 = y[: self.dim_x], y[self.dim_x]
        a = self.rewards[i] @ y1
        return float(-a + (a - y2) ** 2 - 0.5 * self._shift * (y1 @ y1))

    def grad_f(self, i, y):
        y1, y2 = y[: self.dim_x], y[self.dim_x]
        s = self.rewards[i] @ y1 - y2
        grad = np.empty(self.dim_y)
        grad[: self.dim_x] = (2.0 * s - 1.0) * self.rewards[i] - self._shift * y1
        grad[self.dim_x] = -2.0 * s
        return grad

    def eval_f_batch(self, indices, y):
        idx = np.asarray(indices, dtype=int)
        y1, y2 = y[: self.dim_x], y[self.dim_x]
        a = self.rewards[idx] @ y1
        return -a + (a - y2) ** 2 - 0.5 * self._shift * (y1 @ y1)

    def grad_f_batch(self, indices, y):
        idx = np.asarray(indices, dtype=int)
        y1, y2 = y[: self.dim_x], y[self.dim_x]
        s = self.rewards[idx] @ y1 - y2
        out = np.empty((idx.size, self.dim_y))
        out[:, : self.dim_x] = (2.0 * s - 1.0)[:, None] * self.rewards[idx] - self._shift * y1
        out[:, self.dim_x] = -2.0 * s
        return out

    # --- direct formula ----------------------------------------------------

    def direct_objective(self, x) -> float:
        """Objective computed without the composition structure."""
        x = self.check_x(x)
        returns = self.rewards @ x
        value = -returns.mean() + np.mean((returns - returns.mean()) ** 2)
        if not self.unregularized_shift:
            value += 0.5 * self.lam * (x @ x)
        return float(value)

    def closed_form_optimum(self):
        """Solve (2 S + lambda' I) x = mean reward, S the empirical reward covariance.

        lambda' is 0 under the unregularised shift; the system is then solved in the
        least-squares sense.
        """
        mean = self.rewards.mean(axis=0)
        centred = self.rewards - mean
        system = 2.0 * centred.T @ centred / self.n
        if not self.unregularized_shift:
            system += self.lam * np.eye(self.dim_x)
            return np.linalg.solve(system, mean)
        return np.linalg.lstsq(system, mean, rcond=None)[0]

    def describe(self):
        info = super().describe()
        info["unregularized_shift"] = self.unregularized_shift
        return info


def covariance_with_condition(dim: int, kappa: float, stream: PrngStream):
    """Q diag(s) Q^T with s log-spaced in [1, kappa] and Q a random orthogonal matrix."""
    spectrum = np.logspace(0.0, np.log10(kappa), dim)
    gaussian = stream.standard_normal((dim, dim))
    q, r = np.linalg.qr(gaussian)
    q = q * np.sign(np.diag(r))
    return (q * spectrum) @ q.T, q, spectrum


def generate_mean_variance(
    n: int,
    N: int,
    kappa: float,
    seed: int,
    lam: float = 0.1,
    unregularized_shift: bool = False,
) -> MeanVarianceProblem:
    """Zero-mean Gaussian rewards whose covariance has condition number exactly kappa."""
    if n < 2 or N < 1:
        raise ConfigurationError(f"need n >= 2 and N >= 1, got n={n}, N={N}")
    if kappa < 1:
        raise ConfigurationError(f"kappa must be >= 1, got {kappa}")
    if N == 1 and kappa != 1:
        raise ConfigurationError("a one-dimensional covariance has condition number 1")

    stream = PrngStream(seed, "mean-variance")
    covariance, q, spectrum = covariance_with_condition(N, kappa, stream.child("covariance"))
    # rewards = z diag(sqrt(s)) Q^T has covariance Q diag(s) Q^T
    z = stream.child("rewards").standard_normal((n, N))
    rewards = (z * np.sqrt(spectrum)) @ q.T
    return MeanVarianceProblem(rewards, lam, unregularized_shift=unregularized_shift, covariance=covariance)
