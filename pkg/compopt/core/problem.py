"""Composition problem abstraction and oracle-query metering."""
from abc import ABC, abstractmethod
from typing import Dict, Optional, Sequence

import numpy as np

from compopt.exceptions import DimensionError


class QueryCounter:
    """Cumulative oracle-query counts for one run.

    Counts only ever grow. ``g_queries`` (G_j values plus Jacobians) is the unit the
    trace's ``queries`` column and query budgets are expressed in.
    """

    __slots__ = ("g_evals", "g_jacs", "f_grads", "f_evals")

    def __init__(self):
        self.g_evals = 0
        self.g_jacs = 0
        self.f_grads = 0
        self.f_evals = 0

    @property
    def g_queries(self) -> int:
        return self.g_evals + self.g_jacs

    @property
    def total(self) -> int:
        return self.g_evals + self.g_jacs + self.f_grads + self.f_evals

    def as_dict(self) -> Dict[str, int]:
        return {
            "g_evals": self.g_evals,
            "g_jacs": self.g_jacs,
            "f_grads": self.f_grads,
            "f_evals": self.f_evals,
            "total": self.total,
        }

    def __repr__(self) -> str:
        return (
            f"QueryCounter(g_evals={self.g_evals}, g_jacs={self.g_jacs}, "
            f"f_grads={self.f_grads}, f_evals={self.f_evals})"
        )


class CompositionProblem(ABC):
    """Problem of the form (1/n) sum_i F_i((1/m) sum_j G_j(x)) + (lambda/2)||x||^2.

    Subclasses implement the four per-index oracles. The batched helpers below loop
    over the per-index oracles and may be overridden with vectorised versions; they
    must return the same values.
    """

    family: str = "custom"

    def __init__(self, n: int, m: int, dim_x: int, dim_y: int, lam: float):
        if min(n, m, dim_x, dim_y) < 1:
            raise DimensionError(
                f"n, m, dim_x, dim_y must be positive, got {(n, m, dim_x, dim_y)}"
            )
        if lam < 0:
            raise DimensionError(f"lambda must be nonnegative, got {lam}")
        self.n = int(n)
        self.m = int(m)
        self.dim_x = int(dim_x)
        self.dim_y = int(dim_y)
        self.lam = float(lam)
        self._optimum_cache = None

    # --- per-index oracles -------------------------------------------------

    @abstractmethod
    def eval_g(self, j: int, x: np.ndarray) -> np.ndarray:
        """G_j(x), shape (dim_y,)."""

    @abstractmethod
    def jac_g(self, j: int, x: np.ndarray) -> np.ndarray:
        """Jacobian of G_j at x, shape (dim_y, dim_x)."""

    @abstractmethod
    def eval_f(self, i: int, y: np.ndarray) -> float:
        """F_i(y)."""

    @abstractmethod
    def grad_f(self, i: int, y: np.ndarray) -> np.ndarray:
        """Gradient of F_i at y, shape (dim_y,)."""

    # --- batched helpers ---------------------------------------------------

    def eval_g_batch(self, indices: Sequence[int], x: np.ndarray) -> np.ndarray:
        return np.stack([self.eval_g(j, x) for j in indices])

    def jac_g_batch(self, indices: Sequence[int], x: np.ndarray) -> np.ndarray:
        return np.stack([self.jac_g(j, x) for j in indices])

    def eval_g_sum(self, indices: Sequence[int], x: np.ndarray) -> np.ndarray:
        return self.eval_g_batch(indices, x).sum(axis=0)

    def jac_g_sum(self, indices: Sequence[int], x: np.ndarray) -> np.ndarray:
        return self.jac_g_batch(indices, x).sum(axis=0)

    def grad_f_batch(self, indices: Sequence[int], y: np.ndarray) -> np.ndarray:
        return np.stack([self.grad_f(i, y) for i in indices])

    def eval_f_batch(self, indices: Sequence[int], y: np.ndarray) -> np.ndarray:
        return np.array([self.eval_f(i, y) for i in indices], dtype=float)

    # --- argument checks ---------------------------------------------------

    def check_x(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim_x,):
            raise DimensionError(f"x must have shape ({self.dim_x},), got {x.shape}")
        return x

    def check_y(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        if y.shape != (self.dim_y,):
            raise DimensionError(f"y must have shape ({self.dim_y},), got {y.shape}")
        return y

    def closed_form_optimum(self) -> Optional[np.ndarray]:
        """Exact minimiser when one is available, else None."""
        return None

    def describe(self) -> Dict[str, object]:
        return {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "dim_x": self.dim_x,
            "dim_y": self.dim_y,
            "lambda": self.lam,
        }

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n={self.n}, m={self.m}, N={self.dim_x}, "
            f"M={self.dim_y}, lambda={self.lam})"
        )
