"""Dual variables of the duality-free methods and the result of a run."""
from typing import Any, Dict, Optional

import numpy as np

from compopt.core.problem import QueryCounter
from compopt.core.trace import Trace


class DualState:
    """The n dual vectors beta_i, tied to the primal iterate by lambda x = mean_i beta_i."""

    __slots__ = ("beta",)

    def __init__(self, beta):
        self.beta = np.array(beta, dtype=float, ndmin=2)

    @classmethod
    def from_primal(cls, x0, n: int, lam: float) -> "DualState":
        """beta_i = lambda x0 for every i, so the coupling holds from step 0."""
        return cls(np.tile(lam * np.asarray(x0, dtype=float), (n, 1)))

    @property
    def n(self) -> int:
        return self.beta.shape[0]

    def mean(self) -> np.ndarray:
        return self.beta.mean(axis=0)

    def coupling_violation(self, x, lam: float) -> float:
        """Relative violation ||lambda x - mean(beta)|| / max(||lambda x||, ||mean(beta)||)."""
        lhs = lam * np.asarray(x, dtype=float)
        rhs = self.mean()
        scale = max(float(np.linalg.norm(lhs)), float(np.linalg.norm(rhs)), np.finfo(float).tiny)
        return float(np.linalg.norm(lhs - rhs)) / scale

    def copy(self) -> "DualState":
        return DualState(self.beta.copy())

    def __repr__(self) -> str:
        return f"DualState(n={self.beta.shape[0]}, dim={self.beta.shape[1]})"


class RunResult:
    """Everything a run leaves behind."""

    def __init__(
        self,
        trace: Trace,
        x: np.ndarray,
        counter: QueryCounter,
        dual: Optional[DualState] = None,
        extras: Optional[Dict[str, Any]] = None,
    ):
        self.trace = trace
        self.x = x
        self.counter = counter
        self.dual = dual
        self.extras = extras or {}

    @property
    def label(self) -> str:
        return self.trace.label

    def __repr__(self) -> str:
        return f"RunResult(label={self.label!r}, rows={len(self.trace)}, counter={self.counter!r})"
