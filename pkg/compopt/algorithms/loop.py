"""Bookkeeping shared by every optimizer: metering, budget, divergence and recording."""
import logging
import time
from typing import Callable, Optional, Tuple

import numpy as np

from compopt.config import DIVERGENCE_LIMIT
from compopt.core.oracles import objective
from compopt.core.problem import CompositionProblem, QueryCounter
from compopt.core.trace import Trace
from compopt.exceptions import DivergenceError
from compopt.models.schemas import RunConfig
from compopt.services.prng import PrngStream

logger = logging.getLogger(__name__)

Monitor = Callable[[], float]


class RunLoop:
    """Owns the counter, the trace and the random streams of one run.

    Algorithms call ``affordable`` before each unit of work, ``step`` after each
    iteration and ``finish`` once. Objective and gap are evaluated unmetered.
    """

    def __init__(
        self,
        problem: CompositionProblem,
        cfg: RunConfig,
        label: str,
        optimum: Optional[Tuple[np.ndarray, float]] = None,
        divergence_limit: float = DIVERGENCE_LIMIT,
    ):
        self.problem = problem
        self.cfg = cfg
        self.counter = QueryCounter()
        self.trace = Trace(label)
        self.iteration = 0
        self.divergence_limit = divergence_limit
        self.p_star = None if optimum is None else float(optimum[1])
        stream = PrngStream(cfg.seed, label)
        # outer index i and inner batch are drawn independently
        self.outer_stream = stream.child("outer")
        self.inner_stream = stream.child("inner")
        self.observer: Optional[Callable[[int, np.ndarray], None]] = None
        self._started = time.perf_counter()

    def affordable(self, g_queries: int) -> bool:
        """Whether ``g_queries`` more G-oracle queries fit in the budget."""
        if self.cfg.max_queries is None:
            return True
        return self.counter.g_queries + g_queries <= self.cfg.max_queries

    def sample_outer(self) -> int:
        return int(self.outer_stream.integers(self.problem.n))

    def _elapsed_ms(self) -> float:
        if not self.cfg.timing:
            return 0.0
        return (time.perf_counter() - self._started) * 1000.0

    def record(self, x: np.ndarray, grad_est_sq: float) -> None:
        if self.trace.rows and self.trace.last[0] == self.iteration:
            return
        value = objective(self.problem, x)
        if not np.isfinite(value) or abs(value) > self.divergence_limit:
            self.diverged(f"objective {value:.3e}")
        gap = None if self.p_star is None else value - self.p_star
        self.trace.record(self.iteration, self.counter.g_queries, value, gap, grad_est_sq, self._elapsed_ms())

    def step(self, x: np.ndarray, monitor: Monitor, record: bool = True) -> None:
        self.iteration += 1
        if not np.all(np.isfinite(x)):
            self.diverged("non-finite iterate")
        if self.observer is not None:
            self.observer(self.iteration, x)
        if record and self.iteration % self.cfg.record_every == 0:
            self.record(x, monitor())

    def finish(self, x: np.ndarray, monitor: Monitor) -> None:
        self.record(x, monitor())
        logger.info(
            f"{self.trace.label}: {self.iteration} iterations, "
            f"{self.counter.g_queries} G-queries, objective {self.trace.last[2]:.6e}"
        )

    def budget_exhausted(self) -> None:
        logger.info(f"{self.trace.label}: query budget {self.cfg.max_queries} reached at iteration {self.iteration}")

    def diverged(self, message: str) -> None:
        logger.warning(f"{self.trace.label}: diverged at iteration {self.iteration} ({message})")
        raise DivergenceError(message, self.iteration, self.trace)
