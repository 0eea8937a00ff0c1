"""Error types raised by compopt."""
from typing import List, Optional, Tuple


class CompoptError(Exception):
    """Base class for all compopt errors."""


class DimensionError(CompoptError, ValueError):
    """A vector or index does not match the problem's dimensions."""


class ConfigurationError(CompoptError, ValueError):
    """A run or bound was configured with invalid parameters."""


class ConfigParseError(CompoptError):
    """An experiment config failed to parse or validate.

    Carries every issue found, each as (line number, message). Line 0 means the
    issue is not tied to a single line (e.g. a missing section).
    """

    def __init__(self, issues: List[Tuple[int, str]]):
        self.issues = sorted(issues)
        lines = [f"line {line}: {msg}" if line else msg for line, msg in self.issues]
        super().__init__("invalid config:\n  " + "\n  ".join(lines))


class DivergenceError(CompoptError, RuntimeError):
    """A run produced a non-finite iterate or an exploding objective."""

    def __init__(self, message: str, iteration: int, trace=None):
        self.iteration = iteration
        self.trace = trace
        super().__init__(f"diverged at iteration {iteration}: {message}")


class OptimumNotConvergedError(CompoptError, RuntimeError):
    """The numerical optimum oracle did not reach its tolerance."""

    def __init__(self, iterations: int, grad_norm: float, tol: Optional[float] = None):
        self.iterations = iterations
        self.grad_norm = grad_norm
        super().__init__(
            f"optimum polish stopped after {iterations} iterations with "
            f"||grad P|| = {grad_norm:.3e}" + (f" > {tol:.3e}" if tol is not None else "")
        )
