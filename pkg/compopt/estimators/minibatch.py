"""Inner mini-batches: A uniform draws from [m] with replacement."""
import numpy as np

from compopt.exceptions import ConfigurationError, DimensionError
from compopt.services.prng import PrngStream


class MiniBatch:
    """Indices into [m]; duplicates allowed."""

    __slots__ = ("indices", "m")

    def __init__(self, indices, m: int):
        indices = np.asarray(indices, dtype=np.int64)
        if indices.ndim != 1 or indices.size == 0:
            raise DimensionError("a mini-batch needs at least one index")
        if indices.min() < 0 or indices.max() >= m:
            raise DimensionError(f"batch indices must lie in [0, {m})")
        indices.setflags(write=False)
        self.indices = indices
        self.m = int(m)

    @property
    def size(self) -> int:
        return int(self.indices.size)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        return iter(self.indices.tolist())

    def __repr__(self) -> str:
        return f"MiniBatch(A={self.size}, m={self.m})"


def sample_minibatch(stream: PrngStream, m: int, A: int) -> MiniBatch:
    if A < 1:
        raise ConfigurationError(f"batch size must be >= 1, got {A}")
    return MiniBatch(stream.integers(m, size=A), m)


def full_minibatch(m: int) -> MiniBatch:
    """Every index exactly once, in order."""
    return MiniBatch(np.arange(m), m)
