"""Named, seeded random streams.

A stream is identified by (seed, label). The label is hashed into a 128-bit key
that joins the seed in a numpy SeedSequence; the bit generator is PCG64. Equal
(seed, label) pairs give identical sequences, and streams with different labels
share no state.
"""
import hashlib
from typing import Sequence

import numpy as np

_MASK64 = (1 << 64) - 1


def _label_words(label: str) -> Sequence[int]:
    digest = hashlib.md5(label.encode("utf-8")).digest()
    return [int.from_bytes(digest[k:k + 4], "little") for k in range(0, 16, 4)]


class PrngStream:
    """Seeded generator for one (run, purpose) pair."""

    def __init__(self, seed: int, label: str = ""):
        if seed < 0:
            raise ValueError(f"seed must be nonnegative, got {seed}")
        self.seed = int(seed) & _MASK64
        self.label = label
        entropy = [self.seed & 0xFFFFFFFF, self.seed >> 32, *_label_words(label)]
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def child(self, label: str) -> "PrngStream":
        """Independent sub-stream named ``<label of parent>/<label>``."""
        return PrngStream(self.seed, f"{self.label}/{label}" if self.label else label)

    def integers(self, high: int, size=None):
        return self.generator.integers(0, high, size=size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self.generator.uniform(low, high, size)

    def __repr__(self) -> str:
        return f"PrngStream(seed={self.seed}, label={self.label!r})"
