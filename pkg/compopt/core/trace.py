"""Per-iteration convergence records."""
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from compopt.config import TRACE_COLUMNS

Row = Tuple[int, int, float, float, float, float]


class Trace:
    """Rows of (iter, queries, objective, gap, grad_est_sq, ms).

    ``queries`` is cumulative G-oracle queries and never decreases; ``gap`` is NaN
    when no optimum is known.
    """

    def __init__(self, label: str = ""):
        self.label = label
        self.rows: List[Row] = []

    def record(
        self,
        iteration: int,
        queries: int,
        objective: float,
        gap: Optional[float],
        grad_est_sq: float,
        ms: float,
    ) -> None:
        if self.rows and queries < self.rows[-1][1]:
            raise ValueError("trace queries must be non-decreasing")
        self.rows.append(
            (
                int(iteration),
                int(queries),
                float(objective),
                float("nan") if gap is None else float(gap),
                float(grad_est_sq),
                float(ms),
            )
        )

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def last(self) -> Row:
        return self.rows[-1]

    def column(self, name: str) -> np.ndarray:
        k = TRACE_COLUMNS.index(name)
        return np.array([row[k] for row in self.rows])

    @property
    def iterations(self) -> np.ndarray:
        return self.column("iter")

    @property
    def queries(self) -> np.ndarray:
        return self.column("queries")

    @property
    def objectives(self) -> np.ndarray:
        return self.column("objective")

    @property
    def gaps(self) -> np.ndarray:
        return self.column("gap")

    @property
    def grad_est_sq(self) -> np.ndarray:
        return self.column("grad_est_sq")

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=TRACE_COLUMNS)
        return frame.astype({"iter": "int64", "queries": "int64"})

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, label: str = "") -> "Trace":
        trace = cls(label)
        for row in frame[TRACE_COLUMNS].itertuples(index=False):
            trace.rows.append(
                (int(row[0]), int(row[1]), float(row[2]), float(row[3]), float(row[4]), float(row[5]))
            )
        return trace

    def __repr__(self) -> str:
        return f"Trace(label={self.label!r}, rows={len(self.rows)})"
