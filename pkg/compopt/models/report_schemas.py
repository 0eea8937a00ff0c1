"""Pydantic schemas for gradient checks and run summaries."""
import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class ComponentCheck(BaseModel):
    """Finite-difference result for one G_j or F_i."""
    kind: Literal["G", "F"] = Field(..., description="G for inner maps, F for outer functions")
    index: int = Field(..., ge=0)
    max_rel_error: float = Field(..., description="Max relative error over trial points (NaN if non-finite)")
    finite: bool = True
    worst_point: int = Field(0, description="Trial point index where the max error occurred")
    passed: bool


class GradientCheckReport(BaseModel):
    """Outcome of check_gradients."""
    tol: float
    num_points: int
    components: List[ComponentCheck]
    passed: bool

    @property
    def failures(self) -> List[ComponentCheck]:
        return [c for c in self.components if not c.passed]

    @property
    def max_error(self) -> float:
        errors = [c.max_rel_error for c in self.components if c.finite]
        if len(errors) < len(self.components):
            return math.inf
        return max(errors, default=0.0)


class RunSummary(BaseModel):
    """One line of the experiment summary table."""
    cell: str
    label: str
    algorithm: str
    status: Literal["ok", "diverged", "failed"]
    iterations: int
    queries: int
    counts: Dict[str, int] = Field(default_factory=dict)
    final_objective: float
    final_gap: Optional[float] = None
    trace_file: Optional[str] = None
    message: Optional[str] = None


class EstimateNormReport(BaseModel):
    """Decay of the monitored squared gradient-estimate norm over a run."""
    initial: float
    final: float
    ratio: float = Field(..., description="final / initial (inf when initial is 0 and final is not)")
    decayed: bool = Field(..., description="ratio at or below the requested decay")
    log10_slope: float = Field(..., description="fitted slope of log10(value) per iteration")
    non_decreasing: bool = Field(..., description="fitted log10 trend is flat or rising")
