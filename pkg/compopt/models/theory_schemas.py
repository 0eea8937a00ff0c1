"""Pydantic models for problem constants and step/batch bound results."""
from typing import Literal, Optional

from pydantic import BaseModel, Field


class ProblemConstants(BaseModel):
    """Smoothness and boundedness constants of a composition problem.

    Values produced by estimate_constants are empirical maxima, hence lower bounds
    of the true suprema.
    """
    B_F: float = Field(..., ge=0, description="Bound on ||grad F_i||")
    L_F: float = Field(..., ge=0, description="Lipschitz constant of grad F_i")
    B_G: float = Field(..., ge=0, description="Bound on ||dG_j||")
    L_G: float = Field(..., ge=0, description="Lipschitz constant of dG_j")
    L_f: float = Field(..., ge=0, description="Smoothness of the composition F_i(G(x))")
    R_x: float = Field(..., ge=0, description="Level-set radius")

    def scaled(self, factor: float) -> "ProblemConstants":
        """Every constant multiplied by ``factor``."""
        return ProblemConstants(**{k: v * factor for k, v in self.model_dump().items()})

    @property
    def c(self) -> float:
        """B_G^4 L_F^2, the recurring inner-variance weight."""
        return self.B_G ** 4 * self.L_F ** 2


class SvrgStepBound(BaseModel):
    """Step bound of SCDF-SVRG for one branch."""
    branch: Literal["nonconvex", "convex"]
    eta_max: Optional[float] = Field(None, description="None when the bound is vacuous")
    vacuous: bool = False
    q: Optional[float] = None
    ab_lower: Optional[float] = Field(None, description="Lower end of the admissible a/b interval")
    ab_upper: Optional[float] = Field(None, description="Upper end of the admissible a/b interval")
    A_min: Optional[float] = None
    d_upper: Optional[float] = Field(None, description="Largest admissible d (convex branch)")
    message: str = ""


class SagaBounds(BaseModel):
    """Resolved (A, eta) pair of SCDF-SAGA."""
    branch: Literal["nonconvex", "convex"]
    A_min: Optional[float] = None
    eta_max: Optional[float] = None
    Y1: Optional[float] = None
    Y2: Optional[float] = None
    Y3: Optional[float] = None
    Y: Optional[float] = None
    feasible: bool = True
    iterations: int = 0
    message: str = ""


class ContractionFactor(BaseModel):
    """Per-epoch contraction factor of SCDF-SVRG."""
    branch: Literal["nonconvex", "convex"]
    factor: Optional[float] = None
    contractive: bool = False
    feasible: bool = True
    a_over_b: Optional[float] = None
    tail: Optional[float] = Field(None, description="d2 or e2 term")
    d2_form: Literal["theorem", "lemma"] = "theorem"
    message: str = ""


class VarianceCheck(BaseModel):
    """Exact inner-estimator variance against its bound."""
    variance: float
    bound: float
    within_bound: bool


class CorollaryBounds(BaseModel):
    """Bounds on the gradient-estimate second moment near the optimum."""
    svrg: float
    saga: float
