"""Pydantic models for runs and experiment configs."""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from compopt.config import OUTPUT_DIR, SAFETY_FACTOR

AlgorithmName = Literal["scdf", "scdf-svrg", "scdf-saga", "sgd", "sgd-exact", "scgd", "c-svrg"]
ProblemFamily = Literal["mean-variance", "bellman", "split-quadratic"]


class RunConfig(BaseModel):
    """Loop bounds and bookkeeping of one optimizer run."""
    eta: float = Field(..., ge=0, description="Step size")
    epochs: int = Field(1, ge=0, description="Outer epochs S")
    inner_iters: int = Field(..., ge=0, description="Inner iterations K per epoch")
    batch: int = Field(1, ge=1, description="Inner mini-batch size A")
    record_every: int = Field(1, ge=1, description="Trace row every this many iterations")
    seed: int = Field(..., ge=0)
    max_queries: Optional[int] = Field(None, ge=0, description="Budget in G-oracle queries")
    timing: bool = Field(True, description="Record wall-clock ms; 0 otherwise")
    enumerate_batch: bool = Field(False, description="Use every inner index once per step (requires batch = m)")

    @property
    def total_iters(self) -> int:
        return self.epochs * self.inner_iters


class ScgdSchedule(BaseModel):
    """Step and tracking weights of SCGD.

    constant: alpha_k = alpha, beta_k = beta.
    polynomial: alpha_k = alpha * k^(-3/4), beta_k = beta * k^(-1/2).
    """
    kind: Literal["constant", "polynomial"] = "polynomial"
    alpha: float = Field(..., ge=0)
    beta: float

    def rates(self, k: int) -> Tuple[float, float]:
        if self.kind == "constant":
            return self.alpha, self.beta
        return self.alpha * k ** -0.75, self.beta * k ** -0.5


class ProblemSpec(BaseModel):
    """Built-in problem instance, regenerated from its seed."""
    family: ProblemFamily = "mean-variance"
    n: int = Field(200, ge=2, description="Reward samples (mean-variance)")
    m: int = Field(20, ge=1, description="Inner components (bellman, split-quadratic)")
    N: int = Field(20, ge=1, description="Decision dimension")
    M: Optional[int] = Field(None, ge=1, description="Inner output dimension (defaults to N)")
    kappa: float = Field(10.0, ge=1)
    lam: float = Field(0.1, ge=0, description="Regularisation weight lambda")
    seed: int = Field(..., ge=0)
    unregularized_shift: bool = False
    noise: float = Field(0.5, ge=0)
    alpha: float = Field(2.0, gt=0, description="Concave curvature (split-quadratic)")
    path: Optional[str] = Field(None, description="Load mean-variance rewards from this file")


class AlgorithmSpec(BaseModel):
    """One `[algorithm <label>]` section."""
    label: str
    name: AlgorithmName
    eta: Optional[float] = Field(None, ge=0, description="None: theoretical default (scdf-svrg, scdf-saga)")
    epochs: int = Field(1, ge=0)
    inner_iters: int = Field(..., ge=0)
    batch: int = Field(1, ge=1)
    max_queries: Optional[int] = Field(None, ge=0)
    schedule: Literal["constant", "polynomial"] = "polynomial"
    alpha: Optional[float] = Field(None, ge=0, description="SCGD step weight")
    beta: Optional[float] = Field(None, description="SCGD tracking weight")
    line: int = Field(0, description="Config line of the section header")

    def scgd_schedule(self) -> ScgdSchedule:
        return ScgdSchedule(
            kind=self.schedule,
            alpha=self.alpha if self.alpha is not None else (self.eta or 0.0),
            beta=self.beta if self.beta is not None else 1.0,
        )


class ExperimentCell(BaseModel):
    """One (kappa, batch) point of the sweep."""
    name: str
    kappa: float
    batch: Optional[int] = None


class ExperimentConfig(BaseModel):
    """A fully validated experiment config."""
    problem: ProblemSpec
    algorithms: List[AlgorithmSpec] = Field(..., min_length=1)
    kappas: List[float] = Field(default_factory=list)
    batches: List[int] = Field(default_factory=list)
    output_dir: str = str(OUTPUT_DIR)
    record_every: int = Field(1, ge=1)
    plot: bool = True
    html: bool = False
    timing: bool = True
    safety_factor: float = Field(SAFETY_FACTOR, gt=0)

    def cells(self) -> List[ExperimentCell]:
        kappas = self.kappas or [self.problem.kappa]
        if not self.batches:
            return [ExperimentCell(name=f"kappa={k:g}", kappa=k) for k in kappas]
        return [
            ExperimentCell(name=f"kappa={k:g}_A={a}", kappa=k, batch=a)
            for k in kappas
            for a in self.batches
        ]
