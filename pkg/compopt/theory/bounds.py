"""Step-size and batch-size bounds of the duality-free methods.

Pure functions of the problem constants. Shorthand used throughout:

    c = B_G^4 L_F^2        h = B_F^2 L_G^2

The non-convex branches assume only the smoothness constants; the convex
branches additionally take a convexity margin d in (0, 1) and use L_f.
"""
import logging
import math
from typing import Literal, Optional, Sequence

import numpy as np

from compopt.config import FIXED_POINT_MAX_ITER, FIXED_POINT_TOL
from compopt.core.oracles import inner_value
from compopt.core.problem import CompositionProblem
from compopt.estimators.svrg import SvrgSnapshot
from compopt.exceptions import ConfigurationError
from compopt.models.theory_schemas import (
    ContractionFactor,
    CorollaryBounds,
    ProblemConstants,
    SagaBounds,
    SvrgStepBound,
    VarianceCheck,
)

logger = logging.getLogger(__name__)

D2Form = Literal["theorem", "lemma"]


def _check_common(lam: float, n: int, A: Optional[float] = None) -> None:
    if lam <= 0:
        raise ConfigurationError(f"bounds need lambda > 0, got {lam}")
    if n < 1:
        raise ConfigurationError(f"n must be positive, got {n}")
    if A is not None and A <= 0:
        raise ConfigurationError(f"batch size must be positive, got {A}")


def _check_margin(d: Optional[float]) -> float:
    if d is None or not 0 < d < 1:
        raise ConfigurationError(f"convex branch needs d in (0, 1), got {d}")
    return float(d)


def _h(c: ProblemConstants) -> float:
    return c.B_F ** 2 * c.L_G ** 2


# --- SCDF-SVRG ---------------------------------------------------------------


def _svrg_nonconvex_terms(c: ProblemConstants, lam: float, A: float):
    """(H, lower end of a/b) for the non-convex theorem statement."""
    H = 4.0 * _h(c) / A + 4.0 * c.c / A
    # 1/q + 2qc/A with q = A lam / (4c) simplifies to 4c/(A lam) + lam/2
    margin = 0.5 * lam - 4.0 * c.c / (A * lam)
    lower = 2.0 * lam * H / margin if margin > 0 else None
    return H, lower


def svrg_step_bound(
    c: ProblemConstants,
    lam: float,
    n: int,
    A: float,
    convex_outer: bool = False,
    d: Optional[float] = None,
) -> SvrgStepBound:
    """Largest step of SCDF-SVRG with geometric convergence.

    Non-convex F_i:

        eta <= (lam^2/2 - 4c/A) / (2 lam (4h/A + 4c/A) + lam^3 n / 2 - 4 lam c n / A)

    with q = A lam / (4c). The bound is vacuous when A <= 8c/lam^2.

    Convex F_i:  A >= 2 R_x c / d  and  eta <= (1 - d) / (2 L_f + lam n (1 - d)).
    """
    _check_common(lam, n, A)
    if convex_outer:
        d = _check_margin(d)
        A_min = 2.0 * c.R_x * c.c / d
        eta = (1.0 - d) / (2.0 * c.L_f + lam * n * (1.0 - d))
        mix = (2.0 * _h(c) + c.c) / A
        d_upper = (mix + lam * c.L_F * c.R_x * c.c / A) / (mix + lam * c.L_f) if mix + lam * c.L_f > 0 else None
        if A < A_min:
            return SvrgStepBound(
                branch="convex", vacuous=True, A_min=A_min, d_upper=d_upper,
                message=f"batch {A:g} below the required {A_min:.6g}",
            )
        ab_denominator = d - 2.0 * c.R_x * c.c / A
        ab_lower = (2.0 * mix - c.L_f * lam) / ab_denominator if ab_denominator > 0 else None
        return SvrgStepBound(
            branch="convex",
            eta_max=eta,
            A_min=A_min,
            d_upper=d_upper,
            ab_lower=ab_lower,
            ab_upper=(1.0 - n * lam * eta) * lam / eta,
        )

    A_min = 8.0 * c.c / lam ** 2
    q = A * lam / (4.0 * c.c) if c.c > 0 else math.inf
    H, ab_lower = _svrg_nonconvex_terms(c, lam, A)
    numerator = 0.5 * lam ** 2 - 4.0 * c.c / A
    denominator = 2.0 * lam * H + 0.5 * lam ** 3 * n - 4.0 * lam * c.c * n / A
    if numerator <= 0 or denominator <= 0:
        return SvrgStepBound(
            branch="nonconvex", vacuous=True, q=q, A_min=A_min,
            message=f"bound is vacuous: batch {A:g} must exceed 8c/lambda^2 = {A_min:.6g}",
        )
    eta = numerator / denominator
    return SvrgStepBound(
        branch="nonconvex",
        eta_max=eta,
        q=q,
        A_min=A_min,
        ab_lower=ab_lower,
        ab_upper=(1.0 - n * lam * eta) * lam / eta,
    )


def svrg_contraction_factor(
    c: ProblemConstants,
    lam: float,
    n: int,
    K: int,
    A: float,
    eta: float,
    convex_outer: bool = False,
    d: Optional[float] = None,
    d2_form: D2Form = "theorem",
) -> ContractionFactor:
    """Per-epoch factor 1/(eta lam K) + d2/(a eta lam), with a/b at the midpoint of its interval.

    ``d2_form`` selects between the non-convex tail as stated with the theorem
    and the tighter form of the supporting lemma; the convex branch always uses e2.
    The theorem form keeps the q c/A = lam/4 term, which alone adds 1/2 to the
    factor: with unit constants, lam=1, n=10, A=100, K=1000 and eta at half the
    step bound it reads about 1.9985 (not contractive) where the lemma form
    reads about 0.8976.
    """
    _check_common(lam, n, A)
    if K < 1 or eta <= 0:
        raise ConfigurationError(f"need K >= 1 and eta > 0, got K={K}, eta={eta}")
    branch = "convex" if convex_outer else "nonconvex"
    h = _h(c)
    upper = (1.0 - n * lam * eta) * lam / eta

    if convex_outer:
        d = _check_margin(d)
        margin = d - 2.0 * c.R_x * c.c / A
        lower = (2.0 * (2.0 * h + c.c) / A - c.L_f * lam) / margin if margin > 0 else None
        if lower is not None:
            lower = max(lower, 0.0)
    elif d2_form == "lemma":
        margin = 1.0 - 2.0 * c.R_x * c.c / A
        lower = 4.0 * (h + c.c) / margin if margin > 0 else None
    else:
        _, lower = _svrg_nonconvex_terms(c, lam, A)

    if lower is None or upper <= 0 or lower > upper:
        return ContractionFactor(
            branch=branch, feasible=False, d2_form=d2_form,
            message=f"empty a/b interval [{lower}, {upper:.6g}]",
        )
    ratio = 0.5 * (lower + upper)
    a, b = ratio, 1.0

    if convex_outer:
        tail = 2.0 * a * eta * lam * c.R_x * c.c / A + 4.0 * b * lam * eta * (h + c.c) / A
    elif d2_form == "lemma":
        tail = 2.0 * a * eta * lam * c.R_x * c.c / A + 4.0 * b * lam * eta * (h + c.c) * (1.0 + 1.0 / A)
    else:
        H = 4.0 * h / A + 4.0 * c.c / A
        qc_over_A = lam / 4.0
        tail = 2.0 * (a * eta * qc_over_A + b * lam * eta * H) + b * lam * eta * (4.0 * h + 4.0 * c.c)

    factor = 1.0 / (eta * lam * K) + tail / (a * eta * lam)
    return ContractionFactor(
        branch=branch,
        factor=factor,
        contractive=bool(0 < factor < 1),
        a_over_b=ratio,
        tail=tail,
        d2_form=d2_form,
    )


# --- SCDF-SAGA ---------------------------------------------------------------


def _saga_A_min(c: ProblemConstants, lam: float, n: int, eta: float) -> float:
    S = 16.0 * c.R_x * (_h(c) + c.c)
    lead = lam * eta * n
    return 0.5 * (lead + S) + 0.5 * math.sqrt(lead ** 2 + S ** 2)


def _saga_eta_rhs(c: ProblemConstants, lam: float, n: int, A: float, eta: float) -> Optional[float]:
    """Right-hand side of the coupled step condition at the current eta, or None."""
    h = _h(c)
    gap = A - lam * eta * n
    if gap <= 0:
        return None
    rho = A / gap
    Y1 = c.R_x * (h + c.c) / A
    Y2 = h / A + c.c
    Y3 = h / A
    denominator = 2.0 * Y2 + rho * 2.0 * Y3 + lam ** 2 * n * (1.0 - 8.0 * (1.0 + rho) * Y1)
    if denominator <= 0:
        return None
    return lam / denominator


def _saga_resolve_eta(c: ProblemConstants, lam: float, n: int, A: float):
    """Fixed point of eta = rhs(eta) in (0, 1/(lam n)); returns (eta, iterations, message)."""
    ceiling = 1.0 / (lam * n)
    eta = 0.0
    for it in range(1, FIXED_POINT_MAX_ITER + 1):
        nxt = _saga_eta_rhs(c, lam, n, A, eta)
        if nxt is None or not np.isfinite(nxt) or nxt >= ceiling:
            return None, it, f"no fixed point in (0, 1/(lambda n)) = (0, {ceiling:.6g})"
        if abs(nxt - eta) <= FIXED_POINT_TOL:
            return nxt, it, ""
        eta = nxt
    return None, FIXED_POINT_MAX_ITER, f"fixed-point iteration did not settle in {FIXED_POINT_MAX_ITER} steps"


def saga_bounds(
    c: ProblemConstants,
    lam: float,
    n: int,
    A: Optional[float] = None,
    eta: Optional[float] = None,
    convex_outer: bool = False,
    d: Optional[float] = None,
) -> SagaBounds:
    """Resolve the coupled batch and step conditions of SCDF-SAGA.

    Give the batch, the step, or both. With only the batch the step bound is
    solved by fixed-point iteration (and lowered further if the batch condition
    fails at it); with only the step the smallest admissible batch is returned.
    With both, the pair is checked.
    """
    _check_common(lam, n, A)
    if A is None and eta is None:
        raise ConfigurationError("saga_bounds needs the batch size, the step size or both")
    if eta is not None and eta <= 0:
        raise ConfigurationError(f"eta must be positive, got {eta}")
    h = _h(c)

    if convex_outer:
        d = _check_margin(d)
        T = 16.0 * c.R_x * (h + c.B_G ** 4 * c.L_f ** 2) / d
        eta_cap = 1.0 / (2.0 * c.L_f * lam / (1.0 - d) + lam * n)
        if A is None:
            A_min = (2.0 + math.sqrt(2.0)) * (lam * eta * n + T)
            return SagaBounds(branch="convex", A_min=A_min, eta_max=eta_cap, Y=(h + c.c) / A_min,
                              feasible=eta <= eta_cap)
        # largest step the batch admits through A >= (2 + sqrt2)(lam eta n + T)
        eta_batch = (A / (2.0 + math.sqrt(2.0)) - T) / (lam * n)
        eta_max = min(eta_cap, eta_batch)
        chosen = eta if eta is not None else eta_max
        A_min = (2.0 + math.sqrt(2.0)) * (lam * chosen * n + T)
        feasible = eta_max > 0 and A >= A_min and chosen <= eta_cap
        return SagaBounds(
            branch="convex", A_min=A_min, eta_max=eta_max if eta_max > 0 else None, Y=(h + c.c) / A,
            feasible=feasible, message="" if feasible else f"batch {A:g} is too small for the step",
        )

    if A is None:
        A_min = _saga_A_min(c, lam, n, eta)
        rhs = _saga_eta_rhs(c, lam, n, A_min, eta)
        feasible = rhs is not None and eta <= rhs
        return SagaBounds(
            branch="nonconvex", A_min=A_min, eta_max=rhs,
            Y1=c.R_x * (h + c.c) / A_min, Y2=h / A_min + c.c, Y3=h / A_min,
            feasible=feasible, message="" if feasible else "step violates its own bound at A_min",
        )

    Y1, Y2, Y3 = c.R_x * (h + c.c) / A, h / A + c.c, h / A
    eta_max, iterations, message = _saga_resolve_eta(c, lam, n, A)
    if eta_max is None:
        logger.info(f"saga_bounds: {message}")
        return SagaBounds(branch="nonconvex", Y1=Y1, Y2=Y2, Y3=Y3, feasible=False,
                          iterations=iterations, message=message)

    S = 16.0 * c.R_x * (h + c.c)
    if A < _saga_A_min(c, lam, n, eta_max):
        # solve A = A_min(eta) for the step; positive only when A > S
        if A <= S:
            return SagaBounds(
                branch="nonconvex", A_min=S, Y1=Y1, Y2=Y2, Y3=Y3, feasible=False, iterations=iterations,
                message=f"batch {A:g} does not exceed 16 R_x (h + c) = {S:.6g}",
            )
        eta_max = A * (A - S) / (lam * n * (A - 0.5 * S))

    chosen = eta if eta is not None else eta_max
    A_min = _saga_A_min(c, lam, n, chosen)
    feasible = chosen <= eta_max and A >= A_min
    return SagaBounds(
        branch="nonconvex", A_min=A_min, eta_max=eta_max, Y1=Y1, Y2=Y2, Y3=Y3,
        feasible=feasible, iterations=iterations,
        message="" if feasible else f"step {chosen:g} exceeds the bound {eta_max:.6g}",
    )


# --- diagnostics -------------------------------------------------------------


def svrg_inner_variance(
    problem: CompositionProblem,
    snapshot: SvrgSnapshot,
    x,
    A: int,
    constants: ProblemConstants,
) -> VarianceCheck:
    """Exact E||G_hat - G(x)||^2 of the SVRG inner estimate against B_G^2 ||x - x~||^2 / A.

    With A indices drawn uniformly with replacement the variance is the
    single-index variance over all m components divided by A.
    """
    x = problem.check_x(x)
    diffs = problem.eval_g_batch(range(problem.m), x) - problem.eval_g_batch(range(problem.m), snapshot.x_tilde)
    centred = diffs - (inner_value(problem, x) - snapshot.g_tilde)
    variance = float(np.mean(np.sum(centred ** 2, axis=1))) / A
    bound = constants.B_G ** 2 * float(np.sum((x - snapshot.x_tilde) ** 2)) / A
    return VarianceCheck(variance=variance, bound=bound, within_bound=variance <= bound * (1.0 + 1e-12))


def saga_deviation_bound(constants: ProblemConstants, A: int, distances: Sequence[float]) -> float:
    """(2h + 2c) (1/A^2) sum_j ||x - phi_j||^2 over the A sampled table entries."""
    dist = np.asarray(distances, dtype=float)
    return (2.0 * _h(constants) + 2.0 * constants.c) * float(np.sum(dist ** 2)) / A ** 2


def corollary_bounds(
    constants: ProblemConstants,
    A: int,
    x_snapshot_sq: float,
    snapshot_opt_sq: float,
    x_opt_sq: float,
    phi_opt_sq: Sequence[float],
    dual_dev_sq: float,
) -> CorollaryBounds:
    """Second-moment bounds of the SVRG and SAGA gradient estimates near the optimum.

    Arguments are squared distances: ||x - x~||^2, ||x~ - x*||^2, ||x - x*||^2,
    ||phi_j - x*||^2 for the sampled entries, and ||beta_i - beta_i*||^2.
    """
    h, c = _h(constants), constants.c
    svrg = (4.0 * h / A + 4.0 * c / A) * x_snapshot_sq + (4.0 * h + 4.0 * c) * snapshot_opt_sq + dual_dev_sq
    saga = (
        4.0 * (h / A + c) * x_opt_sq
        + 4.0 * h * float(np.sum(np.asarray(phi_opt_sq, dtype=float))) / A ** 2
        + 2.0 * dual_dev_sq
    )
    return CorollaryBounds(svrg=svrg, saga=saga)
