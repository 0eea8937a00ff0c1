"""Empirical estimates of the smoothness and boundedness constants.

Every value is a maximum over sampled points or pairs, so it bounds the true
supremum from below. Callers feeding these into step bounds should inflate them
(see ProblemConstants.scaled).
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from compopt.config import POWER_ITERATIONS
from compopt.core.oracles import composition_value, inner_jacobian, inner_value
from compopt.core.problem import CompositionProblem
from compopt.exceptions import ConfigurationError
from compopt.models.theory_schemas import ProblemConstants
from compopt.problems.optimum import optimum_oracle
from compopt.services.prng import PrngStream

logger = logging.getLogger(__name__)

# Jacobians are materialised this many components at a time
_CHUNK = 64
_MAX_DOUBLINGS = 60
_BISECTIONS = 50


def spectral_norms(mats: np.ndarray, stream: PrngStream, iterations: int = POWER_ITERATIONS) -> np.ndarray:
    """Largest singular value of each matrix in a (k, p, q) stack by power iteration."""
    k, _, q = mats.shape
    v = stream.standard_normal((k, q))
    for _ in range(iterations):
        v = np.einsum("kpq,kp->kq", mats, np.einsum("kpq,kq->kp", mats, v))
        norms = np.linalg.norm(v, axis=1)
        nonzero = norms > 0
        v[nonzero] /= norms[nonzero, None]
    return np.linalg.norm(np.einsum("kpq,kq->kp", mats, v), axis=1)


def _subset(stream: PrngStream, size: int, limit: Optional[int]) -> np.ndarray:
    if limit is None or size <= limit:
        return np.arange(size)
    return np.sort(stream.generator.choice(size, size=limit, replace=False))


def _chunks(indices: np.ndarray):
    for start in range(0, indices.size, _CHUNK):
        yield indices[start:start + _CHUNK]


def _point_pairs(
    stream: PrngStream, points: List[np.ndarray], pairs: int
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """``pairs`` random pairs of sample points plus ``pairs`` local perturbations."""
    out = []
    a = stream.integers(len(points), size=pairs)
    b = stream.integers(len(points), size=pairs)
    for p, q in zip(a, b):
        out.append((points[p], points[q]))
    for p in range(pairs):
        u = points[p % len(points)]
        direction = stream.standard_normal(u.size)
        direction /= np.linalg.norm(direction)
        out.append((u, u + 0.1 * (1.0 + np.linalg.norm(u)) * direction))
    return out


def _composition_gradients(problem: CompositionProblem, outer_idx: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rows dG(x)^T grad F_i(G(x)) for the given outer indices."""
    return problem.grad_f_batch(outer_idx, inner_value(problem, x)) @ inner_jacobian(problem, x)


def _farthest_on_ray(problem: CompositionProblem, x0: np.ndarray, direction: np.ndarray, level: float) -> float:
    """Largest t with F(G(x0 + t u)) <= level, assuming the sublevel set is convex."""
    def inside(t: float) -> bool:
        value = composition_value(problem, x0 + t * direction)
        return bool(np.isfinite(value) and value <= level)

    lo, hi = 0.0, 1.0
    doublings = 0
    while inside(hi):
        lo, hi = hi, 2.0 * hi
        doublings += 1
        if doublings >= _MAX_DOUBLINGS:
            return float("inf")
    for _ in range(_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def level_set_radius(
    problem: CompositionProblem, x0: np.ndarray, directions: int, stream: PrngStream
) -> float:
    """R_x with lambda R_x = max ||x* - x||^2 over {F(G(x)) <= F(G(x0))}, swept along rays from x0."""
    if problem.lam <= 0:
        logger.warning("level-set radius needs lambda > 0; reporting inf")
        return float("inf")
    x_star, _ = optimum_oracle(problem)
    level = composition_value(problem, x0)
    best = float(np.sum((x_star - x0) ** 2))
    for _ in range(directions):
        u = stream.standard_normal(problem.dim_x)
        u /= np.linalg.norm(u)
        t = _farthest_on_ray(problem, x0, u, level)
        if not np.isfinite(t):
            logger.warning("sublevel set of F(G(x)) looks unbounded; R_x = inf")
            return float("inf")
        best = max(best, float(np.sum((x_star - (x0 + t * u)) ** 2)))
    return best / problem.lam


def estimate_constants(
    problem: CompositionProblem,
    sample_points: Sequence,
    pairs: int,
    seed: int,
    max_components: Optional[int] = None,
) -> ProblemConstants:
    """Estimate B_F, L_F, B_G, L_G, L_f and R_x from samples.

    B_F and B_G are maxima over the sample points (B_G by power iteration). L_F,
    L_G and L_f are maximal difference ratios over random point pairs and local
    perturbations; coincident pairs are skipped. R_x comes from a sweep along
    ``pairs`` random rays from the first sample point. ``max_components`` caps
    how many outer and inner indices are examined. Deterministic given ``seed``.
    """
    points = [problem.check_x(x).astype(float) for x in sample_points]
    if len(points) < 2:
        raise ConfigurationError("estimate_constants needs at least two sample points")
    if pairs < 1:
        raise ConfigurationError(f"pairs must be positive, got {pairs}")

    stream = PrngStream(seed, "constants")
    outer_idx = _subset(stream.child("outer-subset"), problem.n, max_components)
    inner_idx = _subset(stream.child("inner-subset"), problem.m, max_components)
    power = stream.child("power")

    B_F = B_G = 0.0
    for x in points:
        grads = problem.grad_f_batch(outer_idx, inner_value(problem, x))
        B_F = max(B_F, float(np.max(np.linalg.norm(grads, axis=1))))
        for chunk in _chunks(inner_idx):
            B_G = max(B_G, float(np.max(spectral_norms(problem.jac_g_batch(chunk, x), power))))

    L_F = L_G = L_f = 0.0
    skipped = 0
    for u, v in _point_pairs(stream.child("x-pairs"), points, pairs):
        dist = float(np.linalg.norm(u - v))
        if dist == 0.0:
            skipped += 1
            continue
        for chunk in _chunks(inner_idx):
            diff = problem.jac_g_batch(chunk, u) - problem.jac_g_batch(chunk, v)
            if np.any(diff):
                L_G = max(L_G, float(np.max(spectral_norms(diff, power))) / dist)
        diff = _composition_gradients(problem, outer_idx, u) - _composition_gradients(problem, outer_idx, v)
        L_f = max(L_f, float(np.max(np.linalg.norm(diff, axis=1))) / dist)

    y_points = [inner_value(problem, x) for x in points]
    for u, v in _point_pairs(stream.child("y-pairs"), y_points, pairs):
        dist = float(np.linalg.norm(u - v))
        if dist == 0.0:
            skipped += 1
            continue
        diff = problem.grad_f_batch(outer_idx, u) - problem.grad_f_batch(outer_idx, v)
        L_F = max(L_F, float(np.max(np.linalg.norm(diff, axis=1))) / dist)

    R_x = level_set_radius(problem, points[0], pairs, stream.child("level-set"))
    if skipped:
        logger.debug(f"estimate_constants: skipped {skipped} coincident pairs")

    constants = ProblemConstants(B_F=B_F, L_F=L_F, B_G=B_G, L_G=L_G, L_f=L_f, R_x=R_x)
    logger.info(f"estimated constants for {problem!r}: {constants.model_dump()}")
    return constants
