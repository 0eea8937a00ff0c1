"""Built-in benchmark problems and their optimum oracle."""
from compopt.core.problem import CompositionProblem
from compopt.models.schemas import ProblemSpec
from compopt.problems.bellman import BellmanToyProblem, generate_bellman_toy
from compopt.problems.mean_variance import MeanVarianceProblem, generate_mean_variance
from compopt.problems.optimum import newton_polish, optimum_oracle
from compopt.problems.serialization import load_problem, save_problem
from compopt.problems.split_quadratic import SplitQuadraticProblem, generate_split_quadratic


def build_problem(spec: ProblemSpec) -> CompositionProblem:
    """Instantiate the problem a config describes."""
    if spec.family == "mean-variance":
        if spec.path:
            return load_problem(spec.path, unregularized_shift=spec.unregularized_shift)
        return generate_mean_variance(
            spec.n, spec.N, spec.kappa, spec.seed, lam=spec.lam,
            unregularized_shift=spec.unregularized_shift,
        )
    M = spec.M or spec.N
    if spec.family == "bellman":
        return generate_bellman_toy(spec.m, M, spec.N, spec.lam, spec.seed, noise=spec.noise)
    return generate_split_quadratic(spec.m, M, spec.N, spec.alpha, spec.lam, spec.seed, noise=spec.noise)


__all__ = [
    "BellmanToyProblem",
    "MeanVarianceProblem",
    "SplitQuadraticProblem",
    "build_problem",
    "generate_bellman_toy",
    "generate_mean_variance",
    "generate_split_quadratic",
    "load_problem",
    "newton_polish",
    "optimum_oracle",
    "save_problem",
]
