"""Plain-text persistence of mean-variance instances.

Format: a header line ``n N lambda`` followed by n whitespace-separated reward
rows. Floats are written with 17 significant digits, so a reload is bit-exact.
"""
import logging
from pathlib import Path
from typing import Union

import numpy as np

from compopt.config import CSV_FLOAT_FORMAT
from compopt.exceptions import ConfigurationError
from compopt.problems.mean_variance import MeanVarianceProblem

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def save_problem(problem: MeanVarianceProblem, path: PathLike) -> Path:
    if not isinstance(problem, MeanVarianceProblem):
        raise ConfigurationError(
            f"only mean-variance instances are serialised; regenerate {problem.family} from its seed"
        )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"{problem.n} {problem.dim_x} {problem.lam!r}"
    np.savetxt(path, problem.rewards, fmt=CSV_FLOAT_FORMAT, header=header, comments="")
    logger.info(f"saved {problem!r} to {path}")
    return path


def load_problem(path: PathLike, unregularized_shift: bool = False) -> MeanVarianceProblem:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
    if len(header) != 3:
        raise ConfigurationError(f"{path}: header must be 'n N lambda', got {' '.join(header)!r}")
    n, dim, lam = int(header[0]), int(header[1]), float(header[2])
    rewards = np.loadtxt(path, skiprows=1, ndmin=2)
    if rewards.shape != (n, dim):
        raise ConfigurationError(f"{path}: expected {n} rows of {dim} rewards, got shape {rewards.shape}")
    return MeanVarianceProblem(rewards, lam, unregularized_shift=unregularized_shift)
