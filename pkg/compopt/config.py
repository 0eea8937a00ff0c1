"""Configuration settings for compopt."""
import logging
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent

# Output directory for trace CSVs, plots and summaries
OUTPUT_DIR = Path(os.getenv("COMPOPT_OUTPUT_DIR", str(PROJECT_ROOT / "results")))

# Shipped experiment configs
CONFIGS_DIR = PROJECT_ROOT / "configs"

# Default worker count for `compopt run --jobs`
DEFAULT_JOBS = int(os.getenv("COMPOPT_JOBS", "1"))

# Multiplier applied to empirically estimated constants before they feed a bound
SAFETY_FACTOR = float(os.getenv("COMPOPT_SAFETY_FACTOR", "1.2"))

# Objective magnitude treated as divergence
DIVERGENCE_LIMIT = float(os.getenv("COMPOPT_DIVERGENCE_LIMIT", "1e12"))

LOG_LEVEL = os.getenv("COMPOPT_LOG_LEVEL", "WARNING").upper()

# Finite differences: central scheme with step FD_STEP * (1 + ||x||)
FD_STEP = 1e-6
GRADCHECK_TOL = 1e-5

# SAGA running averages are rebuilt from the caches after this many updates
SAGA_RECOMPUTE_PERIOD = 100_000

# Fixed-point resolution of the coupled (A, eta) conditions
FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 1000

# Optimum oracle
OPTIMUM_GTOL = 1e-12
OPTIMUM_MAX_ITER = 1_000_000

# Power iterations used for the spectral-norm surrogate
POWER_ITERATIONS = 50

# CSV schema of every trace file
TRACE_COLUMNS = ["iter", "queries", "objective", "gap", "grad_est_sq", "ms"]
CSV_FLOAT_FORMAT = "%.17g"

# Algorithm names accepted in experiment configs
ALGORITHM_NAMES = ("scdf", "scdf-svrg", "scdf-saga", "sgd", "sgd-exact", "scgd", "c-svrg")

PROBLEM_FAMILIES = ("mean-variance", "bellman", "split-quadratic")


def configure_logging(level: str = LOG_LEVEL) -> None:
    """Set up root logging for command-line use."""
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
