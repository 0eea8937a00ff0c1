"""Helpers shared by the sub-commands."""
from typing import Optional

from compopt.exceptions import ConfigParseError
from compopt.models.schemas import ExperimentConfig
from compopt.services.config_service import config_service

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def load_config(path: str, out: Optional[str] = None, seed_override: Optional[int] = None) -> ExperimentConfig:
    """Parse ``path`` and apply the --out and --seed-override flags."""
    cfg = config_service.load(path)
    if out is not None:
        cfg = cfg.model_copy(update={"output_dir": out})
    if seed_override is not None:
        cfg = cfg.model_copy(update={"problem": cfg.problem.model_copy(update={"seed": seed_override})})
    return cfg


def print_issues(exc: ConfigParseError) -> None:
    print(f"❌ Invalid config ({len(exc.issues)} issue{'s' if len(exc.issues) != 1 else ''}):")
    for line, message in exc.issues:
        print(f"   line {line}: {message}" if line else f"   {message}")
