"""Service for parsing experiment configs.

Format: ``key = value`` lines, ``#`` comments (at line start or after
whitespace, so ``results#1`` is a value), and sections

    [problem]              problem family, sizes and seed (seed is required)
    [sweep]                comma-separated kappa and batch lists
    [algorithm <label>]    one optimizer run; label unique per config

Keys before the first section are experiment-wide (output_dir, record_every,
plot, html, timing, safety_factor). Every issue found is reported with its
line number, not just the first.
"""
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from compopt.config import ALGORITHM_NAMES
from compopt.exceptions import ConfigParseError
from compopt.models.schemas import AlgorithmSpec, ExperimentConfig, ProblemSpec

_SECTION = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([^\]\s]+))?\s*\]$")
_COMMENT = re.compile(r"(?:^|\s)#")

GLOBAL_KEYS = {"output_dir", "record_every", "plot", "html", "timing", "safety_factor"}
PROBLEM_KEYS = {
    "family", "n", "m", "N", "M", "kappa", "lambda", "seed",
    "unregularized_shift", "noise", "alpha", "path",
}
SWEEP_KEYS = {"kappa", "batch"}
ALGORITHM_KEYS = {
    "name", "eta", "epochs", "inner_iters", "batch", "max_queries", "schedule", "alpha", "beta",
}
# config spelling -> model field
_RENAMES = {"lambda": "lam"}
# methods whose step size may be left to the theoretical default
_OPTIONAL_ETA = ("scdf-svrg", "scdf-saga", "scgd")


class _Section:
    """Raw key/value pairs of one section with the line each came from."""

    def __init__(self, kind: str, label: Optional[str], line: int):
        self.kind = kind
        self.label = label
        self.line = line
        self.values: Dict[str, str] = {}
        self.lines: Dict[str, int] = {}

    def line_of(self, key: str) -> int:
        return self.lines.get(key, self.line)


class ConfigService:
    """Service for turning config text into a validated ExperimentConfig."""

    _allowed = {
        "global": GLOBAL_KEYS,
        "problem": PROBLEM_KEYS,
        "sweep": SWEEP_KEYS,
        "algorithm": ALGORITHM_KEYS,
    }

    def _split(self, text: str, issues: List[Tuple[int, str]]) -> List[_Section]:
        sections = [_Section("global", None, 0)]
        seen_single: Dict[str, int] = {}
        seen_labels: Dict[str, int] = {}
        for number, raw in enumerate(text.splitlines(), start=1):
            line = _COMMENT.split(raw, 1)[0].strip()
            if not line:
                continue

            header = _SECTION.match(line)
            if header:
                kind, label = header.group(1).lower(), header.group(2)
                if kind not in ("problem", "sweep", "algorithm"):
                    issues.append((number, f"unknown section [{kind}]"))
                    sections.append(_Section("ignored", None, number))
                elif kind == "algorithm":
                    if label is None:
                        issues.append((number, "algorithm section needs a label: [algorithm <label>]"))
                    elif label in seen_labels:
                        issues.append(
                            (number, f"duplicate algorithm label {label!r} (lines {seen_labels[label]} and {number})")
                        )
                    else:
                        seen_labels[label] = number
                    sections.append(_Section(kind, label, number))
                else:
                    if label is not None:
                        issues.append((number, f"section [{kind}] takes no label"))
                    if kind in seen_single:
                        issues.append((number, f"duplicate [{kind}] section (first at line {seen_single[kind]})"))
                    seen_single[kind] = number
                    sections.append(_Section(kind, None, number))
                continue

            if "=" not in line:
                issues.append((number, f"expected 'key = value', got {line!r}"))
                continue
            key, value = (part.strip() for part in line.split("=", 1))
            section = sections[-1]
            if section.kind == "ignored":
                continue
            if key not in self._allowed[section.kind]:
                where = "before any section" if section.kind == "global" else f"in [{section.kind}]"
                issues.append((number, f"unknown key {key!r} {where}"))
                continue
            if key in section.values:
                issues.append((number, f"duplicate key {key!r} (first at line {section.lines[key]})"))
                continue
            if not value:
                issues.append((number, f"key {key!r} has no value"))
                continue
            section.values[key] = value
            section.lines[key] = number
        return sections

    @staticmethod
    def _fields(section: _Section) -> Dict[str, str]:
        return {_RENAMES.get(k, k): v for k, v in section.values.items()}

    @staticmethod
    def _collect(exc: ValidationError, section: _Section, issues: List[Tuple[int, str]]) -> None:
        reverse = {v: k for k, v in _RENAMES.items()}
        for error in exc.errors():
            field = str(error["loc"][0]) if error["loc"] else ""
            key = reverse.get(field, field)
            if error["type"] == "missing":
                issues.append((section.line, f"missing {key}"))
            elif key == "name" and section.kind == "algorithm":
                issues.append(
                    (section.line_of(key), f"invalid algorithm name {section.values.get(key)!r}; "
                                           f"expected one of {', '.join(ALGORITHM_NAMES)}")
                )
            else:
                issues.append((section.line_of(key), f"{key}: {error['msg']}"))

    def parse(self, text: str) -> ExperimentConfig:
        """Parse config text; raise ConfigParseError listing every issue."""
        issues: List[Tuple[int, str]] = []
        sections = self._split(text, issues)
        glob = sections[0]
        problems = [s for s in sections if s.kind == "problem"]
        sweeps = [s for s in sections if s.kind == "sweep"]
        algorithms = [s for s in sections if s.kind == "algorithm" and s.label is not None]

        problem: Optional[ProblemSpec] = None
        if not problems:
            issues.append((0, "config has no [problem] section"))
        else:
            section = problems[0]
            try:
                problem = ProblemSpec(**self._fields(section))
            except ValidationError as exc:
                self._collect(exc, section, issues)

        kappas: List[float] = []
        batches: List[int] = []
        if sweeps:
            section = sweeps[0]
            for key, cast, target in (("kappa", float, kappas), ("batch", int, batches)):
                if key not in section.values:
                    continue
                try:
                    target.extend(cast(item.strip()) for item in section.values[key].split(","))
                except ValueError:
                    issues.append((section.line_of(key), f"{key}: expected a comma-separated list of numbers"))

        specs: List[AlgorithmSpec] = []
        seen: set = set()
        if not algorithms:
            issues.append((0, "config defines no [algorithm <label>] sections"))
        for section in algorithms:
            if section.label in seen:
                continue
            seen.add(section.label)
            try:
                spec = AlgorithmSpec(label=section.label, line=section.line, **self._fields(section))
            except ValidationError as exc:
                self._collect(exc, section, issues)
                continue
            has_step = spec.eta is not None or (spec.name == "scgd" and spec.alpha is not None)
            if not has_step and spec.name not in _OPTIONAL_ETA:
                issues.append((section.line, f"algorithm {spec.label!r} ({spec.name}) needs eta"))
            elif not has_step and spec.name == "scgd":
                issues.append((section.line, f"algorithm {spec.label!r} (scgd) needs alpha or eta"))
            specs.append(spec)

        if issues:
            raise ConfigParseError(issues)
        try:
            return ExperimentConfig(problem=problem, algorithms=specs, kappas=kappas, batches=batches,
                                    **self._fields(glob))
        except ValidationError as exc:
            self._collect(exc, glob, issues)
            raise ConfigParseError(issues) from None

    def load(self, path) -> ExperimentConfig:
        """Parse the config file at ``path``."""
        return self.parse(Path(path).read_text(encoding="utf-8"))


# Global instance
config_service = ConfigService()


def parse_config(text: str) -> ExperimentConfig:
    return config_service.parse(text)
