"""Service for reading and writing trace and summary CSVs."""
import logging
from pathlib import Path
from typing import Dict, List

import pandas as pd

from compopt.config import CSV_FLOAT_FORMAT, TRACE_COLUMNS
from compopt.core.trace import Trace
from compopt.models.report_schemas import RunSummary

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "cell", "label", "algorithm", "status", "iterations", "queries",
    "g_evals", "g_jacs", "f_grads", "final_objective", "final_gap",
]


class CSVService:
    """Service for the flat-file outputs of an experiment."""

    def trace_path(self, out_dir, cell: str, label: str) -> Path:
        return Path(out_dir) / cell / f"{label}.csv"

    def write_trace(self, trace: Trace, path) -> Path:
        """Write ``iter,queries,objective,gap,grad_est_sq,ms`` with 17 significant digits."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        trace.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="NaN")
        logger.debug(f"wrote {len(trace)} rows to {path}")
        return path

    def read_trace(self, path, label: str = "") -> Trace:
        path = Path(path)
        frame = pd.read_csv(path)
        missing = [c for c in TRACE_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"{path} is not a trace file (missing columns {missing})")
        return Trace.from_frame(frame, label or path.stem)

    def read_cell(self, cell_dir) -> Dict[str, Trace]:
        """Every trace CSV in a cell directory, keyed by label, in name order; summary.csv is skipped."""
        paths = sorted(p for p in Path(cell_dir).glob("*.csv") if p.name != "summary.csv")
        return {p.stem: self.read_trace(p) for p in paths}

    def summary_frame(self, rows: List[RunSummary]) -> pd.DataFrame:
        records = []
        for row in rows:
            record = row.model_dump(include={"cell", "label", "algorithm", "status", "iterations",
                                             "queries", "final_objective", "final_gap"})
            for key in ("g_evals", "g_jacs", "f_grads"):
                record[key] = row.counts.get(key, 0)
            records.append(record)
        return pd.DataFrame.from_records(records, columns=SUMMARY_COLUMNS)

    def write_summary(self, rows: List[RunSummary], out_dir) -> Path:
        """Write summary.csv and a fixed-width summary.txt; return the text path."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        frame = self.summary_frame(rows)
        frame.to_csv(out_dir / "summary.csv", index=False, float_format=CSV_FLOAT_FORMAT, na_rep="NaN")
        text_path = out_dir / "summary.txt"
        text_path.write_text(
            frame.to_string(index=False, na_rep="NaN", float_format=lambda v: f"{v:.6e}") + "\n",
            encoding="utf-8",
        )
        return text_path


# Global instance
csv_service = CSVService()
