"""Monitoring of the gradient-estimate norm recorded in traces."""
import math

import numpy as np
import pandas as pd

from compopt.core.trace import Trace
from compopt.models.report_schemas import EstimateNormReport


def gradient_estimate_norm_monitor(trace: Trace) -> pd.Series:
    """Recorded squared gradient-estimate norms, indexed by iteration."""
    return pd.Series(trace.grad_est_sq, index=trace.iterations.astype(int), name="grad_est_sq")


def log10_slope(series: pd.Series) -> float:
    """Least-squares slope of log10(value) against iteration; zeros are floored at the smallest float."""
    values = series.dropna()
    if len(values) < 2 or values.index.nunique() < 2:
        return 0.0
    logs = np.log10(np.maximum(values.to_numpy(dtype=float), np.finfo(float).tiny))
    slope, _ = np.polyfit(values.index.to_numpy(dtype=float), logs, 1)
    return float(slope)


def summarize_estimate_norms(series: pd.Series, decay: float = 1e-10) -> EstimateNormReport:
    initial, final = float(series.iloc[0]), float(series.iloc[-1])
    if initial > 0:
        ratio = final / initial
    else:
        ratio = 0.0 if final == 0 else math.inf
    slope = log10_slope(series)
    return EstimateNormReport(
        initial=initial,
        final=final,
        ratio=ratio,
        decayed=ratio <= decay,
        log10_slope=slope,
        non_decreasing=slope >= 0,
    )
