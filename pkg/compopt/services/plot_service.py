"""Service for convergence plots: static SVG written by hand, optional plotly HTML."""
import logging
import math
from html import escape
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import plotly.graph_objects as go

from compopt.core.trace import Trace

logger = logging.getLogger(__name__)

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]
GAP_FLOOR = 1e-16

WIDTH, HEIGHT = 720, 460
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 170, 40, 50


def plot_series(trace: Trace) -> Tuple[np.ndarray, np.ndarray, str]:
    """(queries, y, y label) for one trace: log10 of the gap, or the objective when gaps are unknown."""
    gaps = trace.gaps
    if len(gaps) and np.all(np.isfinite(gaps)):
        return trace.queries, np.log10(np.maximum(gaps, GAP_FLOOR)), "log10(gap)"
    return trace.queries, trace.objectives, "objective"


def _ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    if hi <= lo:
        return [lo]
    return list(np.linspace(lo, hi, count))


class PlotService:
    """Service for rendering one cell's traces."""

    def render_svg(self, traces: Dict[str, Trace], title: str) -> str:
        series = {label: plot_series(t) for label, t in traces.items() if len(t)}
        if not series:
            return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}">'
                    f'<text x="20" y="30">{escape(title)}: no data</text></svg>\n')
        y_label = "log10(gap)" if all(s[2] == "log10(gap)" for s in series.values()) else "objective"
        xs = np.concatenate([s[0] for s in series.values()])
        ys = np.concatenate([s[1] for s in series.values()])
        ys = ys[np.isfinite(ys)]
        x_lo, x_hi = 0.0, float(max(xs.max(), 1))
        y_lo, y_hi = (float(ys.min()), float(ys.max())) if ys.size else (0.0, 1.0)
        if y_hi - y_lo < 1e-12:
            y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
        plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

        def px(x: float) -> float:
            return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

        def py(y: float) -> float:
            return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'font-family="sans-serif" font-size="12">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
            f'fill="none" stroke="#333"/>',
        ]
        for tx in _ticks(x_lo, x_hi):
            parts.append(f'<line x1="{px(tx):.1f}" y1="{MARGIN_TOP + plot_h}" x2="{px(tx):.1f}" '
                         f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#333"/>')
            parts.append(f'<text x="{px(tx):.1f}" y="{MARGIN_TOP + plot_h + 18}" '
                         f'text-anchor="middle">{tx:.3g}</text>')
        for ty in _ticks(y_lo, y_hi):
            parts.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{py(ty):.1f}" x2="{MARGIN_LEFT + plot_w}" '
                         f'y2="{py(ty):.1f}" stroke="#ddd"/>')
            parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{py(ty) + 4:.1f}" text-anchor="end">{ty:.3g}</text>')
        parts.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" '
                     f'text-anchor="middle">G-oracle queries</text>')
        parts.append(f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})">{y_label}</text>')

        for k, (label, (qx, qy, _)) in enumerate(series.items()):
            colour = PALETTE[k % len(PALETTE)]
            points = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(qx, qy) if math.isfinite(b))
            parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{points}"/>')
            ly = MARGIN_TOP + 16 * k + 10
            lx = WIDTH - MARGIN_RIGHT + 12
            parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
            parts.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')
        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def write_svg(self, traces: Dict[str, Trace], title: str, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render_svg(traces, title), encoding="utf-8")
        return path

    def write_html(self, traces: Dict[str, Trace], title: str, path) -> Path:
        """Interactive comparison of the same series with plotly."""
        fig = go.Figure()
        y_label = "objective"
        for label, trace in traces.items():
            qx, qy, y_label = plot_series(trace)
            fig.add_trace(go.Scatter(x=qx, y=qy, mode="lines", name=label))
        fig.update_layout(
            title=title,
            xaxis_title="G-oracle queries",
            yaxis_title=y_label,
            template="plotly_white",
        )
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.write_html(str(path), include_plotlyjs="cdn")
        logger.debug(f"wrote {path}")
        return path


# Global instance
plot_service = PlotService()
