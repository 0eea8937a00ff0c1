#!/usr/bin/env python3
"""
Re-plot trace CSVs offline.

Every sub-directory of the given results directory that holds trace CSVs is
treated as one cell and gets a fresh convergence.svg (and convergence.html with
--html). A directory that directly contains CSVs is plotted as a single cell.

Usage:
    python scripts/plot_traces.py results/desk_acceptance
    python scripts/plot_traces.py results/mean_variance_grid --html
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from compopt.services.csv_service import csv_service
from compopt.services.plot_service import plot_service


def cell_directories(root: Path):
    if any(p.suffix == ".csv" and p.name != "summary.csv" for p in root.iterdir()):
        yield root
    for child in sorted(p for p in root.iterdir() if p.is_dir()):
        if any(p.name != "summary.csv" for p in child.glob("*.csv")):
            yield child


def main():
    """Main execution function."""
    parser = argparse.ArgumentParser(description="Re-plot compopt trace CSVs")
    parser.add_argument('results', type=str, help='Results directory written by `compopt run`')
    parser.add_argument('--html', action='store_true', help='Also write plotly HTML reports')
    args = parser.parse_args()

    root = Path(args.results)
    if not root.is_dir():
        print(f"❌ Not a directory: {root}")
        return 1

    plotted = 0
    for cell_dir in cell_directories(root):
        traces = csv_service.read_cell(cell_dir)
        if not traces:
            continue
        svg = plot_service.write_svg(traces, cell_dir.name, cell_dir / "convergence.svg")
        print(f"✅ {svg} ({len(traces)} traces)")
        if args.html:
            html = plot_service.write_html(traces, cell_dir.name, cell_dir / "convergence.html")
            print(f"✅ {html}")
        plotted += 1

    if plotted == 0:
        print(f"⚠️  No trace CSVs found under {root}")
        return 1
    print(f"\n📁 Re-plotted {plotted} cell(s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
