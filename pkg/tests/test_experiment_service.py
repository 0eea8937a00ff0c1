"""Tests for running experiment configs end to end."""
from compopt.config import TRACE_COLUMNS
from compopt.services.config_service import parse_config
from compopt.services.csv_service import csv_service
from compopt.services.experiment_service import run_experiment

TINY = """
record_every = 5
timing = false
plot = true

[problem]
family = bellman
m = 6
N = 3
lambda = 0.1
seed = 11

[algorithm vr]
name = scdf-svrg
eta = 0.05
epochs = 3
inner_iters = 20
batch = 2

[algorithm plain]
name = sgd
eta = 0.05
inner_iters = 60
"""


def _config(out_dir, extra=""):
    return parse_config(TINY + extra).model_copy(update={"output_dir": str(out_dir)})


def test_run_writes_traces_summary_and_plot(tmp_path):
    outcome = run_experiment(_config(tmp_path), progress=False)
    assert outcome.ok and outcome.exit_code == 0
    cell_dir = tmp_path / "kappa=10"
    for label in ("vr", "plain"):
        lines = (cell_dir / f"{label}.csv").read_text().splitlines()
        assert lines[0] == ",".join(TRACE_COLUMNS)
        assert lines[1].startswith("0,0,")
    assert (cell_dir / "convergence.svg").read_text().startswith("<svg")
    assert not (cell_dir / "convergence.html").exists()
    assert (tmp_path / "summary.csv").exists()
    assert outcome.summary_path == tmp_path / "summary.txt"

    rows = {row.label: row for row in outcome.rows}
    assert rows["vr"].queries == 3 * (2 * 6 + 4 * 2 * 20)
    assert rows["plain"].iterations == 60
    assert rows["vr"].final_gap is not None and rows["vr"].final_gap > -1e-12
    assert rows["vr"].counts["f_grads"] == 60
    trace = csv_service.read_trace(cell_dir / "vr.csv")
    assert trace.last[1] == rows["vr"].queries


def test_untimed_reruns_are_byte_identical(tmp_path):
    run_experiment(_config(tmp_path / "first"), progress=False)
    run_experiment(_config(tmp_path / "second"), progress=False)
    for name in ("kappa=10/vr.csv", "kappa=10/plain.csv", "summary.csv"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_parallel_cells_match_serial_run(tmp_path):
    sweep = "\n[sweep]\nkappa = 1, 2\n"
    serial = run_experiment(_config(tmp_path / "serial", sweep), jobs=1, progress=False)
    parallel = run_experiment(_config(tmp_path / "parallel", sweep), jobs=2, progress=False)
    assert [(r.cell, r.label) for r in parallel.rows] == [(r.cell, r.label) for r in serial.rows]
    for cell in ("kappa=1", "kappa=2"):
        a = (tmp_path / "serial" / cell / "vr.csv").read_bytes()
        b = (tmp_path / "parallel" / cell / "vr.csv").read_bytes()
        assert a == b


def test_diverging_run_keeps_partial_trace_and_fails(tmp_path):
    extra = "\n[algorithm blowup]\nname = scdf\neta = 500\ninner_iters = 1000\n"
    outcome = run_experiment(_config(tmp_path, extra), progress=False)
    assert outcome.exit_code == 1
    row = next(r for r in outcome.rows if r.label == "blowup")
    assert row.status == "diverged"
    assert "diverged at iteration" in row.message
    lines = (tmp_path / "kappa=10" / "blowup.csv").read_text().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS) and len(lines) >= 2
    assert all(r.status == "ok" for r in outcome.rows if r.label != "blowup")


def test_missing_theoretical_step_is_reported_as_failure(tmp_path):
    extra = "\n[algorithm auto]\nname = scdf-svrg\ninner_iters = 10\nbatch = 2\n"
    outcome = run_experiment(_config(tmp_path, extra), progress=False)
    row = next(r for r in outcome.rows if r.label == "auto")
    assert row.status == "failed"
    assert "set eta" in row.message
    assert row.trace_file is None
    assert outcome.exit_code == 1


def test_sweep_batch_applies_to_variance_reduced_methods_only(tmp_path):
    outcome = run_experiment(_config(tmp_path, "\n[sweep]\nbatch = 3\n"), progress=False)
    rows = {row.label: row for row in outcome.rows}
    assert rows["vr"].cell == "kappa=10_A=3"
    assert rows["vr"].queries == 3 * (2 * 6 + 4 * 3 * 20)
    assert rows["plain"].queries == 2 * 60


def test_html_report(tmp_path):
    cfg = parse_config("html = true\n" + TINY).model_copy(update={"output_dir": str(tmp_path)})
    run_experiment(cfg, progress=False)
    assert "plotly" in (tmp_path / "kappa=10" / "convergence.html").read_text()
