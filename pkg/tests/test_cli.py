"""Tests for the `compopt` command line."""
import importlib

import pytest

from compopt.config import PROJECT_ROOT
from compopt.main import build_parser, main

CONFIG = """
timing = false

[problem]
family = bellman
m = 6
N = 3
lambda = 0.1
seed = 11

[algorithm vr]
name = scdf-saga
eta = 0.05
inner_iters = 30
batch = 2
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(CONFIG)
    return path


@pytest.fixture
def ones_file(tmp_path):
    path = tmp_path / "constants.txt"
    path.write_text("# unit constants\nB_F = 1\nL_F = 1\nB_G = 1\nL_G = 1\nL_f = 1\nR_x = 1\n")
    return path


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_check_accepts_a_valid_config(config_file, capsys):
    assert main(["check", str(config_file)]) == 0
    out = capsys.readouterr().out
    assert "is valid" in out and "vr: scdf-saga" in out


def test_check_lists_every_issue(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("[problem]\nfamily = bellman\n[algorithm a]\nname = adam\ninner_iters = 3\n")
    assert main(["check", str(path)]) == 2
    out = capsys.readouterr().out
    assert "2 issues" in out
    assert "line 1: missing seed" in out
    assert "line 4: invalid algorithm name 'adam'" in out


def test_check_reports_unreadable_file(tmp_path):
    assert main(["check", str(tmp_path / "missing.cfg")]) == 2


def test_run_with_output_and_seed_override(config_file, tmp_path):
    out_dir = tmp_path / "results"
    assert main(["--out", str(out_dir), "--seed-override", "3", "run", "--quiet", str(config_file)]) == 0
    assert (out_dir / "summary.txt").exists()
    assert (out_dir / "kappa=10" / "vr.csv").exists()
    assert (out_dir / "kappa=10" / "convergence.svg").exists()


def test_run_exit_code_reflects_divergence(tmp_path):
    path = tmp_path / "diverge.cfg"
    path.write_text(CONFIG.replace("eta = 0.05", "eta = 500"))
    assert main(["--out", str(tmp_path / "out"), "run", "--quiet", str(path)]) == 1


def test_gradcheck_passes_for_builtin_problems(capsys):
    for family in ("mean-variance", "bellman", "split-quadratic"):
        assert main(["gradcheck", "--problem", family, "--n", "6", "--m", "4", "--N", "3", "--points", "3"]) == 0
    assert "All gradients match" in capsys.readouterr().out


def test_gradcheck_rejects_invalid_sizes():
    assert main(["gradcheck", "--problem", "mean-variance", "--n", "1"]) == 2


@pytest.mark.parametrize(
    "argv,code",
    [
        (["--theorem", "1", "--lambda", "1", "--n", "10", "--batch", "100", "--K", "1000"], 0),
        (["--theorem", "1", "--lambda", "1", "--n", "10", "--batch", "5"], 1),
        (["--theorem", "1", "--lambda", "1", "--n", "10"], 2),
        (["--theorem", "2", "--lambda", "1", "--n", "10", "--batch", "100", "--d", "0.5"], 0),
        (["--theorem", "2", "--lambda", "1", "--n", "10", "--batch", "100"], 2),
        (["--theorem", "3", "--lambda", "1", "--n", "10", "--batch", "100"], 1),
        (["--theorem", "3", "--lambda", "1", "--n", "10", "--eta", "0.001"], 0),
        (["--theorem", "4", "--lambda", "1", "--n", "10", "--batch", "1000", "--d", "0.5"], 0),
        (["--theorem", "3", "--lambda", "0", "--n", "10", "--batch", "100"], 2),
    ],
)
def test_bounds_exit_codes(ones_file, argv, code):
    assert main(["bounds", "--constants", str(ones_file), *argv]) == code


def test_bounds_prints_both_contraction_forms(ones_file, capsys):
    main(["bounds", "--constants", str(ones_file), "--theorem", "1", "--lambda", "1", "--n", "10",
          "--batch", "100", "--K", "1000", "--eta", "0.0483"])
    out = capsys.readouterr().out
    assert '"d2_form": "theorem"' in out and '"d2_form": "lemma"' in out


def test_bounds_rejects_malformed_constants(tmp_path):
    path = tmp_path / "constants.txt"
    path.write_text("B_F = 1\nL_F\n")
    assert main(["bounds", "--constants", str(path), "--theorem", "1", "--lambda", "1", "--n", "1",
                 "--batch", "10"]) == 2


def test_console_script_points_at_main():
    tomllib = pytest.importorskip("tomllib")
    pyproject = tomllib.loads((PROJECT_ROOT / "pyproject.toml").read_text())
    target = pyproject["project"]["scripts"]["compopt"]
    module_name, attr = target.split(":")
    entry = getattr(importlib.import_module(module_name), attr)
    assert entry is main
    with pytest.raises(SystemExit) as info:
        entry(["--help"])
    assert info.value.code == 0
