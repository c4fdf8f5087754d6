"""
Command-line surface: run files and flags, output files, convergence tables and exit codes.
"""
import json
import os

import numpy as np
import pytest

from app.cli.converge import convergence_table, observed_order
from app.cli.options import build_run_config, load_run_file, parse_cells
from app.cli.output import format_table, read_snapshot, snapshot_averages, snapshot_columns, write_snapshot
from app.cli.router import build_parser
from app.config import get_settings
from app.errors import ConfigError
from app.solver.dg_core import DgOperator
from app.solver.simulation import Simulation
from main import main
from models.models import ConvergenceRow, Eos, Mesh, RunConfig


def _run_file(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_parse_cells():
    assert parse_cells("40") == (40,)
    assert parse_cells("100x100") == (100, 100)
    assert parse_cells("20, 40") == (20, 40)
    with pytest.raises(ConfigError):
        parse_cells("4a")


def test_load_run_file(tmp_path):
    path = _run_file(tmp_path, "# [problem]\nscenario = riemann1d_1\n\n# [mesh]\ncells = 100\ndegree = 1\n")
    assert load_run_file(path) == {"scenario": "riemann1d_1", "cells": (100,), "degree": "1"}


def test_run_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_run_file(_run_file(tmp_path, "scenario = smooth1d\nresolution = 3\n"))
    with pytest.raises(ConfigError):
        load_run_file(str(tmp_path / "missing.cfg"))


def test_run_file_rejects_lines_without_assignment(tmp_path):
    path = _run_file(tmp_path, "# [mesh]\ndegree 3\nscenario = smooth1d\n")
    with pytest.raises(ConfigError) as e:
        load_run_file(path)
    assert "line 2" in e.value.message
    assert main(["run", "--config", path]) == 1


def test_verify_seed_from_run_file(tmp_path):
    path = _run_file(tmp_path, "seed = 7\n")
    assert build_run_config(build_parser().parse_args(["verify", "--config", path])).seed == 7
    args = build_parser().parse_args(["verify", "--config", path, "--seed", "3"])
    assert build_run_config(args).seed == 3
    assert build_run_config(build_parser().parse_args(["verify"])).seed == 0


def test_flags_override_run_file(tmp_path):
    path = _run_file(tmp_path, "scenario = riemann1d_2\ndegree = 1\nlimiter = bp\n")
    args = build_parser().parse_args(["run", "--config", path, "--degree", "3", "--cells", "50"])
    config = build_run_config(args)
    assert config.scenario == "riemann1d_2"
    assert config.degree == 3
    assert config.cells == (50,)
    assert config.limiter == "bp"
    assert config.scheme == "sspms3"


def test_invalid_values_are_config_errors(tmp_path):
    args = build_parser().parse_args(["run", "--degree", "7"])
    with pytest.raises(ConfigError):
        build_run_config(args)
    args = build_parser().parse_args(["run", "--config", _run_file(tmp_path, "cfl = -1\n")])
    with pytest.raises(ConfigError):
        build_run_config(args)


def test_parser_rejects_unknown_choices():
    with pytest.raises(ConfigError) as e:
        build_parser().parse_args(["run", "--limiter", "tvb"])
    assert e.value.exit_code == 1
    with pytest.raises(ConfigError):
        build_parser().parse_args(["converge", "--bogus"])


def test_main_usage_errors_exit_with_config_code():
    assert main(["run", "--bogus"]) == 1
    assert main(["run", "--cells", "4a"]) == 1
    assert main([]) == 1


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("IRP_RHD_THREADS", "4")
    monkeypatch.setenv("IRP_RHD_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.threads == 4 and settings.log_level == "DEBUG"

    monkeypatch.setenv("IRP_RHD_THREADS", "0")
    with pytest.raises(ConfigError):
        get_settings()


def test_snapshot_round_trip(tmp_path):
    eos = Eos(gamma=5.0 / 3.0)
    mesh = Mesh(extents=((0.0, 1.0), (0.0, 2.0)), counts=(3, 4))
    operator = DgOperator(mesh, 1, eos)
    solution = operator.project(
        lambda x, y: np.stack(np.broadcast_arrays(1.0 + 0.1 * x, 0.2, -0.1 * y, 1.0 + y), axis=-1), time=0.125
    )
    path = write_snapshot(str(tmp_path / "out" / "snap.dat"), solution, mesh, eos, "ssprk3", "irp")

    meta, columns, table = read_snapshot(path)
    assert meta["k"] == "1" and meta["N"] == "3x4" and float(meta["t"]) == 0.125
    assert meta["scheme"] == "ssprk3" and meta["limiter"] == "irp"
    assert columns == snapshot_columns(2)
    assert columns[:4] == ["x", "y", "D", "mx"]
    assert table.shape == (12, len(columns))
    assert np.array_equal(snapshot_averages(table, (3, 4)), solution.averages())


def test_format_table_and_orders():
    assert observed_order(1e-2, 2.5e-3, 40, 80) == pytest.approx(2.0)
    assert observed_order(0.0, 1e-3, 40, 80) is None
    rows = [ConvergenceRow(cells=40, l1=1e-2, l2=2e-2), ConvergenceRow(cells=80, l1=2.5e-3, l2=5e-3, l1_order=2.0, l2_order=2.0)]
    lines = format_table(rows).splitlines()
    assert len(lines) == 3
    assert lines[1].split()[2] == "-"
    assert lines[2].split()[2] == "2.00"


def test_convergence_table_on_smooth_wave():
    template = RunConfig(scenario="smooth1d", degree=1, t_final=0.02, monitor=False)
    rows = convergence_table(template, [10, 20])
    assert [row.cells for row in rows] == [10, 20]
    assert rows[0].l1_order is None
    assert rows[1].l1 < rows[0].l1
    assert rows[1].l1_order == pytest.approx(np.log2(rows[0].l1 / rows[1].l1))


def test_main_unknown_scenario(tmp_path):
    assert main(["run", "--scenario", "sod", "--output-dir", str(tmp_path)]) == 1


def test_main_missing_run_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_main_verify_single_property(tmp_path):
    output = tmp_path / "battery.json"
    assert main(["verify", "--quick", "--only", "power inequality", "--output", str(output)]) == 0
    (result,) = json.loads(output.read_text(encoding="utf-8"))
    assert result["name"] == "power inequality" and result["passed"]


def test_main_run_writes_outputs(tmp_path, capsys):
    code = main(
        ["run", "--scenario", "smooth1d", "--degree", "1", "--cells", "16", "--t-final", "0.02",
         "--output-dir", str(tmp_path)]
    )
    assert code == 0
    stem = os.path.join(str(tmp_path), "smooth1d_k1_16_sspms3_irp")
    assert os.path.isfile(stem + "_smin.dat")
    assert os.path.isfile(stem + "_t0.02.dat")
    with open(stem + "_summary.json", encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["irp_verdict"] is True
    assert summary["t_final"] == 0.02
    assert summary["snapshots"] == [stem + "_t0.02.dat"]
    assert "Región invariante preservada: sí" in capsys.readouterr().out


@pytest.mark.parametrize("limiter, code", [("irp", 2), ("bp", 0)])
def test_main_run_exit_code_follows_verdict(tmp_path, monkeypatch, limiter, code):
    summary = Simulation.summary

    def failed_verdict(self, wall_time=0.0):
        return summary(self, wall_time).model_copy(update={"irp_verdict": False})

    monkeypatch.setattr(Simulation, "summary", failed_verdict)
    argv = ["run", "--scenario", "smooth1d", "--degree", "1", "--cells", "16", "--t-final", "0.01",
            "--limiter", limiter, "--no-monitor", "--output-dir", str(tmp_path)]
    assert main(argv) == code
