"""
Run orchestration on small meshes: verdict, time snapping, configuration errors, the
entropy floor and the self-convergence reference.
"""
import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import ConfigError, NonConvergence
from app.physics.invariant_region import in_admissible
from app.scenarios.scenarios import builtin, scenario_floor
from app.solver.dg_core import max_stable_dt
from app.solver.simulation import (
    Simulation,
    average_errors,
    block_average,
    run,
    self_convergence_reference,
    working_floor,
)
from models.models import Eos, RunConfig


def _small(**kwargs):
    values = dict(scenario="smooth1d", degree=1, cells=(16,), t_final=0.05)
    values.update(kwargs)
    return RunConfig(**values)


def test_smooth_run_keeps_the_invariant_region():
    summary = run(_small())
    assert summary.irp_verdict
    assert summary.t_final == 0.05
    assert summary.steps > 0
    assert summary.s0 == scenario_floor(builtin("smooth1d"), Eos(gamma=5.0 / 3.0))
    assert summary.l1_error is not None and 0.0 < summary.l1_error <= summary.l2_error
    assert summary.s_min_points <= summary.s_min_averages


@pytest.mark.parametrize("limiter", ["irp", "irp_qtilde"])
def test_riemann_run_keeps_the_invariant_region(limiter):
    summary = run(RunConfig(scenario="riemann1d_1", degree=2, cells=(64,), t_final=0.1, limiter=limiter))
    assert summary.irp_verdict
    assert summary.l1_error is None
    assert summary.s_min_points >= summary.s0 - 1e-8


def test_bp_run_has_no_entropy_region():
    simulation = Simulation(_small(limiter="bp"))
    assert simulation.region_sigma == -np.inf
    assert simulation.limiter_config.mode == "bp"


def test_run_lands_exactly_on_t_final():
    simulation = Simulation(_small(t_final=0.0333))
    simulation.run()
    assert simulation.solution.time == 0.0333


def test_monitor_series_has_one_row_per_step():
    simulation = Simulation(_small())
    summary = simulation.run()
    series = simulation.monitor.as_array()
    assert series.shape == (summary.steps + 1, 3)
    assert series[0, 0] == 0.0 and series[-1, 0] == pytest.approx(0.05)


def test_observer_calls():
    reasons = []

    def observer(simulation, reason):
        reasons.append(reason)
        return f"snapshot_{len(reasons)}"

    simulation = Simulation(_small(snapshot_interval=2))
    summary = simulation.run(observer)
    assert reasons[-1] == "output"
    assert reasons.count("step") == summary.steps // 2
    assert summary.snapshots == [f"snapshot_{i + 1}" for i in range(len(reasons))]


def test_time_step_choices():
    default = Simulation(_small(cells=(20,)))
    assert default.dt == pytest.approx(max_stable_dt(default.mesh, 1, scheme="sspms3"))
    assert Simulation(_small(dt=1e-3)).dt == 1e-3
    law = Simulation(_small(cells=(20,), dt_coefficient=0.5, dt_exponent=2.0))
    assert law.dt == pytest.approx(0.5 * 0.05**2)


def test_configuration_errors():
    with pytest.raises(ConfigError):
        Simulation(_small(cells=(10, 10)))
    with pytest.raises(ConfigError):
        Simulation(RunConfig(scenario="jet_cold"))
    with pytest.raises(ValidationError):
        RunConfig(dt=0.1, dt_coefficient=1.0, dt_exponent=1.0)
    with pytest.raises(ValidationError):
        RunConfig(dt_coefficient=1.0)
    with pytest.raises(ValidationError):
        RunConfig(cells=(10, 10, 10))
    with pytest.raises(ValidationError):
        RunConfig(resolution=10)


def test_step_cap():
    with pytest.raises(NonConvergence):
        run(_small(max_steps=3))


def test_working_floor():
    eos = Eos(gamma=5.0 / 3.0)
    averages = np.array([[1.0, 0.0, 2.5], [2.0, 0.0, 3.5]])
    floor, margin = working_floor(0.0, averages, eos)
    expected_margin = 64.0 * np.finfo(float).eps * (2.0 / 3.0) * 3.5
    assert margin == pytest.approx(expected_margin, rel=1e-12)
    assert floor == pytest.approx(-5.0 / 3.0 * np.log(2.0) - expected_margin, rel=1e-12)

    floor, _ = working_floor(-3.0, averages, eos)
    assert floor == pytest.approx(-3.0 - expected_margin, rel=1e-12)


def test_block_average():
    averages = np.arange(12.0).reshape(6, 2)
    assert np.array_equal(block_average(averages, 3), [[2.0, 3.0], [8.0, 9.0]])

    grid = np.arange(16.0).reshape(4, 4, 1)
    assert np.array_equal(block_average(grid, 2)[..., 0], [[2.5, 4.5], [10.5, 12.5]])


def test_self_convergence_reference():
    config = _small(cells=(8,), t_final=0.01)
    reference = self_convergence_reference(config, factor=4)
    assert reference.shape == (8, 3)
    assert np.all(in_admissible(reference))

    coarse = Simulation(config)
    exact = coarse.operator.project(lambda x: builtin("smooth1d").exact(x, 0.01)).averages()
    assert np.max(np.abs(reference[:, 0] - exact[:, 0])) < 5e-2

    l1, l2 = average_errors(coarse.solution, reference, coarse.eos)
    assert 0.0 < l1 <= l2
    assert average_errors(coarse.solution, coarse.solution.averages(), coarse.eos) == (0.0, 0.0)
