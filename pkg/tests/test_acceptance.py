"""
Desk-scale acceptance runs. They take minutes each and are deselected by default;
run them with ``pytest -m slow``.
"""
import numpy as np
import pytest

from app.cli.converge import convergence_table
from app.physics.state_eos import recover
from app.scenarios.monitor import locate_jumps
from app.solver.simulation import Simulation, run
from app.verify.properties import run_battery
from models.models import RunConfig

pytestmark = pytest.mark.slow


def _check_table(rows, orders, reference_cells, reference_l1):
    for row in rows[1:]:
        assert orders[0] <= row.l1_order <= orders[1], (row.cells, row.l1_order)
    final = next(row for row in rows if row.cells == reference_cells)
    assert reference_l1 / 2.0 <= final.l1 <= reference_l1 * 2.0, final.l1


@pytest.mark.parametrize(
    "degree, orders, reference_l1",
    [(1, (1.9, 2.2), 1.12e-5), (2, (2.9, 3.1), 1.99e-8)],
)
def test_smooth_wave_convergence_1d(degree, orders, reference_l1):
    template = RunConfig(scenario="smooth1d", degree=degree, monitor=False)
    rows = convergence_table(template, [40, 80, 160, 320])
    _check_table(rows, orders, 320, reference_l1)


def test_smooth_wave_convergence_1d_p3():
    template = RunConfig(
        scenario="smooth1d", degree=3, dt_coefficient=0.1 / 3.0, dt_exponent=4.0 / 3.0, monitor=False
    )
    rows = convergence_table(template, [40, 80, 160])
    _check_table(rows, (3.85, 4.15), 160, 3.04e-10)


def test_smooth_wave_convergence_2d():
    template = RunConfig(scenario="smooth2d", degree=2, monitor=False)
    rows = convergence_table(template, [20, 40, 80])
    _check_table(rows, (2.9, 3.3), 80, 4.90e-6)


def test_minimum_entropy_preserved_only_with_entropy_step():
    irp = run(RunConfig(scenario="riemann1d_1", degree=3, cells=(320,), limiter="irp"))
    assert irp.irp_verdict
    assert irp.s_min_points >= irp.s0 - 1e-10
    assert irp.s_min_averages >= irp.s0 - 1e-10

    bp = run(RunConfig(scenario="riemann1d_1", degree=3, cells=(320,), limiter="bp"))
    assert bp.s0 - bp.s_min_points > 1e-6


def test_ultra_relativistic_wave_locations():
    simulation = Simulation(RunConfig(scenario="riemann1d_2", degree=3, cells=(400,), limiter="irp"))
    summary = simulation.run()
    assert summary.irp_verdict

    x = simulation.mesh.centers(0)
    dx = simulation.mesh.spacing[0]
    rho = recover(simulation.solution.averages(), simulation.eos)[0][:, 0]
    contact, shock = locate_jumps(x, rho)
    assert abs(shock - (0.5 + 0.9963757 * 0.45)) <= 2.0 * dx, shock
    assert abs(contact - (0.5 + 0.986956 * 0.45)) <= 3.0 * dx, contact


def test_full_property_battery():
    results = run_battery(seed=0)
    failed = [(r.name, r.worst) for r in results if not r.passed]
    assert not failed, failed


def test_two_dimensional_riemann_robustness():
    summary = run(RunConfig(scenario="rp2d_1", degree=3, cells=(100, 100), limiter="irp"))
    assert summary.irp_verdict
    assert summary.t_final == 0.8
    assert np.isfinite(summary.s_min_points)
