"""
Built-in scenarios, entropy floors, S_min monitoring and wave-front location.
"""
import numpy as np
import pytest

from app.errors import ConfigError, UnknownScenario
from app.physics.state_eos import sound_speed
from app.scenarios.monitor import SminMonitor, error_norms, locate_jumps, s_min_series
from app.scenarios.scenarios import (
    builtin,
    matched_jet_pressure,
    sample_admissible,
    scenario_floor,
    scenario_names,
)
from app.solver.dg_core import DgOperator
from models.models import Eos, Mesh


def test_unknown_scenario():
    with pytest.raises(UnknownScenario) as e:
        builtin("sod")
    assert isinstance(e.value, ConfigError)
    assert e.value.exit_code == 1


def test_scenario_names():
    assert scenario_names(include_optional=False) == [
        "smooth1d",
        "riemann1d_1",
        "riemann1d_2",
        "smooth2d",
        "shock_bubble",
        "rp2d_1",
        "rp2d_2",
    ]
    assert set(scenario_names()) - set(scenario_names(include_optional=False)) == {"jet_cold", "jet_hot"}


def test_riemann_definitions():
    first = builtin("riemann1d_1")
    assert first.cells == (320,) and first.t_final == 0.4
    x = np.array([0.25, 0.75])
    assert np.array_equal(first.initial(x), [[0.8, 0.5, 8.0], [1.0, 0.0, 1.0]])

    second = builtin("riemann1d_2")
    assert second.cells == (400,) and second.t_final == 0.45


def test_entropy_floors():
    eos = Eos(gamma=5.0 / 3.0)
    assert scenario_floor(builtin("riemann1d_1"), eos) == 0.0
    assert scenario_floor(builtin("riemann1d_2"), eos) == pytest.approx(np.log(1e-8), rel=1e-15)
    assert scenario_floor(builtin("smooth1d"), eos) == pytest.approx(-5.0 / 3.0 * np.log(1.99999), abs=1e-5)


def test_exact_solutions_start_at_the_initial_data():
    one = builtin("smooth1d")
    x = np.linspace(0.0, 1.0, 17)
    assert np.array_equal(one.exact(x, 0.0), one.initial(x))
    shifted = one.exact(x, 0.5)
    assert np.allclose(shifted, one.initial(x - 0.45))

    two = builtin("smooth2d")
    y = np.linspace(0.0, 1.0, 17)
    assert np.array_equal(two.exact(x, y, 0.0), two.initial(x, y))


def test_shock_bubble_regions():
    scenario = builtin("shock_bubble")
    V = scenario.initial(np.array([215.0, 300.0, 100.0]), np.array([0.0, 0.0, 0.0]))
    assert V[0, 0] == pytest.approx(0.1358)
    assert V[1, 0] == pytest.approx(1.865225080631180)
    assert np.array_equal(V[2], [1.0, 0.0, 0.0, 0.05])
    assert scenario.boundary["right"].kind == "inflow"
    assert scenario.output_times[-1] == scenario.t_final


@pytest.mark.parametrize("rho, mach, gamma", [(0.1, 50.0, 5.0 / 3.0), (0.01, 1.72, 4.0 / 3.0)])
def test_matched_jet_pressure(rho, mach, gamma):
    p = matched_jet_pressure(rho, 0.99, mach, gamma)
    cs = sound_speed(np.array([rho, 0.0, 0.99, p]), Eos(gamma=gamma))
    assert cs == pytest.approx(0.99 / mach, rel=1e-12)


def test_jets_are_optional_with_nozzle_window():
    cold = builtin("jet_cold")
    assert cold.optional and cold.gamma == pytest.approx(5.0 / 3.0)
    nozzle = cold.boundary["bottom"]
    assert nozzle.kind == "inflow" and nozzle.window == (0.0, 0.5)
    assert builtin("jet_hot").gamma == pytest.approx(4.0 / 3.0)


def test_sample_admissible(rng):
    V = sample_admissible(builtin("rp2d_1"), 500, rng)
    assert V.shape == (500, 4)
    assert np.all(V[:, 0] > 0) and np.all(V[:, -1] > 0)
    assert np.all(np.sum(V[:, 1:-1] ** 2, axis=1) < 1.0)


def test_locate_jumps_on_synthetic_shell():
    x = np.linspace(0.0, 1.0, 201)
    dx = x[1] - x[0]
    rho = np.where(x < 0.4, 0.5, np.where(x < 0.6, 3.0, 1.0))
    contact, shock = locate_jumps(x, rho)
    assert abs(contact - 0.4) <= dx
    assert abs(shock - 0.6) <= dx


def test_smin_monitor_and_error_norms(eos):
    def exact(x, t):
        return np.stack(np.broadcast_arrays(1.0 + 0.5 * np.sin(2.0 * np.pi * (x - 0.9 * t)), 0.9, 1.0), axis=-1)

    mesh = Mesh(extents=((0.0, 1.0),), counts=(20,))
    operator = DgOperator(mesh, 2, eos)
    solution = operator.project(lambda x: exact(x, 0.0))
    monitor = SminMonitor(operator)
    record = monitor.record(0.0, solution.coeffs)
    assert record.s_min_points <= record.s_min_averages
    assert s_min_series(monitor).shape == (1, 3)

    l1, l2 = error_norms(solution, operator, exact)
    assert 0.0 < l1 <= l2 < 1e-2
