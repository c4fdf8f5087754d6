"""
Forward Euler, SSP-RK3 and SSP-MS3 on the linear decay problem U' = -U.
"""
import numpy as np
import pytest

from app.solver.time_stepper import advance, new_stepper
from models.models import DgSolution


def _decay(U):
    return -U


def _identity(U):
    return U


def _rk3_factor(dt):
    return 1.0 - dt + dt**2 / 2.0 - dt**3 / 6.0


def _start(value=1.0):
    return DgSolution(degree=0, coeffs=np.full((2, 1, 3), value))


def test_forward_euler():
    stepper = new_stepper("fe")
    out = advance(_start(), 0.1, stepper, _identity, _decay)
    assert np.allclose(out.coeffs, 0.9, rtol=1e-15)
    assert out.time == pytest.approx(0.1)
    assert stepper.steps == 1


def test_ssprk3_amplification():
    stepper = new_stepper("ssprk3")
    out = advance(_start(), 0.2, stepper, _identity, _decay)
    assert np.allclose(out.coeffs, _rk3_factor(0.2), rtol=1e-14)


def test_sspms3_starts_with_rk3_then_uses_history():
    dt = 0.05
    stepper = new_stepper("sspms3")
    solution = _start()
    levels = [1.0]
    for _ in range(3):
        solution = advance(solution, dt, stepper, _identity, _decay)
        levels.append(levels[-1] * _rk3_factor(dt))
        assert np.allclose(solution.coeffs, levels[-1], rtol=1e-14)
    assert len(stepper.history) == 3

    solution = advance(solution, dt, stepper, _identity, _decay)
    u0, um3 = levels[3], levels[0]
    expected = 16.0 / 27.0 * (u0 - 3.0 * dt * u0) + 11.0 / 27.0 * (um3 - 12.0 / 11.0 * dt * um3)
    assert np.allclose(solution.coeffs, expected, rtol=1e-14)
    assert solution.time == pytest.approx(4 * dt)


def test_sspms3_history_cleared_when_dt_changes():
    stepper = new_stepper("sspms3")
    solution = _start()
    for _ in range(3):
        solution = advance(solution, 0.05, stepper, _identity, _decay)
    before = solution.coeffs.copy()
    solution = advance(solution, 0.02, stepper, _identity, _decay)
    assert np.allclose(solution.coeffs, before * _rk3_factor(0.02), rtol=1e-14)
    assert len(stepper.history) == 1
    assert stepper.dt == 0.02


def test_limiter_calls_and_limited_flag():
    calls = []

    def counting(U):
        calls.append(U)
        return U

    advance(_start(), 0.1, new_stepper("ssprk3"), counting, _decay)
    assert len(calls) == 3
    calls.clear()
    advance(_start(), 0.1, new_stepper("ssprk3"), counting, _decay, limited=True)
    assert len(calls) == 2


def test_limiter_output_feeds_the_update():
    """A limiter that flattens the state makes every stage see zero."""
    out = advance(_start(), 0.1, new_stepper("ssprk3"), np.zeros_like, _decay)
    assert np.array_equal(out.coeffs, np.zeros((2, 1, 3)))


def test_check_callback_sees_new_state_and_time():
    seen = []
    advance(_start(0.5), 0.25, new_stepper("fe"), _identity, _decay, check=lambda U, t: seen.append((U.copy(), t)))
    (U, t), = seen
    assert t == pytest.approx(0.25)
    assert np.allclose(U, 0.375, rtol=1e-15)
