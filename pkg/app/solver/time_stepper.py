"""
Forward Euler, SSP-RK3 and SSP-MS3 for the semi-discrete DG system.

Every stage limits its input before evaluating the residual, and every update is a convex
combination of forward-Euler steps, so the invariant region of the cell averages carries
over from one step to the next under the forward-Euler CFL bound.
"""
import logging
from typing import Callable, Optional

import numpy as np

from models.models import DgSolution, StepperState

logger = logging.getLogger(__name__)

Limiter = Callable[[np.ndarray], np.ndarray]
Residual = Callable[[np.ndarray], np.ndarray]
Check = Callable[[np.ndarray, float], None]

MS3_LEVELS = 4


def new_stepper(scheme: str) -> StepperState:
    return StepperState(scheme=scheme)


def _rk3(U0: np.ndarray, L0: np.ndarray, dt: float, limiter: Limiter, residual: Residual) -> np.ndarray:
    U1 = U0 + dt * L0
    U1 = limiter(U1)
    U2 = 0.75 * U0 + 0.25 * (U1 + dt * residual(U1))
    U2 = limiter(U2)
    return U0 / 3.0 + 2.0 / 3.0 * (U2 + dt * residual(U2))


def advance(
    solution: DgSolution,
    dt: float,
    stepper: StepperState,
    limiter: Limiter,
    residual: Residual,
    check: Optional[Check] = None,
    limited: bool = False,
) -> DgSolution:
    """
    One time step of size ``dt``. ``limited`` says the incoming coefficients already went
    through the limiter. For SSP-MS3 the multi-step formula is used once three earlier
    levels with the same dt are stored; otherwise (start-up, shortened last step) the step
    falls back to SSP-RK3.
    """
    U0 = solution.coeffs if limited else limiter(solution.coeffs)
    L0 = residual(U0)

    if stepper.scheme == "fe":
        new = U0 + dt * L0
    elif stepper.scheme == "ssprk3":
        new = _rk3(U0, L0, dt, limiter, residual)
    else:
        if stepper.dt is not None and stepper.dt != dt:
            if len(stepper.history) >= MS3_LEVELS - 1:
                logger.warning(f"Time step changed from {stepper.dt:.6g} to {dt:.6g}; SSP-RK3 fallback")
            stepper.history.clear()
        if len(stepper.history) >= MS3_LEVELS - 1:
            Um3, Lm3 = stepper.history[-(MS3_LEVELS - 1)]
            new = 16.0 / 27.0 * (U0 + 3.0 * dt * L0) + 11.0 / 27.0 * (Um3 + 12.0 / 11.0 * dt * Lm3)
        else:
            new = _rk3(U0, L0, dt, limiter, residual)
        stepper.history.append((U0, L0))
        stepper.dt = dt

    stepper.steps += 1
    time = solution.time + dt
    if check is not None:
        check(new, time)
    return solution.with_coeffs(new, time=time)
