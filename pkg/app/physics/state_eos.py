"""
Ideal-gas equation of state, primitive <-> conserved maps for special relativistic
hydrodynamics (c = 1).

All functions are vectorized: a state is an array whose last axis holds the
components, (D, m_1..m_d, E) for conserved and (rho, v_1..v_d, p) for primitive
variables. Pydantic ``ConservedState``/``PrimitiveState`` values are accepted too
and converted on the way in.
"""
import logging

import numpy as np

from app.errors import DomainError, NonConvergence, RecoveryError
from models.models import ConservedState, Eos, PrimitiveState

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-14
MAX_ITER = 200
VELOCITY_CLAMP = 1e-15
_EPS = np.finfo(float).eps


def as_array(state) -> np.ndarray:
    if isinstance(state, (ConservedState, PrimitiveState)):
        return state.to_array()
    return np.asarray(state, dtype=float)


def _first_index(mask: np.ndarray) -> tuple:
    return tuple(int(i) for i in np.argwhere(mask)[0])


def lorentz_factor(v: np.ndarray) -> np.ndarray:
    return 1.0 / np.sqrt(1.0 - np.sum(v * v, axis=-1))


def specific_enthalpy(rho, p, eos: Eos):
    """h = 1 + e + p/rho with e = p/((gamma-1) rho)."""
    return 1.0 + eos.gamma / (eos.gamma - 1.0) * p / rho


def check_primitive(V: np.ndarray) -> None:
    rho, v, p = V[..., 0], V[..., 1:-1], V[..., -1]
    v2 = np.sum(v * v, axis=-1)
    bad = ~(rho > 0) | ~(p > 0) | ~(v2 < 1.0)
    if np.any(bad):
        idx = _first_index(bad)
        raise DomainError(f"Invalid primitive state at {idx}: {V[idx]}")


def prim_to_cons(V, eos: Eos):
    """Forward map V = (rho, v, p) -> U = (rho W, rho h W^2 v, rho h W^2 - p)."""
    wrap = isinstance(V, PrimitiveState)
    V = as_array(V)
    check_primitive(V)
    rho, v, p = V[..., 0], V[..., 1:-1], V[..., -1]
    w2 = 1.0 / (1.0 - np.sum(v * v, axis=-1))
    rhohw2 = rho * specific_enthalpy(rho, p, eos) * w2
    U = np.empty_like(V)
    U[..., 0] = rho * np.sqrt(w2)
    U[..., 1:-1] = rhohw2[..., None] * v
    U[..., -1] = rhohw2 - p
    return ConservedState.from_array(U) if wrap else U


def _residual_and_slope(p, D, m2, E, gamma):
    s = E + p
    a = m2 / (s * s)
    r = np.sqrt(1.0 - a)
    f = m2 / s + D * r + p / (gamma - 1.0) - E
    df = -a + D * a / (r * s) + 1.0 / (gamma - 1.0)
    return f, df


def pressure_residual(p, U, eos: Eos):
    """Residual of the scalar pressure equation; its unique positive root is p(U)."""
    U = as_array(U)
    p = np.asarray(p, dtype=float)
    D, m, E = U[..., 0], U[..., 1:-1], U[..., -1]
    m2 = np.sum(m * m, axis=-1)
    s = E + p
    arg = 1.0 - m2 / (s * s)
    if np.any(~(s > 0)) or np.any(~(arg > 0)):
        raise DomainError("Square-root argument of the pressure equation is non-positive")
    return m2 / s + D * np.sqrt(arg) + p / (eos.gamma - 1.0) - E


def _solve_pressure(D, m2, E, eos: Eos, tol: float, max_iter: int, p0=None):
    # flat working copies; a single state arrives as 0-d arrays
    shape = np.shape(E)
    D, m2, E = (np.ravel(np.asarray(x, dtype=float)) for x in (D, m2, E))
    if p0 is not None:
        p0 = np.ravel(np.broadcast_to(np.asarray(p0, dtype=float), shape))
    gamma = eos.gamma
    lo = np.zeros_like(E)
    hi = (gamma - 1.0) * E
    if p0 is None:
        # exact when m = 0
        p = (gamma - 1.0) * np.maximum(E - np.sqrt(D * D + m2), 0.0)
    else:
        p = np.clip(p0, lo, hi)

    active = np.ones(E.shape, dtype=bool)
    # a root pinned at p = 0 by round-off is accepted as such
    with np.errstate(divide="ignore", invalid="ignore"):
        f_lo, _ = _residual_and_slope(lo, D, m2, E, gamma)
    pinned = ~(f_lo < 0)
    p = np.where(pinned, 0.0, p)
    active &= ~pinned

    noise = 8.0 * _EPS * np.maximum(1.0, E + D)
    for _ in range(max_iter):
        if not np.any(active):
            break
        idx = np.nonzero(active)
        pa, la, ha = p[idx], lo[idx], hi[idx]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            f, df = _residual_and_slope(pa, D[idx], m2[idx], E[idx], gamma)
            la = np.where(f < 0, pa, la)
            ha = np.where(f >= 0, pa, ha)
            newton = pa - f / df
        inside = np.isfinite(newton) & (newton > la) & (newton < ha)
        p_new = np.where(inside, newton, 0.5 * (la + ha))
        step = np.abs(p_new - pa)
        with np.errstate(divide="ignore", invalid="ignore"):
            resolution = np.maximum(tol * np.maximum(p_new, np.finfo(float).tiny), noise[idx] / np.abs(df))
        done = (f == 0) | (step <= resolution) | (ha - la <= tol * np.maximum(p_new, np.finfo(float).tiny))
        p[idx] = np.where(f == 0, pa, p_new)
        lo[idx], hi[idx] = la, ha
        active[idx] = ~done
    return p.reshape(shape), active.reshape(shape)


def recover(U, eos: Eos, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER, p0=None):
    """
    Recover primitives from conserved variables.

    Returns ``(V, clamped)`` where ``clamped`` flags states whose 1 - |v|^2 was pushed
    up to the clamp value because of round-off.
    """
    U = as_array(U)
    D, m, E = U[..., 0], U[..., 1:-1], U[..., -1]
    m2 = np.sum(m * m, axis=-1)

    bad = ~np.isfinite(U).all(axis=-1) | ~(D > 0) | ~(E > np.sqrt(D * D + m2))
    if np.any(bad):
        idx = _first_index(bad)
        raise RecoveryError(f"Inadmissible state, pressure bracket fails: {U[idx]}", cell=idx)

    p, unconverged = _solve_pressure(D, m2, E, eos, tol, max_iter, p0)
    if np.any(unconverged):
        idx = _first_index(unconverged)
        raise NonConvergence(f"Pressure iteration did not converge in {max_iter} steps at {idx}: {U[idx]}")

    v = m / (E + p)[..., None]
    one_minus = 1.0 - np.sum(v * v, axis=-1)
    broken = one_minus <= -VELOCITY_CLAMP
    if np.any(broken):
        idx = _first_index(broken)
        raise RecoveryError(f"Superluminal velocity after recovery: {U[idx]}", cell=idx)
    clamped = one_minus <= 0
    if np.any(clamped):
        logger.warning(f"Velocity clamp applied to {int(np.count_nonzero(clamped))} states")
        one_minus = np.where(clamped, VELOCITY_CLAMP, one_minus)
        scale = np.sqrt((1.0 - VELOCITY_CLAMP) / np.sum(v * v, axis=-1))
        v = np.where(clamped[..., None], v * scale[..., None], v)

    V = np.empty_like(U)
    V[..., 0] = D * np.sqrt(one_minus)
    V[..., 1:-1] = v
    V[..., -1] = p
    return V, clamped


def cons_to_prim(U, eos: Eos, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER, p0=None):
    """Conserved -> primitive via a bracketed Newton/bisection solve on [0, (gamma-1) E]."""
    wrap = isinstance(U, ConservedState)
    V, _ = recover(U, eos, tol=tol, max_iter=max_iter, p0=p0)
    return PrimitiveState.from_array(V) if wrap else V


def sound_speed(V, eos: Eos):
    """c_s = sqrt(gamma p / (rho h))."""
    V = as_array(V)
    check_primitive(V)
    rho, p = V[..., 0], V[..., -1]
    return np.sqrt(eos.gamma * p / (rho * specific_enthalpy(rho, p, eos)))
