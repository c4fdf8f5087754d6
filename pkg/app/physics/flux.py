"""
Physical fluxes, the Lax-Friedrichs numerical flux, rotations to a face normal and the
generalized Lax-Friedrichs (gLF) averages used to prove invariant-region preservation.
"""
from typing import Sequence, Tuple

import numpy as np

from app.errors import DomainError, FanError
from app.physics.state_eos import as_array, recover
from models.models import Eos, UnitNormal

FAN_CLOSURE_TOL = 1e-12


def _normal(xi) -> np.ndarray:
    if isinstance(xi, UnitNormal):
        return xi.to_array()
    return np.asarray(xi, dtype=float)


def flux_from_prim(U, V, i: int) -> np.ndarray:
    """F_i = (D v_i, v_i m + p e_i, m_i) with primitives already known."""
    U = as_array(U)
    V = as_array(V)
    vi = V[..., 1 + i]
    F = U * vi[..., None]
    F[..., 1 + i] += V[..., -1]
    F[..., -1] = U[..., 1 + i]
    return F


def physical_flux(U, i: int, eos: Eos) -> np.ndarray:
    V, _ = recover(U, eos)
    return flux_from_prim(U, V, i)


def normal_flux_from_prim(U, V, xi) -> np.ndarray:
    """xi . F(U) = sum_k xi_k F_k(U)."""
    U = as_array(U)
    V = as_array(V)
    xi = _normal(xi)
    vn = np.sum(V[..., 1:-1] * xi, axis=-1)
    F = U * vn[..., None]
    F[..., 1:-1] += V[..., -1, None] * xi
    F[..., -1] = np.sum(U[..., 1:-1] * xi, axis=-1)
    return F


def lf_flux(U_minus, U_plus, xi, eos: Eos, alpha: float = 1.0, V_minus=None, V_plus=None) -> np.ndarray:
    """
    Lax-Friedrichs flux 1/2 (xi.F(U-) + xi.F(U+) - alpha (U+ - U-)).

    Primitives may be passed in when the caller already recovered them.
    """
    if alpha < 1.0:
        raise DomainError(f"alpha must be at least the speed of light, got {alpha}")
    U_minus = as_array(U_minus)
    U_plus = as_array(U_plus)
    if V_minus is None:
        V_minus, _ = recover(U_minus, eos)
    if V_plus is None:
        V_plus, _ = recover(U_plus, eos)
    return 0.5 * (
        normal_flux_from_prim(U_minus, V_minus, xi)
        + normal_flux_from_prim(U_plus, V_plus, xi)
        - alpha * (U_plus - U_minus)
    )


def rotation_matrix(xi) -> np.ndarray:
    """Orthogonal Q_xi with first row xi; in 2D the rows are (xi1, xi2) and (-xi2, xi1)."""
    xi = _normal(xi)
    d = xi.shape[-1]
    if d == 1:
        return xi.reshape(1, 1).copy()
    if d == 2:
        return np.array([[xi[0], xi[1]], [-xi[1], xi[0]]])
    if d == 3:
        axis = np.zeros(3)
        axis[int(np.argmin(np.abs(xi)))] = 1.0
        t1 = axis - np.dot(axis, xi) * xi
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(xi, t1)
        return np.vstack([xi, t1, t2])
    raise DomainError(f"Unsupported dimension {d}")


def rotate_to_normal(U, xi) -> np.ndarray:
    """Rotate the momentum so that its first component is m.xi; D and E are untouched."""
    U = np.array(as_array(U), dtype=float)
    Q = rotation_matrix(xi)
    U[..., 1:-1] = U[..., 1:-1] @ Q.T
    return U


def rotate_from_normal(U, xi) -> np.ndarray:
    U = np.array(as_array(U), dtype=float)
    Q = rotation_matrix(xi)
    U[..., 1:-1] = U[..., 1:-1] @ Q
    return U


def glf_average(U_hat, U_check, i: int, eos: Eos, alpha: float = 1.0) -> np.ndarray:
    """G_{i,alpha}(U_hat, U_check) = 1/2 (U_hat - F_i(U_hat)/alpha + U_check + F_i(U_check)/alpha)."""
    if alpha < 1.0:
        raise DomainError(f"alpha must be at least the speed of light, got {alpha}")
    U_hat = as_array(U_hat)
    U_check = as_array(U_check)
    return 0.5 * (
        U_hat - physical_flux(U_hat, i, eos) / alpha + U_check + physical_flux(U_check, i, eos) / alpha
    )


def polytope_glf_average(
    faces: Sequence[Tuple[float, object, np.ndarray, np.ndarray]], eos: Eos, alpha: float = 1.0
) -> np.ndarray:
    """
    Weighted average over the faces of a polytope,
    (1/sum s_j) sum_j s_j sum_i w_i (U_ij - xi_j.F(U_ij)/alpha).

    Each face is ``(s_j, xi_j, weights, states)`` with ``states`` of shape (Q, ncomp) and
    weights summing to one. The normal fan must close: sum_j s_j xi_j = 0.
    """
    if alpha < 1.0:
        raise DomainError(f"alpha must be at least the speed of light, got {alpha}")
    lengths = np.array([float(s) for s, _, _, _ in faces])
    normals = np.array([_normal(xi) for _, xi, _, _ in faces])
    closure = np.linalg.norm(lengths @ normals)
    if closure > FAN_CLOSURE_TOL * max(1.0, lengths.sum()):
        raise FanError(f"Normal fan does not close: |sum s_j xi_j| = {closure:.3e}")

    total = 0.0
    for s, xi, weights, states in faces:
        states = as_array(states)
        V, _ = recover(states, eos)
        terms = states - normal_flux_from_prim(states, V, _normal(xi)) / alpha
        total = total + s * np.tensordot(np.asarray(weights, dtype=float), terms, axes=(0, 0))
    return total / lengths.sum()


def cartesian_glf_average(
    hat_states: Sequence[np.ndarray],
    check_states: Sequence[np.ndarray],
    spacings: Sequence[float],
    weights: np.ndarray,
    eos: Eos,
    alpha: float = 1.0,
) -> np.ndarray:
    """
    Cartesian specialization of the polytope average in 1, 2 or 3 directions:
    sum_i (1/dx_i) sum_q w_q G_i(hat_q, check_q) / sum_i (1/dx_i).

    ``hat_states[i]`` sit on the face with outward normal +e_i, ``check_states[i]`` on -e_i.
    """
    weights = np.asarray(weights, dtype=float)
    inverse = 1.0 / np.asarray(spacings, dtype=float)
    total = 0.0
    for i, (hat, check) in enumerate(zip(hat_states, check_states)):
        G = glf_average(hat, check, i, eos, alpha)
        total = total + inverse[i] * np.tensordot(weights, G, axes=(0, 0))
    return total / inverse.sum()
