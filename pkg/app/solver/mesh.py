"""Uniform Cartesian meshes: physical coordinates of reference points and ghost states."""
from typing import Optional, Tuple

import numpy as np

from app.physics.state_eos import prim_to_cons
from models.models import BoundaryCondition, Eos, Mesh

SIDE_AXIS = {"left": 0, "right": 0, "bottom": 1, "top": 1}


def physical_points(mesh: Mesh, ref_points: np.ndarray) -> Tuple[np.ndarray, ...]:
    """
    Physical coordinates of reference points in every cell, one array per axis with
    shape (*counts, npoints).
    """
    ref_points = np.atleast_2d(ref_points)
    centers = np.meshgrid(*[mesh.centers(axis) for axis in range(mesh.dim)], indexing="ij")
    return tuple(
        centers[axis][..., None] + 0.5 * mesh.spacing[axis] * ref_points[:, axis]
        for axis in range(mesh.dim)
    )


def _reflect(U: np.ndarray, V: np.ndarray, axis: int) -> Tuple[np.ndarray, np.ndarray]:
    U = U.copy()
    V = V.copy()
    U[..., 1 + axis] *= -1.0
    V[..., 1 + axis] *= -1.0
    return U, V


def ghost_states(
    bc: BoundaryCondition,
    side: str,
    U: np.ndarray,
    V: np.ndarray,
    eos: Eos,
    coords: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exterior states seen across a non-periodic boundary face, given the interior traces
    ``U``/``V`` and, for windowed inflow, the tangential coordinate of each face point.
    """
    axis = SIDE_AXIS[side]
    if bc.kind == "outflow":
        return U.copy(), V.copy()
    if bc.kind == "reflective":
        return _reflect(U, V, axis)
    if bc.kind == "inflow":
        V_in = np.broadcast_to(np.asarray(bc.state, dtype=float), V.shape).copy()
        U_in = prim_to_cons(V_in, eos)
        if bc.window is None or coords is None:
            return U_in, V_in
        inside = (coords >= bc.window[0]) & (coords <= bc.window[1])
        if bc.fallback == "reflective":
            U_out, V_out = _reflect(U, V, axis)
        else:
            U_out, V_out = U, V
        return np.where(inside[..., None], U_in, U_out), np.where(inside[..., None], V_in, V_out)
    raise ValueError(f"Periodic side '{side}' has no ghost state")
