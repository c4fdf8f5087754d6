"""
Standalone first-order Lax-Friedrichs updates, used to check the local minimum entropy
principle on single cells without building a mesh.
"""
from typing import Sequence

import numpy as np

from app.errors import DomainError
from app.physics.flux import lf_flux
from app.physics.state_eos import as_array
from models.models import Eos


def lf_update_1d(U_left, U_center, U_right, lam: float, alpha: float, eos: Eos) -> np.ndarray:
    """
    U_center - lam (F(U_center, U_right) - F(U_left, U_center)) with lam = dt/dx.
    Inputs may carry leading batch dimensions; ``lam`` may be one value per state.
    """
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0):
        raise DomainError("lam must be non-negative")
    U_left, U_center, U_right = as_array(U_left), as_array(U_center), as_array(U_right)
    return U_center - lam[..., None] * (
        lf_flux(U_center, U_right, [1.0], eos, alpha) - lf_flux(U_left, U_center, [1.0], eos, alpha)
    )


def polygon_cfl(lengths: Sequence[float], area: float, dt: float, alpha: float) -> float:
    """alpha dt / (2|K|) * sum |e|; the update is invariant-region preserving when this is <= 1."""
    return alpha * dt / (2.0 * area) * float(np.sum(lengths))


def lf_update_polygon(U_K, neighbours, lengths, normals, area: float, dt: float, alpha: float, eos: Eos) -> np.ndarray:
    """
    U_K - dt/|K| sum_e |e| F(U_K, U_e, xi_e) on a polygonal cell with outward unit normals.

    ``neighbours`` and ``normals`` have one row per edge.
    """
    if area <= 0:
        raise DomainError(f"cell area must be positive, got {area}")
    U_K = as_array(U_K)
    neighbours = as_array(neighbours)
    lengths = np.asarray(lengths, dtype=float)
    normals = np.asarray(normals, dtype=float)
    total = np.zeros_like(U_K)
    for U_e, length, xi in zip(neighbours, lengths, normals):
        total += length * lf_flux(U_K, U_e, xi, eos, alpha)
    return U_K - dt / area * total
