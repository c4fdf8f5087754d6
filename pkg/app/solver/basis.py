"""Orthonormal Legendre modal basis on the reference cell [-1, 1]^d."""
from typing import List, Tuple

import numpy as np
from numpy.polynomial import legendre


def modes(k: int, dim: int) -> List[Tuple[int, ...]]:
    """Mode multi-indices of P^k ordered by total degree; mode 0 is the constant."""
    if dim == 1:
        return [(a,) for a in range(k + 1)]
    return [(a, total - a) for total in range(k + 1) for a in range(total, -1, -1)]


def legendre_table(k: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values and derivatives of phi_n = sqrt(2n+1) P_n at x, n = 0..k.

    The scaling makes the basis orthonormal for the averaging inner product
    1/2 int_{-1}^{1} f g, so the coefficient of phi_0 is the cell average.
    """
    x = np.asarray(x, dtype=float)
    values = np.empty(x.shape + (k + 1,))
    slopes = np.empty(x.shape + (k + 1,))
    for n in range(k + 1):
        unit = np.zeros(n + 1)
        unit[n] = np.sqrt(2 * n + 1)
        values[..., n] = legendre.legval(x, unit)
        slopes[..., n] = legendre.legval(x, legendre.legder(unit)) if n > 0 else 0.0
    return values, slopes


class LegendreBasis:
    """Total-degree P^k basis built from products of 1D orthonormal Legendre polynomials."""

    def __init__(self, k: int, dim: int):
        self.degree = k
        self.dim = dim
        self.modes = modes(k, dim)

    @property
    def size(self) -> int:
        return len(self.modes)

    def values(self, points: np.ndarray) -> np.ndarray:
        """Basis matrix (npoints, nmodes) at reference points of shape (npoints, dim)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        tables = [legendre_table(self.degree, points[:, axis])[0] for axis in range(self.dim)]
        out = np.ones((points.shape[0], self.size))
        for n, multi in enumerate(self.modes):
            for axis, a in enumerate(multi):
                out[:, n] *= tables[axis][:, a]
        return out

    def gradients(self, points: np.ndarray) -> np.ndarray:
        """Reference gradients (npoints, nmodes, dim)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        tables = [legendre_table(self.degree, points[:, axis]) for axis in range(self.dim)]
        out = np.ones((points.shape[0], self.size, self.dim))
        for n, multi in enumerate(self.modes):
            for direction in range(self.dim):
                for axis, a in enumerate(multi):
                    factor = tables[axis][1][:, a] if axis == direction else tables[axis][0][:, a]
                    out[:, n, direction] *= factor
        return out
