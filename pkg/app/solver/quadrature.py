"""
Gauss and Gauss-Lobatto rules on the reference interval [-1, 1] (weights normalized to
sum to one, so they compute cell averages) and the point sets on which the limiter
enforces the invariant region.
"""
import math
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre
from pydantic import BaseModel, ConfigDict, Field


def gauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = legendre.leggauss(n)
    return nodes, weights / 2.0


def gauss_lobatto(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Lobatto rule: endpoints plus the roots of P'_{n-1}."""
    if n < 2:
        raise ValueError("Gauss-Lobatto needs at least two points")
    unit = np.zeros(n)
    unit[-1] = 1.0
    interior = legendre.legroots(legendre.legder(unit)) if n > 2 else np.array([])
    nodes = np.concatenate([[-1.0], np.sort(np.real(interior)), [1.0]])
    weights = 2.0 / (n * (n - 1) * legendre.legval(nodes, unit) ** 2)
    return nodes, weights / 2.0


def lobatto_count(k: int) -> int:
    """L = ceil((k+3)/2), enough Gauss-Lobatto points to integrate degree k exactly."""
    return math.ceil((k + 3) / 2)


def first_lobatto_weight(k: int) -> float:
    L = lobatto_count(k)
    return 1.0 / (L * (L - 1))


def courant_bound(k: int) -> float:
    """Largest admissible alpha*dt*sum(1/dx_i) for the forward-Euler cell-average update."""
    return 1.0 if k == 0 else first_lobatto_weight(k)


class QuadratureSet(BaseModel):
    """
    Conjuntos de cuadratura de una celda de referencia y puntos de descomposición.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    degree: int = Field(..., description="Grado polinómico k")
    dim: int = Field(..., description="Dimensión espacial")
    gauss_nodes: np.ndarray = Field(..., description="Nodos de Gauss (Q = k+1)")
    gauss_weights: np.ndarray = Field(..., description="Pesos de Gauss normalizados")
    lobatto_nodes: np.ndarray = Field(..., description="Nodos de Gauss-Lobatto (L puntos)")
    lobatto_weights: np.ndarray = Field(..., description="Pesos de Gauss-Lobatto normalizados")
    points: np.ndarray = Field(..., description="Puntos de descomposición en coordenadas de referencia")
    weights: np.ndarray = Field(..., description="Pesos de descomposición, suman uno")


def quadrature_set(k: int, dim: int, spacing: Sequence[float] = (1.0, 1.0)) -> QuadratureSet:
    """
    Decomposition set of a cell. In 1D it is the L-point Gauss-Lobatto rule; in 2D the
    union of (Lobatto in x) x (Gauss in y) and (Gauss in x) x (Lobatto in y), weighted by
    dy/(dx+dy) and dx/(dx+dy) so that face points carry dx*w1*w_mu/(dx+dy) and its analogue.
    """
    gx, gw = gauss(k + 1)
    lx, lw = gauss_lobatto(lobatto_count(k))
    if dim == 1:
        points, weights = lx[:, None], lw.copy()
    else:
        dx, dy = spacing[0], spacing[1]
        ax, ay = np.meshgrid(lx, gx, indexing="ij")
        bx, by = np.meshgrid(gx, lx, indexing="ij")
        points = np.concatenate(
            [np.stack([ax.ravel(), ay.ravel()], axis=1), np.stack([bx.ravel(), by.ravel()], axis=1)]
        )
        weights = np.concatenate(
            [dy / (dx + dy) * np.outer(lw, gw).ravel(), dx / (dx + dy) * np.outer(gw, lw).ravel()]
        )
    return QuadratureSet(
        degree=k,
        dim=dim,
        gauss_nodes=gx,
        gauss_weights=gw,
        lobatto_nodes=lx,
        lobatto_weights=lw,
        points=points,
        weights=weights,
    )


def tensor_gauss(n: int, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss rule per axis as (points (n^dim, dim), weights)."""
    x, w = gauss(n)
    if dim == 1:
        return x[:, None], w
    px, py = np.meshgrid(x, x, indexing="ij")
    return np.stack([px.ravel(), py.ravel()], axis=1), np.outer(w, w).ravel()
