"""
Modal discontinuous Galerkin discretization on uniform Cartesian meshes.

Coefficients are stored with shape (*counts, nmodes, ncomp): one row of modal
coefficients per cell and conserved component. Coefficient 0 is the cell average.
The semi-discrete operator uses the Lax-Friedrichs flux at faces ((k+1)-point Gauss
rule along 2D edges) and a (k+1)-point Gauss rule per axis for volume integrals.
With k = 0 it is the first-order finite-volume scheme.
"""
import logging
from typing import Callable, Optional, Sequence

import numpy as np

from app.errors import RecoveryError
from app.physics.flux import flux_from_prim, lf_flux
from app.physics.state_eos import prim_to_cons, recover
from app.solver.basis import LegendreBasis
from app.solver.mesh import ghost_states, physical_points
from app.solver.quadrature import courant_bound, gauss, quadrature_set, tensor_gauss
from models.models import DgSolution, Eos, Mesh

logger = logging.getLogger(__name__)

PRACTICAL_CFL = {0: 0.5, 1: 0.3, 2: 0.15, 3: 0.1}
MULTISTEP_CFL_FACTOR = 1.0 / 3.0


def point_values(coeffs: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Values at reference points: (*cells, npoints, ncomp) from basis matrix (npoints, nmodes)."""
    return np.einsum("pm,...mc->...pc", B, coeffs)


class DgOperator:
    """Precomputed basis tables and the semi-discrete right-hand side for one mesh and degree."""

    def __init__(self, mesh: Mesh, degree: int, eos: Eos, alpha: float = 1.0):
        self.mesh = mesh
        self.degree = degree
        self.eos = eos
        self.alpha = alpha
        self.dim = mesh.dim
        self.ncomp = self.dim + 2
        self.basis = LegendreBasis(degree, self.dim)
        self.quadrature = quadrature_set(degree, self.dim, mesh.spacing)

        self.volume_points, self.volume_weights = tensor_gauss(degree + 1, self.dim)
        self.B_volume = self.basis.values(self.volume_points)
        self.G_volume = self.basis.gradients(self.volume_points)
        self.edge_nodes, self.edge_weights = gauss(degree + 1)

        if self.dim == 1:
            self.B_minus = self.basis.values([[-1.0]])[0]
            self.B_plus = self.basis.values([[1.0]])[0]
        else:
            ones = np.ones_like(self.edge_nodes)
            self.B_left = self.basis.values(np.stack([-ones, self.edge_nodes], axis=1))
            self.B_right = self.basis.values(np.stack([ones, self.edge_nodes], axis=1))
            self.B_bottom = self.basis.values(np.stack([self.edge_nodes, -ones], axis=1))
            self.B_top = self.basis.values(np.stack([self.edge_nodes, ones], axis=1))

        # decomposition points first, then the volume quadrature points
        self.n_decomposition = len(self.quadrature.points)
        self.limiter_points = np.concatenate([self.quadrature.points, self.volume_points])
        self.B_limiter = self.basis.values(self.limiter_points)

    @property
    def nmodes(self) -> int:
        return self.basis.size

    def zeros(self) -> np.ndarray:
        return np.zeros(tuple(self.mesh.counts) + (self.nmodes, self.ncomp))

    def project(self, ic: Callable[..., np.ndarray], time: float = 0.0) -> DgSolution:
        """L2 projection of the conserved field of ``ic`` using (k+2)-point Gauss per axis."""
        points, weights = tensor_gauss(self.degree + 2, self.dim)
        coords = physical_points(self.mesh, points)
        U = prim_to_cons(ic(*coords), self.eos)
        coeffs = np.einsum("p,pm,...pc->...mc", weights, self.basis.values(points), U)
        return DgSolution(degree=self.degree, coeffs=coeffs, time=time)

    def decomposition_values(self, coeffs: np.ndarray) -> np.ndarray:
        return point_values(coeffs, self.B_limiter[: self.n_decomposition])

    def _recover(self, U: np.ndarray, where: str) -> np.ndarray:
        try:
            V, _ = recover(U, self.eos)
        except RecoveryError as e:
            cell = e.cell[: self.dim] if e.cell else None
            raise RecoveryError(f"Recovery failed at {where}: {e.reason}", cell=cell)
        return V

    def residual(self, coeffs: np.ndarray) -> np.ndarray:
        """Time derivative of every modal coefficient; ``coeffs`` must already be limited."""
        if self.dim == 1:
            return self._residual_1d(coeffs)
        return self._residual_2d(coeffs)

    def _residual_1d(self, coeffs: np.ndarray) -> np.ndarray:
        eos, bc = self.eos, self.mesh.boundary
        dx = self.mesh.spacing[0]

        Ug = point_values(coeffs, self.B_volume)
        F = flux_from_prim(Ug, self._recover(Ug, "volume point"), 0)
        volume = (2.0 / dx) * np.einsum("q,qm,jqc->jmc", self.volume_weights, self.G_volume[:, :, 0], F)

        UL = np.einsum("m,jmc->jc", self.B_minus, coeffs)
        UR = np.einsum("m,jmc->jc", self.B_plus, coeffs)
        VL = self._recover(UL, "left trace")
        VR = self._recover(UR, "right trace")

        n = coeffs.shape[0]
        Um = np.empty((n + 1, self.ncomp))
        Up = np.empty_like(Um)
        Vm = np.empty_like(Um)
        Vp = np.empty_like(Um)
        Um[1:], Vm[1:] = UR, VR
        Up[:-1], Vp[:-1] = UL, VL
        if bc["left"].kind == "periodic":
            Um[0], Vm[0] = UR[-1], VR[-1]
            Up[-1], Vp[-1] = UL[0], VL[0]
        else:
            Um[0], Vm[0] = ghost_states(bc["left"], "left", UL[0], VL[0], eos)
            Up[-1], Vp[-1] = ghost_states(bc["right"], "right", UR[-1], VR[-1], eos)

        Fh = lf_flux(Um, Up, [1.0], eos, self.alpha, Vm, Vp)
        surface = -(1.0 / dx) * (
            Fh[1:, None, :] * self.B_plus[None, :, None] - Fh[:-1, None, :] * self.B_minus[None, :, None]
        )
        return volume + surface

    def _edge_coordinates(self, axis: int) -> np.ndarray:
        """Tangential coordinate of the edge quadrature points, shape (count along axis, Q)."""
        return self.mesh.centers(axis)[:, None] + 0.5 * self.mesh.spacing[axis] * self.edge_nodes

    def _residual_2d(self, coeffs: np.ndarray) -> np.ndarray:
        eos, bc = self.eos, self.mesh.boundary
        dx, dy = self.mesh.spacing
        gw = self.edge_weights

        Ug = point_values(coeffs, self.B_volume)
        Vg = self._recover(Ug, "volume point")
        volume = (2.0 / dx) * np.einsum(
            "p,pm,xypc->xymc", self.volume_weights, self.G_volume[:, :, 0], flux_from_prim(Ug, Vg, 0)
        ) + (2.0 / dy) * np.einsum(
            "p,pm,xypc->xymc", self.volume_weights, self.G_volume[:, :, 1], flux_from_prim(Ug, Vg, 1)
        )

        # faces normal to x
        UL = point_values(coeffs, self.B_left)
        UR = point_values(coeffs, self.B_right)
        VL = self._recover(UL, "left edge")
        VR = self._recover(UR, "right edge")
        nx, ny = coeffs.shape[:2]
        shape = (nx + 1, ny) + UL.shape[2:]
        Um, Up, Vm, Vp = (np.empty(shape) for _ in range(4))
        Um[1:], Vm[1:] = UR, VR
        Up[:-1], Vp[:-1] = UL, VL
        if bc["left"].kind == "periodic":
            Um[0], Vm[0] = UR[-1], VR[-1]
            Up[-1], Vp[-1] = UL[0], VL[0]
        else:
            y_edge = self._edge_coordinates(1)
            Um[0], Vm[0] = ghost_states(bc["left"], "left", UL[0], VL[0], eos, y_edge)
            Up[-1], Vp[-1] = ghost_states(bc["right"], "right", UR[-1], VR[-1], eos, y_edge)
        Fx = lf_flux(Um, Up, [1.0, 0.0], eos, self.alpha, Vm, Vp)
        surface = -(1.0 / dx) * (
            np.einsum("q,qm,xyqc->xymc", gw, self.B_right, Fx[1:])
            - np.einsum("q,qm,xyqc->xymc", gw, self.B_left, Fx[:-1])
        )

        # faces normal to y
        UB = point_values(coeffs, self.B_bottom)
        UT = point_values(coeffs, self.B_top)
        VB = self._recover(UB, "bottom edge")
        VT = self._recover(UT, "top edge")
        shape = (nx, ny + 1) + UB.shape[2:]
        Um, Up, Vm, Vp = (np.empty(shape) for _ in range(4))
        Um[:, 1:], Vm[:, 1:] = UT, VT
        Up[:, :-1], Vp[:, :-1] = UB, VB
        if bc["bottom"].kind == "periodic":
            Um[:, 0], Vm[:, 0] = UT[:, -1], VT[:, -1]
            Up[:, -1], Vp[:, -1] = UB[:, 0], VB[:, 0]
        else:
            x_edge = self._edge_coordinates(0)
            Um[:, 0], Vm[:, 0] = ghost_states(bc["bottom"], "bottom", UB[:, 0], VB[:, 0], eos, x_edge)
            Up[:, -1], Vp[:, -1] = ghost_states(bc["top"], "top", UT[:, -1], VT[:, -1], eos, x_edge)
        Fy = lf_flux(Um, Up, [0.0, 1.0], eos, self.alpha, Vm, Vp)
        surface -= (1.0 / dy) * (
            np.einsum("q,qm,xyqc->xymc", gw, self.B_top, Fy[:, 1:])
            - np.einsum("q,qm,xyqc->xymc", gw, self.B_bottom, Fy[:, :-1])
        )
        return volume + surface


def evaluate(solution: DgSolution, basis: LegendreBasis, cell: Sequence[int], point: Sequence[float]) -> np.ndarray:
    """Conserved state of one cell at a reference point."""
    B = basis.values(np.atleast_2d(np.asarray(point, dtype=float)))
    return (B @ solution.coeffs[tuple(cell)])[0]


def project_initial(ic: Callable[..., np.ndarray], mesh: Mesh, k: int, eos: Eos) -> DgSolution:
    return DgOperator(mesh, k, eos).project(ic)


def residual_1d(solution: DgSolution, mesh: Mesh, eos: Eos, alpha: float = 1.0) -> np.ndarray:
    return DgOperator(mesh, solution.degree, eos, alpha).residual(solution.coeffs)


def residual_2d(solution: DgSolution, mesh: Mesh, eos: Eos, alpha: float = 1.0) -> np.ndarray:
    return DgOperator(mesh, solution.degree, eos, alpha).residual(solution.coeffs)


def theoretical_dt(mesh: Mesh, k: int, alpha: float = 1.0) -> float:
    """Forward-Euler bound alpha*dt*sum(1/dx_i) <= w1 (1 for k = 0)."""
    return courant_bound(k) / (alpha * sum(1.0 / h for h in mesh.spacing))


def max_stable_dt(
    mesh: Mesh, k: int, alpha: float = 1.0, cfl: Optional[float] = None, scheme: str = "ssprk3"
) -> float:
    """
    min(theoretical bound, practical CFL) time step. The multi-step scheme takes forward-Euler
    sub-steps of 3*dt, so its bound and default practical number are divided by three.
    """
    factor = MULTISTEP_CFL_FACTOR if scheme == "sspms3" else 1.0
    bound = courant_bound(k) * factor
    practical = cfl if cfl is not None else PRACTICAL_CFL[k] * factor
    if practical > bound:
        logger.warning(f"CFL number {practical} exceeds the admissible bound {bound:.6g}; using the bound")
    return min(bound, practical) / (alpha * sum(1.0 / h for h in mesh.spacing))
