"""Error norms against exact solutions, S_min(t) monitoring and wave-front location."""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.physics.state_eos import recover
from app.solver.dg_core import DgOperator, point_values
from app.solver.limiter import safe_entropy
from app.solver.mesh import physical_points
from app.solver.quadrature import tensor_gauss
from models.models import DgSolution, SminRecord

logger = logging.getLogger(__name__)


def error_norms(
    solution: DgSolution,
    operator: DgOperator,
    exact: Callable[..., np.ndarray],
    n_points: Optional[int] = None,
) -> Tuple[float, float]:
    """
    Discrete l1 and l2 norms (domain averaged) of the rest-mass density error, using an
    n-point Gauss rule per axis in every cell (default k+2) and pointwise recovery.
    """
    n_points = n_points or solution.degree + 2
    points, weights = tensor_gauss(n_points, operator.dim)
    coords = physical_points(operator.mesh, points)
    U = point_values(solution.coeffs, operator.basis.values(points))
    V, _ = recover(U, operator.eos)
    error = np.abs(V[..., 0] - exact(*coords, solution.time)[..., 0])
    l1 = float(np.mean(error @ weights))
    l2 = float(np.sqrt(np.mean((error**2) @ weights)))
    return l1, l2


class SminMonitor:
    """Records min S over the decomposition points and over the cell averages after each step."""

    def __init__(self, operator: DgOperator):
        self.operator = operator
        self.series: List[SminRecord] = []

    def record(self, time: float, limited_coeffs: np.ndarray) -> SminRecord:
        eos = self.operator.eos
        points = self.operator.decomposition_values(limited_coeffs)
        entry = SminRecord(
            t=time,
            s_min_points=float(safe_entropy(points, eos).min()),
            s_min_averages=float(safe_entropy(limited_coeffs[..., 0, :], eos).min()),
        )
        self.series.append(entry)
        return entry

    def as_array(self) -> np.ndarray:
        return np.array([[r.t, r.s_min_points, r.s_min_averages] for r in self.series]).reshape(-1, 3)


def s_min_series(monitor: SminMonitor) -> np.ndarray:
    """Rows of (t, S_min over points, S_min over averages)."""
    return monitor.as_array()


def _crossing(x: np.ndarray, rho: np.ndarray, i: int, level: float) -> float:
    """Linear interpolation of the level crossing between samples i-1 and i."""
    r0, r1 = rho[i - 1], rho[i]
    if r1 == r0:
        return float(x[i])
    return float(x[i - 1] + (level - r0) / (r1 - r0) * (x[i] - x[i - 1]))


def locate_jumps(x: np.ndarray, rho: np.ndarray) -> Tuple[float, float]:
    """
    Contact and shock positions around a compressed shell: half-height crossings of the
    density peak toward the rarefied plateau on its left and the undisturbed state on its right.
    """
    peak = int(np.argmax(rho))
    right_level = 0.5 * (rho[peak] + rho[-1])
    after = np.nonzero(rho[peak:] < right_level)[0]
    shock = _crossing(x, rho, peak + int(after[0]), right_level) if after.size else float(x[-1])

    left_level = 0.5 * (rho[peak] + rho[:peak].min()) if peak > 0 else rho[peak]
    before = np.nonzero(rho[:peak] < left_level)[0]
    contact = _crossing(x, rho, int(before[-1]) + 1, left_level) if before.size else float(x[0])
    return contact, shock
