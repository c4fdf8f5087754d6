"""
Scaling limiter that pulls each cell polynomial toward its cell average until the point
values at the limiter points are admissible (D > 0, q > 0) and, in the entropy modes,
satisfy S >= s0. Only modes >= 1 are scaled, so cell averages are never touched.

The step functions work on a batch of cells: ``coeffs`` has shape (ncells, nmodes, ncomp)
and ``B`` is the basis matrix (npoints, nmodes) of the limiter points.
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np

from app.errors import InvalidAverage, IrpViolation, NonConvergence
from app.physics.invariant_region import entropy_from_prim, q_fn
from app.physics.state_eos import recover
from app.solver.parallel import map_blocks
from models.models import DgSolution, Eos, InvariantRegion, LimiterConfig

logger = logging.getLogger(__name__)

Floor = Union[float, np.ndarray]


def _points(coeffs: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.einsum("pm,jmc->jpc", B, coeffs)


def _scale(coeffs: np.ndarray, theta: np.ndarray, component: Optional[int] = None) -> np.ndarray:
    out = coeffs.copy()
    if component is None:
        out[:, 1:, :] *= theta[:, None, None]
    else:
        out[:, 1:, component] *= theta[:, None]
    return out


def _ratio(avg_value, min_value, eps):
    """min(1, |(avg - eps)/(avg - min)|) where min < eps, else 1."""
    theta = np.ones_like(avg_value)
    need = min_value < eps
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.abs((avg_value - eps) / (avg_value - min_value))
    theta[need] = np.minimum(1.0, ratio[need])
    return theta


def safe_entropy(U: np.ndarray, eos: Eos) -> np.ndarray:
    """Specific entropy, -inf wherever U is not admissible."""
    S = np.full(U.shape[:-1], -np.inf)
    ok = (U[..., 0] > 0) & (q_fn(U) > 0)
    if np.any(ok):
        V, _ = recover(U[ok], eos)
        S[ok] = entropy_from_prim(V, eos)
    return S


def bp_limit_density(coeffs: np.ndarray, B: np.ndarray, eps: float = 1e-13) -> Tuple[np.ndarray, np.ndarray]:
    """Scale the density modes so that min D over the points is at least min(eps, D_avg)."""
    D_avg = coeffs[:, 0, 0]
    bad = ~(D_avg > 0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise InvalidAverage((j,), "D", float(D_avg[j]))
    eps1 = np.minimum(eps, D_avg)
    D_min = (coeffs[:, :, 0] @ B.T).min(axis=1)
    theta = _ratio(D_avg, D_min, eps1)
    return _scale(coeffs, theta, component=0), theta


def bp_limit_q(coeffs: np.ndarray, B: np.ndarray, eps: float = 1e-13) -> Tuple[np.ndarray, np.ndarray]:
    """Scale all modes so that min q over the points is at least min(eps, q(U_avg)); q is concave."""
    q_avg = q_fn(coeffs[:, 0, :])
    bad = ~(q_avg > 0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise InvalidAverage((j,), "q", float(q_avg[j]))
    eps2 = np.minimum(eps, q_avg)
    q_min = q_fn(_points(coeffs, B)).min(axis=1)
    theta = _ratio(q_avg, q_min, eps2)
    return _scale(coeffs, theta), theta


def _check_entropy_average(coeffs: np.ndarray, s0: np.ndarray, eos: Eos, average_tol: float) -> np.ndarray:
    avg = coeffs[:, 0, :]
    bad = ~((avg[:, 0] > 0) & (q_fn(avg) > 0))
    if np.any(bad):
        j = int(np.argmax(bad))
        raise InvalidAverage((j,), "q", float(q_fn(avg[j])))
    S_avg = safe_entropy(avg, eos)
    low = S_avg < s0 - average_tol
    if np.any(low):
        j = int(np.argmax(low))
        raise InvalidAverage((j,), "S", float(S_avg[j]))
    return S_avg


def entropy_limit(
    coeffs: np.ndarray,
    B: np.ndarray,
    s0: Floor,
    eos: Eos,
    tol: float = 1e-12,
    max_iter: int = 200,
    average_tol: float = 1e-12,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Scale all modes by theta3 = min over points of the theta solving
    S((1-theta) U_avg + theta U(x)) = s0, found by bisection.
    """
    s0 = np.broadcast_to(np.asarray(s0, dtype=float), coeffs.shape[:1])
    S_avg = _check_entropy_average(coeffs, s0, eos, average_tol)
    avg = coeffs[:, 0, :]
    values = _points(coeffs, B)
    S = safe_entropy(values, eos)
    cells, pts = np.nonzero(S < s0[:, None])
    theta = np.ones(coeffs.shape[0])
    if cells.size == 0:
        return coeffs.copy(), theta

    base = avg[cells]
    delta = values[cells, pts] - base
    floor = s0[cells]
    lo = np.zeros(cells.size)
    hi = np.ones(cells.size)
    for _ in range(max_iter):
        open_ = hi - lo > tol
        if not np.any(open_):
            break
        mid = 0.5 * (lo + hi)
        inside = safe_entropy(base + mid[:, None] * delta, eos) >= floor
        lo = np.where(open_ & inside, mid, lo)
        hi = np.where(open_ & ~inside, mid, hi)
    else:
        if np.any(hi - lo > tol):
            raise NonConvergence(f"Entropy bisection did not reach {tol} in {max_iter} iterations")

    # averages sitting marginally below s0 are flattened completely
    lo = np.where(S_avg[cells] >= floor, lo, 0.0)
    np.minimum.at(theta, cells, lo)
    return _scale(coeffs, theta), theta


def qtilde_limit(
    coeffs: np.ndarray, B: np.ndarray, s0: Floor, eos: Eos, average_tol: float = 1e-12
) -> Tuple[np.ndarray, np.ndarray]:
    """Entropy step through the concave q~(U) = D (S(U) - s0): one linear scaling per cell."""
    s0 = np.broadcast_to(np.asarray(s0, dtype=float), coeffs.shape[:1])
    S_avg = _check_entropy_average(coeffs, s0, eos, average_tol)
    qt_avg = np.maximum(coeffs[:, 0, 0] * (S_avg - s0), 0.0)
    values = _points(coeffs, B)
    with np.errstate(invalid="ignore"):
        qt = values[..., 0] * (safe_entropy(values, eos) - s0[:, None])
    qt_min = qt.min(axis=1)
    theta = np.ones(coeffs.shape[0])
    need = qt_min < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = qt_avg / (qt_avg - qt_min)
    theta[need] = np.minimum(1.0, np.nan_to_num(ratio[need], nan=0.0))
    return _scale(coeffs, theta), theta


def limit_cells(
    coeffs: np.ndarray, B: np.ndarray, config: LimiterConfig, eos: Eos, s0: Optional[Floor] = None
) -> np.ndarray:
    """Apply the configured limiter steps to a flat batch of cells; ``s0`` overrides config.s0 (per cell)."""
    s0 = config.s0 if s0 is None else s0
    if config.mode == "none":
        return coeffs
    out, _ = bp_limit_density(coeffs, B, config.eps)
    out, _ = bp_limit_q(out, B, config.eps)
    if config.mode == "irp":
        out, _ = entropy_limit(
            out, B, s0, eos, config.bisection_tol, config.max_iter, config.average_tol
        )
    elif config.mode == "irp_qtilde":
        out, _ = qtilde_limit(out, B, s0, eos, config.average_tol)
    return out


def irp_limit(
    solution: DgSolution,
    region: InvariantRegion,
    config: LimiterConfig,
    B: np.ndarray,
    threads: int = 1,
    s0: Optional[Floor] = None,
) -> DgSolution:
    """
    Limit every cell of a solution into ``region``: its sigma is the entropy floor and its
    EOS drives recovery, while ``config`` picks the mode and tolerances. An array ``s0``
    replaces sigma with one floor per cell. Cells are processed in independent blocks, in
    parallel when ``threads`` > 1; errors report the multi-dimensional cell index.
    """
    eos = region.eos
    if config.mode == "none" or solution.degree == 0:
        return solution
    grid = solution.coeffs.shape[:-2]
    flat = solution.coeffs.reshape((-1,) + solution.coeffs.shape[-2:])
    floor = np.broadcast_to(np.asarray(region.sigma if s0 is None else s0, dtype=float), grid).ravel()

    def work(start: int, stop: int) -> np.ndarray:
        try:
            return limit_cells(flat[start:stop], B, config, eos, floor[start:stop])
        except InvalidAverage as e:
            cell = tuple(int(i) for i in np.unravel_index(start + e.cell[0], grid))
            raise InvalidAverage(cell, e.quantity, e.value)

    limited = np.concatenate(map_blocks(work, flat.shape[0], threads), axis=0)
    return solution.with_coeffs(limited.reshape(solution.coeffs.shape))


def check_averages(coeffs: np.ndarray, sigma: float, eos: Eos, slack: float = 1e-10, time: Optional[float] = None):
    """Raise IrpViolation if a cell average is inadmissible or has S < sigma - slack."""
    avg = coeffs[..., 0, :]
    D = avg[..., 0]
    if np.any(~(D > 0)):
        cell = tuple(int(i) for i in np.argwhere(~(D > 0))[0])
        raise IrpViolation(cell, "D", float(D[cell]), time)
    q = q_fn(avg)
    if np.any(~(q > 0)):
        cell = tuple(int(i) for i in np.argwhere(~(q > 0))[0])
        raise IrpViolation(cell, "q", float(q[cell]), time)
    if np.isfinite(sigma):
        S = safe_entropy(avg, eos)
        low = S < sigma - slack
        if np.any(low):
            cell = tuple(int(i) for i in np.argwhere(low)[0])
            raise IrpViolation(cell, "S", float(S[cell]), time)
