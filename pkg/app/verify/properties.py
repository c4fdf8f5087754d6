"""
Sampled checks of the inequalities and splittings that make the scheme invariant-region
preserving. Every check draws random admissible states, evaluates the property on each
sample and reports the worst margin (negative on failure).
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.physics.flux import (
    cartesian_glf_average,
    flux_from_prim,
    glf_average,
    lf_flux,
    normal_flux_from_prim,
    physical_flux,
    polytope_glf_average,
    rotate_from_normal,
    rotate_to_normal,
)
from app.physics.invariant_region import (
    borderline_entropy,
    elementary_inequality_margin,
    entropy_condition,
    entropy_from_prim,
    entropy_hessian,
    g2_functional,
    g2_witness,
    in_admissible,
    linear_entropy,
    membership,
    negated_entropy,
    phi_sigma,
    q_fn,
    velocity_inequality_margin,
)
from app.physics.sampling import GAMMAS, random_aux, random_directions, random_states, random_velocities
from app.physics.state_eos import recover
from app.solver.dg_core import DgOperator, point_values, theoretical_dt
from app.solver.first_order import lf_update_1d, lf_update_polygon
from app.solver.limiter import irp_limit
from app.solver.quadrature import gauss, quadrature_set
from models.models import BoundaryCondition, DgSolution, Eos, InvariantRegion, LimiterConfig, Mesh, PropertyResult

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps
ENTROPY_SLACK = 1e-10
CHUNK = 2000
MODERATE = dict(rho_range=(0.1, 10.0), p_range=(0.1, 10.0), vmax=0.9)
PERIODIC = BoundaryCondition(kind="periodic")


def _region_margin(U, sigma, eos: Eos, factor: float = 1e2) -> np.ndarray:
    """
    S(U) - sigma plus the entropy round-off slack 1e-10 max(1, |sigma|) + factor eps E/p;
    -inf for inadmissible states. Non-negative means U is in Omega_sigma.
    """
    U = np.asarray(U, dtype=float)
    sigma = np.broadcast_to(np.asarray(sigma, dtype=float), U.shape[:-1])
    margin = np.full(U.shape[:-1], -np.inf)
    ok = in_admissible(U)
    if np.any(ok):
        Uok = U[ok]
        V, _ = recover(Uok, eos)
        with np.errstate(divide="ignore", invalid="ignore"):
            slack = ENTROPY_SLACK * np.maximum(1.0, np.abs(sigma[ok])) + factor * EPS * Uok[:, -1] / V[:, -1]
            margin[ok] = np.nan_to_num(entropy_from_prim(V, eos) - sigma[ok] + slack, nan=-np.inf)
    return margin


def _result(name: str, margins, samples: Optional[int] = None, strict: bool = False, detail: str = "") -> PropertyResult:
    margins = np.ravel(np.asarray(margins, dtype=float))
    margins = np.where(np.isnan(margins), -np.inf, margins)
    passed = bool(np.all(margins > 0)) if strict else bool(np.all(margins >= 0))
    return PropertyResult(
        name=name,
        samples=int(samples if samples is not None else margins.size),
        passed=passed,
        worst=float(margins.min()) if margins.size else 0.0,
        detail=detail,
    )


def _chunks(n: int, size: int = CHUNK):
    """Yield (chunk index, chunk size) covering n samples."""
    for i, start in enumerate(range(0, n, size)):
        yield i, min(size, n - start)


def _gamma_in_range(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform on (1, 2]."""
    return 2.0 - rng.uniform(0.0, 1.0, size=n)


# scalar inequalities

def check_power_inequality(rng: np.random.Generator, n: int) -> PropertyResult:
    """(eta gamma + 1)^(1/gamma) >= (2 eta + 1)^(1/2) for eta > -1/2."""
    eta = -0.5 + 10.5 * (1.0 - rng.uniform(0.0, 1.0, size=n))
    gamma = _gamma_in_range(rng, n)
    margin = elementary_inequality_margin(eta, gamma) + 1e-12 * np.maximum(1.0, np.sqrt(2.0 * eta + 1.0))
    return _result("power inequality", margin)


def check_velocity_inequality(rng: np.random.Generator, n: int) -> PropertyResult:
    margins = []
    for i, m in _chunks(n):
        d = 1 + i % 3
        v = random_velocities(rng, m, d)
        v_star = random_velocities(rng, m, d)
        gamma = _gamma_in_range(rng, m)
        a = 1.0 - np.sum(v * v, axis=-1)
        b = 1.0 - np.sum(v_star * v_star, axis=-1)
        scale = gamma * np.abs(1.0 - np.sum(v * v_star, axis=-1)) / a + gamma + 1.0 + (np.sqrt(a / b)) ** (-gamma)
        margins.append(velocity_inequality_margin(v, v_star, gamma) + 1e-10 * scale)
    return _result("velocity inequality", np.concatenate(margins))


def check_q_concavity(rng: np.random.Generator, n: int) -> PropertyResult:
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U1, _ = random_states(rng, m, d, eos)
        U2, _ = random_states(rng, m, d, eos)
        lam = rng.uniform(0.0, 1.0, size=m)
        mix = lam[:, None] * U1 + (1.0 - lam[:, None]) * U2
        scale = np.abs(U1).sum(axis=-1) + np.abs(U2).sum(axis=-1)
        margins.append(q_fn(mix) - lam * q_fn(U1) - (1.0 - lam) * q_fn(U2) + 1e-12 * scale)
    return _result("q concavity", np.concatenate(margins))


def check_linear_admissibility(rng: np.random.Generator, n: int) -> PropertyResult:
    """
    E - m.v* - D sqrt(1-|v*|^2) >= q(U) > 0 for admissible U and any v*; v* = v(U) gives
    p/(gamma-1); for D > 0, E <= sqrt(D^2+|m|^2) the choice v* = m/sqrt(D^2+|m|^2) gives q <= 0.
    """
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U, V = random_states(rng, m, d, eos)
        scale = np.abs(U).sum(axis=-1)
        v_star = random_velocities(rng, m, d)
        lower = g2_functional(U, v_star) - q_fn(U) + 1e-12 * scale
        at_velocity = g2_functional(U, V[:, 1:-1])
        exact = V[:, -1] / (eos.gamma - 1.0)
        identity = 1e-10 * scale - np.abs(at_velocity - exact)

        bad = U.copy()
        bad[:, -1] = np.sqrt(U[:, 0] ** 2 + np.sum(U[:, 1:-1] ** 2, axis=-1)) * (1.0 - rng.uniform(0.0, 0.5, m))
        excluded = 1e-12 * np.abs(bad).sum(axis=-1) - g2_functional(bad, g2_witness(bad))
        margins.append(np.minimum.reduce([lower, identity, excluded]))
    return _result("admissibility via linear bounds", np.concatenate(margins))


# invariant region

def _members(rng: np.random.Generator, m: int, d: int, eos: Eos, max_depth: float = 2.0, **ranges):
    """Random states with a floor sigma = S(U) - delta below their entropy."""
    U, V = random_states(rng, m, d, eos, **ranges)
    sigma = entropy_from_prim(V, eos) - rng.uniform(0.0, max_depth, size=m)
    return U, V, sigma


def _phi_scale(U, v_star, rho_star, sigma, gamma):
    root = np.sqrt(1.0 - np.sum(v_star * v_star, axis=-1))
    return (
        np.abs(U[..., -1])
        + np.sum(np.abs(U[..., 1:-1] * v_star), axis=-1)
        + np.abs(U[..., 0]) * root * (1.0 + np.exp(sigma) * gamma / (gamma - 1.0) * rho_star ** (gamma - 1.0))
        + np.exp(sigma) * rho_star**gamma
    )


def check_linear_form_members(rng: np.random.Generator, n: int, n_aux: int = 100) -> PropertyResult:
    """phi_sigma(U; v*, rho*) >= 0 for U in Omega_sigma and random auxiliary points."""
    margins = []
    for i, m in _chunks(n, max(1, CHUNK // 10)):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U, _, sigma = _members(rng, m, d, eos)
        v_star, rho_star = random_aux(rng, m * n_aux, d)
        Ur = np.repeat(U, n_aux, axis=0)
        sr = np.repeat(sigma, n_aux)
        phi = phi_sigma(Ur, (v_star, rho_star), sr, eos)
        margin = phi + 1e-12 * _phi_scale(Ur, v_star, rho_star, sr, eos.gamma)
        margins.append(margin.reshape(m, n_aux).min(axis=1))
    return _result(
        "linear characterization, members", np.concatenate(margins), detail=f"{n_aux} auxiliary points per state"
    )


def check_linear_form_witness(rng: np.random.Generator, n: int) -> PropertyResult:
    """For S(U) < sigma the auxiliary point (v(U), rho(U)) makes phi_sigma negative."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U, V = random_states(rng, m, d, eos)
        sigma = entropy_from_prim(V, eos) + rng.uniform(1e-3, 2.0, size=m)
        margins.append(-phi_sigma(U, (V[:, 1:-1], V[:, 0]), sigma, eos))
    return _result("linear characterization, witness", np.concatenate(margins), strict=True)


def check_monotonic(rng: np.random.Generator, n: int) -> PropertyResult:
    """Omega_sigma2 contains Omega_sigma1 for sigma2 <= sigma1, and U leaves it above S(U)."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U, V, sigma1 = _members(rng, m, d, eos)
        sigma2 = sigma1 - rng.uniform(0.0, 2.0, size=m)
        above = entropy_from_prim(V, eos) + rng.uniform(1e-3, 1.0, size=m)
        ok = membership(U, sigma1, eos) & membership(U, sigma2, eos) & ~membership(U, above, eos)
        margins.append(np.where(ok, 1.0, -1.0))
    return _result("monotonic in sigma", np.concatenate(margins))


def check_convexity(rng: np.random.Generator, n: int) -> PropertyResult:
    """Convex combinations stay in Omega_sigma; with two floors they stay above the smaller one."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U1, _, sigma1 = _members(rng, m, d, eos)
        U2, _, sigma2 = _members(rng, m, d, eos)
        # first half shares a common floor
        half = m // 2
        common = np.minimum(sigma1[:half], sigma2[:half])
        sigma1[:half] = common
        sigma2[:half] = common
        lam = rng.uniform(0.0, 1.0, size=m)[:, None]
        mix = lam * U1 + (1.0 - lam) * U2
        margins.append(_region_margin(mix, np.minimum(sigma1, sigma2), eos))
    return _result("convexity of the invariant region", np.concatenate(margins))


def check_cell_average(rng: np.random.Generator, n: int) -> PropertyResult:
    """Positive-weight averages of Omega_sigma states stay in Omega_sigma."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        L = int(rng.integers(2, 7))
        U, V = random_states(rng, m * L, d, eos)
        U = U.reshape(m, L, d + 2)
        sigma = entropy_from_prim(V, eos).reshape(m, L).min(axis=1) - rng.uniform(0.0, 1.0, size=m)
        weights = rng.dirichlet(np.ones(L), size=m)
        average = np.einsum("jl,jlc->jc", weights, U)
        margins.append(_region_margin(average, sigma, eos))
    return _result("cell average admissibility", np.concatenate(margins))


def check_flux_shifted_bound(rng: np.random.Generator, n: int) -> PropertyResult:
    """phi_sigma(U + theta F_i(U)) + theta e^sigma v*_i rho*^gamma >= 0 for theta in [-1, 1]."""
    margins = []
    for i, m in _chunks(n, 5 * CHUNK):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U, V, sigma = _members(rng, m, d, eos)
        v_star, rho_star = random_aux(rng, m, d)
        theta = rng.uniform(-1.0, 1.0, size=m)
        axis = rng.integers(0, d, size=m)
        F = np.stack([flux_from_prim(U, V, k) for k in range(d)], axis=1)[np.arange(m), axis]
        W = U + theta[:, None] * F
        value = phi_sigma(W, (v_star, rho_star), sigma, eos) + theta * np.exp(sigma) * v_star[
            np.arange(m), axis
        ] * rho_star**eos.gamma
        scale = _phi_scale(W, v_star, rho_star, sigma, eos.gamma) * (1.0 + np.abs(theta))
        margins.append(value + 1e-10 * scale)
    return _result("flux-shifted linear bound", np.concatenate(margins))


# fluxes

def check_lf_identities(rng: np.random.Generator, n: int) -> PropertyResult:
    """Consistency F(U, U) = xi.F(U) and conservation F(U-, U+; xi) = -F(U+, U-; -xi)."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        Um, _ = random_states(rng, m, d, eos)
        Up, _ = random_states(rng, m, d, eos)
        xi = random_directions(rng, m, d)
        alpha = 1.0 + (i % 2) * rng.uniform(0.0, 1.0)
        exact = normal_flux_from_prim(Um, recover(Um, eos)[0], xi)
        consistency = np.abs(lf_flux(Um, Um, xi, eos, alpha) - exact).max(axis=-1)
        forward = lf_flux(Um, Up, xi, eos, alpha)
        conservation = np.abs(forward + lf_flux(Up, Um, -xi, eos, alpha)).max(axis=-1)
        scale = np.maximum(1.0, np.abs(forward).max(axis=-1) + np.abs(exact).max(axis=-1))
        margins.append(1e-14 * scale - np.maximum(consistency, conservation))
    return _result("LF flux identities", np.concatenate(margins))


def check_rotation(rng: np.random.Generator, n: int) -> PropertyResult:
    """xi.F(U) equals the rotated x-flux of the rotated state, in 2D and 3D."""
    margins = np.empty(n)
    eos_list = [Eos(gamma=g) for g in GAMMAS]
    for s in range(n):
        eos = eos_list[s % 3]
        d = 2 + s % 2
        U, V = random_states(rng, 1, d, eos)
        xi = random_directions(rng, 1, d)[0]
        lhs = normal_flux_from_prim(U, V, xi)
        rhs = rotate_from_normal(physical_flux(rotate_to_normal(U, xi), 0, eos), xi)
        scale = np.abs(lhs).max() + np.abs(U).max()
        margins[s] = 1e-12 * scale - np.abs(lhs - rhs).max()
    return _result("rotational invariance", margins)


def _pair_floor(V1, V2, eos, rng, m):
    return np.minimum(entropy_from_prim(V1, eos), entropy_from_prim(V2, eos)) - rng.uniform(0.0, 0.5, size=m)


def check_glf_1d(rng: np.random.Generator, n: int) -> PropertyResult:
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        d = 1 + i % 3
        U_hat, V_hat = random_states(rng, m, d, eos)
        U_check, V_check = random_states(rng, m, d, eos)
        sigma = _pair_floor(V_hat, V_check, eos, rng, m)
        alpha = 1.0 if i % 2 == 0 else rng.uniform(1.0, 2.0)
        G = glf_average(U_hat, U_check, i % d, eos, alpha)
        margins.append(_region_margin(G, sigma, eos))
    return _result("gLF splitting 1D", np.concatenate(margins))


def _check_glf_cartesian(rng: np.random.Generator, n: int, d: int) -> PropertyResult:
    margins = []
    for i, m in _chunks(n, max(1, n // 10)):
        eos = Eos(gamma=GAMMAS[i % 3])
        Q = int(rng.integers(1, 5))
        spacings = rng.uniform(0.1, 1.0, size=d)
        weights = rng.dirichlet(np.ones(Q))
        U, V = random_states(rng, 2 * d * Q * m, d, eos)
        U = U.reshape(2 * d, Q, m, d + 2)
        sigma = entropy_from_prim(V, eos).reshape(2 * d, Q, m).min(axis=(0, 1)) - rng.uniform(0.0, 0.5, size=m)
        result = cartesian_glf_average(list(U[:d]), list(U[d:]), spacings, weights, eos)
        margins.append(_region_margin(result, sigma, eos))
    return _result(f"gLF splitting {d}D Cartesian", np.concatenate(margins))


def check_glf_2d(rng: np.random.Generator, n: int) -> PropertyResult:
    return _check_glf_cartesian(rng, n, 2)


def check_glf_3d(rng: np.random.Generator, n: int) -> PropertyResult:
    return _check_glf_cartesian(rng, n, 3)


def random_polygon(rng: np.random.Generator, sides: int) -> Tuple[np.ndarray, np.ndarray, float]:
    """Convex polygon inscribed in the unit circle: edge lengths, outward normals and area."""
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=sides))
        vertices = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        edges = np.roll(vertices, -1, axis=0) - vertices
        lengths = np.linalg.norm(edges, axis=1)
        area = 0.5 * float(np.sum(vertices[:, 0] * np.roll(vertices[:, 1], -1) - np.roll(vertices[:, 0], -1) * vertices[:, 1]))
        if lengths.min() > 1e-6 and area > 1e-6:
            break
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
    return lengths, normals, area


def check_glf_polytope(rng: np.random.Generator, n: int) -> PropertyResult:
    margins = np.empty(n)
    eos_list = [Eos(gamma=g) for g in GAMMAS]
    for s in range(n):
        eos = eos_list[s % 3]
        sides = int(rng.integers(3, 9))
        Q = int(rng.integers(1, 4))
        lengths, normals, _ = random_polygon(rng, sides)
        _, weights = gauss(Q)
        U, V = random_states(rng, sides * Q, 2, eos)
        U = U.reshape(sides, Q, 4)
        sigma = entropy_from_prim(V, eos).min() - rng.uniform(0.0, 0.5)
        faces = [(lengths[j], normals[j], weights, U[j]) for j in range(sides)]
        alpha = 1.0 if s % 2 == 0 else rng.uniform(1.0, 2.0)
        margins[s] = _region_margin(polytope_glf_average(faces, eos, alpha)[None], sigma, eos)[0]
    return _result("gLF splitting polytope fans", margins)


def check_rectangle_fan(rng: np.random.Generator, n: int) -> PropertyResult:
    """The polytope average over a rectangle fan equals the Cartesian average."""
    margins = []
    for i, m in _chunks(n, max(1, n // 10)):
        eos = Eos(gamma=GAMMAS[i % 3])
        Q = int(rng.integers(1, 5))
        dx, dy = rng.uniform(0.1, 1.0, size=2)
        weights = rng.dirichlet(np.ones(Q))
        U, _ = random_states(rng, 4 * Q * m, 2, eos)
        U = U.reshape(4, Q, m, 4)
        faces = [(dy, [1.0, 0.0], weights, U[0]), (dy, [-1.0, 0.0], weights, U[2]),
                 (dx, [0.0, 1.0], weights, U[1]), (dx, [0.0, -1.0], weights, U[3])]
        polytope = polytope_glf_average(faces, eos)
        cartesian = cartesian_glf_average([U[0], U[1]], [U[2], U[3]], [dx, dy], weights, eos)
        scale = np.abs(U).max(axis=(0, 1, 3))
        margins.append(1e-13 * scale - np.abs(polytope - cartesian).max(axis=-1))
    return _result("rectangle fan identity", np.concatenate(margins))


# first-order schemes

def check_first_order_1d(rng: np.random.Generator, n: int) -> PropertyResult:
    """S of the Lax-Friedrichs update is at least the minimum S of its three inputs."""
    margins = []
    for i, m in _chunks(n):
        eos = Eos(gamma=GAMMAS[i % 3])
        (UL, VL), (UC, VC), (UR, VR) = (random_states(rng, m, 1, eos) for _ in range(3))
        alpha = 1.0 if i % 2 == 0 else rng.uniform(1.0, 2.0)
        lam = rng.uniform(0.0, 1.0, size=m) / alpha
        new = lf_update_1d(UL, UC, UR, lam, alpha, eos)
        floor = np.minimum.reduce([entropy_from_prim(VL, eos), entropy_from_prim(VC, eos), entropy_from_prim(VR, eos)])
        margins.append(_region_margin(new, floor, eos))
    return _result("first-order local minimum entropy 1D", np.concatenate(margins))


def check_first_order_polygon(rng: np.random.Generator, n: int) -> PropertyResult:
    margins = np.empty(n)
    eos_list = [Eos(gamma=g) for g in GAMMAS]
    for s in range(n):
        eos = eos_list[s % 3]
        sides = int(rng.integers(3, 9))
        lengths, normals, area = random_polygon(rng, sides)
        U, V = random_states(rng, sides + 1, 2, eos)
        alpha = 1.0 if s % 2 == 0 else rng.uniform(1.0, 2.0)
        dt = rng.uniform(0.0, 1.0) * 2.0 * area / (alpha * lengths.sum())
        new = lf_update_polygon(U[0], U[1:], lengths, normals, area, dt, alpha, eos)
        margins[s] = _region_margin(new[None], entropy_from_prim(V, eos).min(), eos)[0]
    return _result("first-order local minimum entropy polygon", margins)


# DG building blocks

def _random_coefficients(rng: np.random.Generator, operator: DgOperator) -> np.ndarray:
    """Admissible random averages with large random higher modes."""
    shape = tuple(operator.mesh.counts)
    U, _ = random_states(rng, int(np.prod(shape)), operator.dim, operator.eos, **MODERATE)
    coeffs = operator.zeros()
    coeffs[..., 0, :] = U.reshape(shape + (operator.ncomp,))
    scale = coeffs[..., 0, -1:]
    for mode in range(1, operator.nmodes):
        coeffs[..., mode, :] = 0.3 * rng.normal(size=shape + (operator.ncomp,)) * scale / mode
    return coeffs


def _cell_floor(coeffs: np.ndarray, eos: Eos, rng: np.random.Generator) -> np.ndarray:
    V, _ = recover(coeffs[..., 0, :], eos)
    return entropy_from_prim(V, eos) - rng.uniform(0.0, 0.5, size=coeffs.shape[:-2])


def _stencil_min(s0: np.ndarray) -> np.ndarray:
    out = s0.copy()
    for axis in range(s0.ndim):
        out = np.minimum.reduce([out, np.roll(s0, 1, axis=axis), np.roll(s0, -1, axis=axis)])
    return out


def _forward_euler(rng: np.random.Generator, n: int, dim: int) -> PropertyResult:
    """
    Limited random data with one entropy floor per cell, one forward-Euler step under the
    CFL bound: each new average is above the smallest floor of its face neighbours.
    """
    margins = []
    per_degree = max(1, math.ceil(n / 3))
    for k in (1, 2, 3):
        eos = Eos(gamma=GAMMAS[k - 1])
        if dim == 1:
            mesh = Mesh(extents=((0.0, 1.0),), counts=(per_degree,), boundary={"left": PERIODIC, "right": PERIODIC})
        else:
            side = max(2, math.ceil(math.sqrt(per_degree)))
            mesh = Mesh(
                extents=((0.0, 1.0), (0.0, rng.uniform(0.5, 2.0))),
                counts=(side, side),
                boundary={s: PERIODIC for s in ("left", "right", "bottom", "top")},
            )
        operator = DgOperator(mesh, k, eos)
        coeffs = _random_coefficients(rng, operator)
        s0 = _cell_floor(coeffs, eos, rng)
        region = InvariantRegion(sigma=float(s0.min()), eos=eos)
        limited = irp_limit(
            DgSolution(degree=k, coeffs=coeffs), region, LimiterConfig(mode="irp"), operator.B_limiter, s0=s0
        )
        dt = theoretical_dt(mesh, k) * rng.uniform(0.5, 1.0)
        new = limited.coeffs + dt * operator.residual(limited.coeffs)
        margins.append(_region_margin(new[..., 0, :], _stencil_min(s0), eos, factor=1e3).ravel())
    return _result(f"forward-Euler averages {dim}D", np.concatenate(margins))


def check_forward_euler_1d(rng: np.random.Generator, n: int) -> PropertyResult:
    return _forward_euler(rng, n, 1)


def check_forward_euler_2d(rng: np.random.Generator, n: int) -> PropertyResult:
    return _forward_euler(rng, n, 2)


def check_limiter_contracts(rng: np.random.Generator, n: int) -> PropertyResult:
    """Averages unchanged, a second pass changes nothing, limiter points end up in Omega_s0."""
    margins = []
    per_degree = max(1, math.ceil(n / 3))
    for k in (1, 2, 3):
        eos = Eos(gamma=GAMMAS[k - 1])
        mesh = Mesh(extents=((0.0, 1.0),), counts=(per_degree,))
        operator = DgOperator(mesh, k, eos)
        coeffs = _random_coefficients(rng, operator)
        s0 = _cell_floor(coeffs, eos, rng)
        config = LimiterConfig(mode="irp")
        region = InvariantRegion(sigma=float(s0.min()), eos=eos)
        once = irp_limit(DgSolution(degree=k, coeffs=coeffs), region, config, operator.B_limiter, s0=s0)
        twice = irp_limit(once, region, config, operator.B_limiter, s0=s0)

        scale = np.abs(coeffs).max(axis=(-2, -1))
        conservation = 1e-14 * scale - np.abs(once.coeffs[..., 0, :] - coeffs[..., 0, :]).max(axis=-1)
        idempotence = 1e-10 * scale - np.abs(twice.coeffs - once.coeffs).max(axis=(-2, -1))
        points = point_values(once.coeffs, operator.B_limiter)
        soundness = _region_margin(points, s0[:, None], eos, factor=1e3).min(axis=-1)
        margins.append(np.minimum.reduce([conservation, idempotence, soundness]))
    return _result("limiter contracts", np.concatenate(margins))


def check_quadrature(rng: np.random.Generator, n: int) -> PropertyResult:
    """Decomposition weights average every monomial of degree <= k exactly."""
    margins = []
    for k in range(4):
        for dim in (1, 2):
            rule = quadrature_set(k, dim, tuple(rng.uniform(0.1, 1.0, size=2)))
            for total in range(k + 1):
                for a in range(total + 1):
                    b = total - a
                    if dim == 1 and b:
                        continue
                    exact = (0.0 if a % 2 else 1.0 / (a + 1)) * (0.0 if b % 2 else 1.0 / (b + 1))
                    values = rule.points[:, 0] ** a * (rule.points[:, 1] ** b if dim == 2 else 1.0)
                    margins.append(1e-13 - abs(float(rule.weights @ values) - exact))
    return _result("decomposition quadrature exactness", np.array(margins))


# entropy functions

def _hessian_eigenvalues(rng: np.random.Generator, n: int, make) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smallest and largest Hessian eigenvalue per sampled state (1D and 2D states mixed)."""
    smallest, largest, conditions = [], [], []
    for i, m in _chunks(n, max(1, n // 3 + 1)):
        eos = Eos(gamma=GAMMAS[i % 3])
        U, V = random_states(rng, m, 1 + i % 2, eos, **MODERATE)
        H = make(eos.gamma)
        eig = np.linalg.eigvalsh(entropy_hessian(H, U, eos))
        smallest.append(eig[:, 0])
        largest.append(eig[:, -1])
        conditions.append(entropy_condition(H, entropy_from_prim(V, eos), eos.gamma))
    return np.concatenate(smallest), np.concatenate(largest), np.concatenate(conditions)


def check_hessian_convex(rng: np.random.Generator, n: int) -> PropertyResult:
    """H(S) = S meets the convexity condition and -D H(S) has a positive definite Hessian."""
    low, high, condition = _hessian_eigenvalues(rng, n, lambda gamma: linear_entropy())
    margin = np.where(condition, low / high, -1.0)
    return _result("entropy Hessian H = S", margin, strict=True)


def check_hessian_violation(rng: np.random.Generator, n: int) -> PropertyResult:
    """H(S) = -S fails the condition and the Hessian has a negative eigenvalue."""
    low, _, condition = _hessian_eigenvalues(rng, n, lambda gamma: negated_entropy())
    margin = np.where(~condition, -low, -1.0)
    return _result("entropy Hessian H = -S", margin, strict=True)


def check_hessian_borderline(rng: np.random.Generator, n: int) -> PropertyResult:
    """H = gamma e^(S/gamma) sits on the boundary: the smallest eigenvalue vanishes."""
    low, high, _ = _hessian_eigenvalues(rng, n, borderline_entropy)
    margin = 1e-3 - np.abs(low) / np.abs(high)
    return _result("entropy Hessian borderline", margin)


Check = Callable[[np.random.Generator, int], PropertyResult]

BATTERY: List[Tuple[str, Check, int]] = [
    ("power inequality", check_power_inequality, 100_000),
    ("velocity inequality", check_velocity_inequality, 100_000),
    ("q concavity", check_q_concavity, 10_000),
    ("admissibility via linear bounds", check_linear_admissibility, 10_000),
    ("linear characterization, members", check_linear_form_members, 10_000),
    ("linear characterization, witness", check_linear_form_witness, 10_000),
    ("monotonic in sigma", check_monotonic, 10_000),
    ("convexity of the invariant region", check_convexity, 10_000),
    ("cell average admissibility", check_cell_average, 10_000),
    ("flux-shifted linear bound", check_flux_shifted_bound, 100_000),
    ("LF flux identities", check_lf_identities, 10_000),
    ("rotational invariance", check_rotation, 10_000),
    ("gLF splitting 1D", check_glf_1d, 10_000),
    ("gLF splitting 2D Cartesian", check_glf_2d, 10_000),
    ("gLF splitting 3D Cartesian", check_glf_3d, 10_000),
    ("gLF splitting polytope fans", check_glf_polytope, 10_000),
    ("rectangle fan identity", check_rectangle_fan, 1_000),
    ("first-order local minimum entropy 1D", check_first_order_1d, 10_000),
    ("first-order local minimum entropy polygon", check_first_order_polygon, 10_000),
    ("forward-Euler averages 1D", check_forward_euler_1d, 1_000),
    ("forward-Euler averages 2D", check_forward_euler_2d, 1_000),
    ("limiter contracts", check_limiter_contracts, 1_000),
    ("entropy Hessian H = S", check_hessian_convex, 1_000),
    ("entropy Hessian H = -S", check_hessian_violation, 1_000),
    ("entropy Hessian borderline", check_hessian_borderline, 1_000),
    ("decomposition quadrature exactness", check_quadrature, 1),
]


def run_battery(seed: int = 0, scale: float = 1.0, only: Optional[Sequence[str]] = None) -> List[PropertyResult]:
    """Run every check (or those named in ``only``) with sample counts multiplied by ``scale``."""
    rng = np.random.default_rng(seed)
    results: List[PropertyResult] = []
    for name, check, samples in BATTERY:
        if only and name not in only:
            continue
        n = max(10, int(samples * scale))
        result = check(rng, n)
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"{name}: {'PASS' if result.passed else 'FAIL'} ({result.samples} samples, worst {result.worst:.3e})")
        results.append(result)
    return results


def battery_names() -> Dict[str, int]:
    return {name: samples for name, _, samples in BATTERY}
