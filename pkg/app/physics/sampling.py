"""
Random admissible states for property checks: primitives are drawn (log-uniform rho and p,
uniform direction, |v| uniform) and pushed through the forward map.
"""
from typing import Tuple

import numpy as np

from app.physics.state_eos import prim_to_cons
from models.models import Eos

GAMMAS = (4.0 / 3.0, 5.0 / 3.0, 2.0)


def random_directions(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    if d == 1:
        return rng.choice([-1.0, 1.0], size=(n, 1))
    x = rng.normal(size=(n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def log_uniform(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))


def random_velocities(rng: np.random.Generator, n: int, d: int, vmax: float = 0.999) -> np.ndarray:
    return random_directions(rng, n, d) * rng.uniform(0.0, vmax, size=(n, 1))


def random_primitives(
    rng: np.random.Generator,
    n: int,
    d: int,
    rho_range: Tuple[float, float] = (1e-2, 1e2),
    p_range: Tuple[float, float] = (1e-2, 1e2),
    vmax: float = 0.999,
) -> np.ndarray:
    V = np.empty((n, d + 2))
    V[:, 0] = log_uniform(rng, n, *rho_range)
    V[:, 1:-1] = random_velocities(rng, n, d, vmax)
    V[:, -1] = log_uniform(rng, n, *p_range)
    return V


def random_states(rng: np.random.Generator, n: int, d: int, eos: Eos, **ranges) -> Tuple[np.ndarray, np.ndarray]:
    """Admissible conserved states and the primitives they came from."""
    V = random_primitives(rng, n, d, **ranges)
    return prim_to_cons(V, eos), V


def random_aux(
    rng: np.random.Generator, n: int, d: int, rho_range: Tuple[float, float] = (1e-3, 1e3), vmax: float = 0.999
) -> Tuple[np.ndarray, np.ndarray]:
    """Auxiliary points (v*, rho*) in the open unit ball times the positive axis."""
    return random_velocities(rng, n, d, vmax), log_uniform(rng, n, *rho_range)
