"""
Built-in benchmark problems: smooth waves with exact solutions, 1D and 2D Riemann
problems, the shock-bubble interaction and two relativistic jets.
"""
import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.errors import UnknownScenario
from app.physics.invariant_region import entropy_from_prim
from app.solver.quadrature import gauss, gauss_lobatto
from models.models import BoundaryCondition, Eos, Scenario

logger = logging.getLogger(__name__)

PERIODIC = BoundaryCondition(kind="periodic")
OUTFLOW = BoundaryCondition(kind="outflow")
REFLECTIVE = BoundaryCondition(kind="reflective")


def _stack(*fields) -> np.ndarray:
    arrays = np.broadcast_arrays(*[np.asarray(f, dtype=float) for f in fields])
    return np.stack(arrays, axis=-1)


def _select(masks: Sequence[np.ndarray], states: Sequence[Tuple[float, ...]]) -> np.ndarray:
    """Piecewise-constant primitive field; the last state fills whatever no mask claims."""
    shape = np.shape(masks[0])
    out = np.broadcast_to(np.asarray(states[-1], dtype=float), shape + (len(states[-1]),)).copy()
    for mask, state in reversed(list(zip(masks, states[:-1]))):
        out[mask] = state
    return out


# smooth waves

def _smooth1d() -> Scenario:
    def initial(x):
        return _stack(1.0 + 0.99999 * np.sin(2.0 * np.pi * x), 0.9, 1.0)

    def exact(x, t):
        return initial(x - 0.9 * t)

    return Scenario(
        name="smooth1d",
        extents=((0.0, 1.0),),
        cells=(40,),
        boundary={"left": PERIODIC, "right": PERIODIC},
        t_final=0.2,
        initial=initial,
        exact=exact,
        description="Onda sinusoidal de densidad con v = 0.9 y p = 1",
    )


def _smooth2d() -> Scenario:
    speed = 0.99 / np.sqrt(2.0)

    def initial(x, y):
        return _stack(1.0 + 0.99999 * np.sin(2.0 * np.pi * (x + y)), speed, speed, 1e-2)

    def exact(x, y, t):
        return initial(x - speed * t, y - speed * t)

    return Scenario(
        name="smooth2d",
        extents=((0.0, 1.0), (0.0, 1.0)),
        cells=(40, 40),
        boundary={side: PERIODIC for side in ("left", "right", "bottom", "top")},
        t_final=0.2,
        initial=initial,
        exact=exact,
        description="Onda sinusoidal bidimensional a lo largo de x + y",
    )


# 1D Riemann problems

def _riemann1d(name: str, left, right, t_final: float, cells: int, description: str) -> Scenario:
    def initial(x):
        return _select([x < 0.5], [left, right])

    return Scenario(
        name=name,
        extents=((0.0, 1.0),),
        cells=(cells,),
        boundary={"left": OUTFLOW, "right": OUTFLOW},
        t_final=t_final,
        initial=initial,
        states=[left, right],
        description=description,
    )


# 2D problems

def _quadrants(name: str, ne, nw, sw, se, description: str) -> Scenario:
    def initial(x, y):
        east, north = x > 0, y > 0
        return _select([east & north, ~east & north, ~east & ~north], [ne, nw, sw, se])

    return Scenario(
        name=name,
        extents=((-1.0, 1.0), (-1.0, 1.0)),
        cells=(100, 100),
        boundary={side: OUTFLOW for side in ("left", "right", "bottom", "top")},
        t_final=0.8,
        initial=initial,
        states=[ne, nw, sw, se],
        description=description,
    )


def _shock_bubble() -> Scenario:
    pre = (1.0, 0.0, 0.0, 0.05)
    post = (1.865225080631180, -0.196781107378299, 0.0, 0.15)
    bubble = (0.1358, 0.0, 0.0, 0.05)

    def initial(x, y):
        inside = (x - 215.0) ** 2 + y**2 <= 25.0**2
        return _select([inside, x > 265.0], [bubble, post, pre])

    return Scenario(
        name="shock_bubble",
        extents=((0.0, 325.0), (-45.0, 45.0)),
        cells=(650, 180),
        boundary={
            "left": OUTFLOW,
            "right": BoundaryCondition(kind="inflow", state=post),
            "bottom": REFLECTIVE,
            "top": REFLECTIVE,
        },
        t_final=450.0,
        initial=initial,
        states=[bubble, post, pre],
        output_times=[90.0, 180.0, 270.0, 360.0, 450.0],
        description="Choque plano que incide sobre una burbuja ligera",
    )


def matched_jet_pressure(rho: float, speed: float, mach: float, gamma: float) -> float:
    """Pressure whose sound speed sqrt(gamma p/(rho h)) equals speed/mach."""
    cs2 = (speed / mach) ** 2
    return (gamma - 1.0) * rho * cs2 / (gamma * (gamma - 1.0 - cs2))


def _jet(name: str, gamma: float, rho_b: float, mach: float, height: float, cells, t_final: float) -> Scenario:
    speed = 0.99
    p = matched_jet_pressure(rho_b, speed, mach, gamma)
    beam = (rho_b, 0.0, speed, p)
    ambient = (1.0, 0.0, 0.0, p)

    def initial(x, y):
        return _select([np.zeros(np.broadcast(x, y).shape, dtype=bool)], [beam, ambient])

    return Scenario(
        name=name,
        extents=((0.0, 12.0), (0.0, height)),
        cells=cells,
        boundary={
            "left": REFLECTIVE,
            "right": OUTFLOW,
            "bottom": BoundaryCondition(kind="inflow", state=beam, window=(0.0, 0.5), fallback="outflow"),
            "top": OUTFLOW,
        },
        gamma=gamma,
        t_final=t_final,
        initial=initial,
        states=[ambient],
        output_times=[t_final / 3.0, 2.0 * t_final / 3.0, t_final],
        optional=True,
        description="Chorro relativista inyectado por una tobera en y = 0",
    )


BUILTIN: Dict[str, Callable[[], Scenario]] = {
    "smooth1d": _smooth1d,
    "riemann1d_1": lambda: _riemann1d(
        "riemann1d_1", (0.8, 0.5, 8.0), (1.0, 0.0, 1.0), 0.4, 320, "Primer problema de Riemann 1D"
    ),
    "riemann1d_2": lambda: _riemann1d(
        "riemann1d_2", (1.0, 0.0, 1e4), (1.0, 0.0, 1e-8), 0.45, 400, "Problema de Riemann ultrarrelativista"
    ),
    "smooth2d": _smooth2d,
    "shock_bubble": _shock_bubble,
    "rp2d_1": lambda: _quadrants(
        "rp2d_1",
        (0.1, 0.0, 0.0, 20.0),
        (0.00414329639576, 0.9946418833556542, 0.0, 0.05),
        (0.01, 0.0, 0.0, 0.05),
        (0.00414329639576, 0.0, 0.9946418833556542, 0.05),
        "Primer problema de Riemann 2D de cuatro cuadrantes",
    ),
    "rp2d_2": lambda: _quadrants(
        "rp2d_2",
        (0.035145216124503, 0.0, 0.0, 0.162931056509027),
        (0.1, 0.7, 0.0, 1.0),
        (0.5, 0.0, 0.0, 1.0),
        (0.1, 0.0, 0.7, 1.0),
        "Segundo problema de Riemann 2D de cuatro cuadrantes",
    ),
    # a quarter of the 240x500 and 240x600 resolutions
    "jet_cold": lambda: _jet("jet_cold", 5.0 / 3.0, 0.1, 50.0, 25.0, (60, 125), 30.0),
    "jet_hot": lambda: _jet("jet_hot", 4.0 / 3.0, 0.01, 1.72, 30.0, (60, 150), 33.0),
}


def builtin(name: str) -> Scenario:
    """Look up a built-in scenario by name."""
    if name not in BUILTIN:
        raise UnknownScenario(name)
    return BUILTIN[name]()


def scenario_names(include_optional: bool = True) -> List[str]:
    return [name for name, make in BUILTIN.items() if include_optional or not make().optional]


def sample_points(extents, resolution: int, order: int = 6) -> Tuple[np.ndarray, ...]:
    """Gauss and Gauss-Lobatto points of a uniform sampling mesh, per axis, as a grid."""
    nodes = np.concatenate([gauss_lobatto(order)[0], gauss(order)[0]])
    axes = []
    for lo, hi in extents:
        h = (hi - lo) / resolution
        centers = lo + (np.arange(resolution) + 0.5) * h
        axes.append(np.unique((centers[:, None] + 0.5 * h * nodes).ravel()))
    return tuple(np.meshgrid(*axes, indexing="ij"))


def entropy_floor(
    initial: Callable[..., np.ndarray],
    extents,
    eos: Eos,
    resolution: int = 1000,
    states: Optional[Sequence[Tuple[float, ...]]] = None,
) -> float:
    """
    Infimum of the initial specific entropy: exact over the constant states of piecewise
    data, otherwise the minimum over a dense point sample.
    """
    if states:
        return float(np.min(entropy_from_prim(np.asarray(states, dtype=float), eos)))
    if len(extents) > 1:
        V = initial(*sample_points(extents, min(resolution, 100), order=4))
    else:
        V = initial(*sample_points(extents, resolution))
    return float(np.min(entropy_from_prim(V, eos)))


def scenario_floor(scenario: Scenario, eos: Optional[Eos] = None, resolution: int = 1000) -> float:
    eos = eos or Eos(gamma=scenario.gamma)
    return entropy_floor(scenario.initial, scenario.extents, eos, resolution, scenario.states)


def sample_admissible(scenario: Scenario, n: int, rng: np.random.Generator) -> np.ndarray:
    """Initial primitives at n random points of the domain."""
    coords = [rng.uniform(lo, hi, size=n) for lo, hi in scenario.extents]
    return scenario.initial(*coords)
