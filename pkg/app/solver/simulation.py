"""
Run orchestration: build the mesh and operator for a scenario, project the initial data,
march to the final time with limiting after every stage and step, and summarize.
"""
import logging
import time as clock
from typing import Callable, List, Optional, Tuple

import numpy as np

from app.config import Settings
from app.errors import ConfigError, NonConvergence
from app.physics.state_eos import recover
from app.scenarios.monitor import SminMonitor, error_norms
from app.scenarios.scenarios import builtin, scenario_floor
from app.solver.dg_core import DgOperator, max_stable_dt
from app.solver.limiter import check_averages, irp_limit, safe_entropy
from app.solver.time_stepper import advance, new_stepper
from models.models import DgSolution, Eos, InvariantRegion, LimiterConfig, Mesh, RunConfig, RunSummary, Scenario

logger = logging.getLogger(__name__)

VERDICT_SLACK = 1e-10
FLOOR_MARGIN_FACTOR = 64.0
PROGRESS_EVERY = 200

Observer = Callable[["Simulation", str], Optional[str]]


def floor_margin(U_floor: np.ndarray, eos: Eos) -> float:
    """Round-off bound of the recovered entropy at a state: 64 eps (gamma-1) E/p."""
    V, _ = recover(U_floor, eos)
    return FLOOR_MARGIN_FACTOR * np.finfo(float).eps * (eos.gamma - 1.0) * float(U_floor[-1] / V[-1])


def working_floor(s0: float, averages: np.ndarray, eos: Eos) -> Tuple[float, float]:
    """
    Floor enforced by the limiter: min(s0, min S of the projected averages) minus the
    round-off margin at the lowest-entropy average. Returns (floor, margin).
    """
    flat = averages.reshape(-1, averages.shape[-1])
    S = safe_entropy(flat, eos)
    j = int(np.argmin(S))
    margin = floor_margin(flat[j], eos)
    return min(s0, float(S[j])) - margin, margin


class Simulation:
    """One configured run of a built-in scenario."""

    def __init__(self, config: RunConfig, settings: Optional[Settings] = None):
        self.config = config
        self.settings = settings or Settings()
        self.scenario: Scenario = builtin(config.scenario)
        if self.scenario.optional and not config.include_optional:
            raise ConfigError(f"Scenario '{config.scenario}' is optional; set include_optional = true")
        self.eos = Eos(gamma=config.gamma if config.gamma is not None else self.scenario.gamma)

        cells = tuple(config.cells) if config.cells else self.scenario.cells
        if len(cells) != self.scenario.dim:
            raise ConfigError(
                f"Scenario '{self.scenario.name}' is {self.scenario.dim}D but {len(cells)} cell counts were given"
            )
        self.mesh = Mesh(extents=self.scenario.extents, counts=cells, boundary=dict(self.scenario.boundary))
        self.operator = DgOperator(self.mesh, config.degree, self.eos)
        self.t_final = config.t_final if config.t_final is not None else self.scenario.t_final

        self.s0 = scenario_floor(self.scenario, self.eos)
        self.solution = self.operator.project(self.scenario.initial)
        self.floor, self.margin = working_floor(self.s0, self.solution.averages(), self.eos)
        if self.margin > VERDICT_SLACK:
            logger.warning(f"Entropy floor relaxed by a round-off margin of {self.margin:.3e}")
        self.limiter_config = LimiterConfig(mode=config.limiter, s0=self.floor)
        self.region = InvariantRegion(sigma=self.floor, eos=self.eos)
        # Omega_sigma for the entropy modes, only G for bp/none
        self.region_sigma = self.floor if config.limiter in ("irp", "irp_qtilde") else -np.inf

        self.dt = self._time_step()
        self.stepper = new_stepper(config.scheme)
        self.monitor = SminMonitor(self.operator)
        self.snapshots: List[str] = []

    def _time_step(self) -> float:
        c = self.config
        if c.dt is not None:
            return c.dt
        if c.dt_coefficient is not None:
            return c.dt_coefficient * min(self.mesh.spacing) ** c.dt_exponent
        return max_stable_dt(self.mesh, c.degree, self.operator.alpha, c.cfl, c.scheme)

    def limit(self, coeffs: np.ndarray) -> np.ndarray:
        limited = irp_limit(
            self.solution.with_coeffs(coeffs), self.region, self.limiter_config, self.operator.B_limiter,
            threads=self.settings.threads,
        )
        return limited.coeffs

    def _check(self, coeffs: np.ndarray, time: float) -> None:
        check_averages(coeffs, self.region_sigma, self.eos, VERDICT_SLACK, time)

    def _targets(self) -> List[float]:
        times = [t for t in self.scenario.output_times if 0.0 < t < self.t_final]
        return sorted(times) + [self.t_final]

    def run(self, observer: Optional[Observer] = None) -> RunSummary:
        c = self.config
        logger.info(
            f"Running {self.scenario.name}: k={c.degree}, cells={self.mesh.counts}, scheme={c.scheme}, "
            f"limiter={c.limiter}, gamma={self.eos.gamma:.6g}, S0={self.s0:.12g}, dt={self.dt:.6g}"
        )
        started = clock.perf_counter()
        self.solution = self.solution.with_coeffs(self.limit(self.solution.coeffs))
        self.monitor.record(0.0, self.solution.coeffs)

        t = 0.0
        for target in self._targets():
            while target - t > 1e-12 * max(1.0, target):
                if self.stepper.steps >= c.max_steps:
                    raise NonConvergence(f"Step cap of {c.max_steps} reached at t={t:.6g}")
                dt = min(self.dt, target - t)
                self.solution = advance(
                    self.solution, dt, self.stepper, self.limit, self.operator.residual, self._check, limited=True
                )
                t = self.solution.time
                self.solution = self.solution.with_coeffs(self.limit(self.solution.coeffs))
                if c.monitor:
                    record = self.monitor.record(t, self.solution.coeffs)
                    if self.stepper.steps % PROGRESS_EVERY == 0:
                        logger.info(
                            f"step {self.stepper.steps}: t={t:.6g}, S_min points={record.s_min_points:.12g}"
                        )
                if observer and c.snapshot_interval and self.stepper.steps % c.snapshot_interval == 0:
                    self._observe(observer, "step")
            # snap onto the target so output times are exact
            self.solution = self.solution.with_coeffs(self.solution.coeffs, time=target)
            t = target
            if observer:
                self._observe(observer, "output")

        wall = clock.perf_counter() - started
        summary = self.summary(wall)
        logger.info(f"Finished {self.scenario.name} in {self.stepper.steps} steps, {wall:.2f} s")
        return summary

    def _observe(self, observer: Observer, reason: str) -> None:
        path = observer(self, reason)
        if path:
            self.snapshots.append(path)

    def summary(self, wall_time: float = 0.0) -> RunSummary:
        series = self.monitor.as_array()
        l1 = l2 = None
        if self.scenario.exact is not None:
            l1, l2 = error_norms(self.solution, self.operator, self.scenario.exact)
        s_min = float(series[:, 1:].min()) if len(series) else float("nan")
        verdict = bool(s_min >= self.floor - VERDICT_SLACK) if len(series) else True
        return RunSummary(
            scenario=self.scenario.name,
            degree=self.config.degree,
            cells=self.mesh.counts,
            scheme=self.config.scheme,
            limiter=self.config.limiter,
            gamma=self.eos.gamma,
            t_final=self.solution.time,
            steps=self.stepper.steps,
            wall_time=wall_time,
            s0=self.s0,
            s_min_points=float(series[:, 1].min()) if len(series) else None,
            s_max_points=float(series[:, 1].max()) if len(series) else None,
            s_min_averages=float(series[:, 2].min()) if len(series) else None,
            s_max_averages=float(series[:, 2].max()) if len(series) else None,
            entropy_excursion=max(0.0, self.s0 - s_min) if len(series) else 0.0,
            l1_error=l1,
            l2_error=l2,
            irp_verdict=verdict,
            snapshots=list(self.snapshots),
        )


def run(config: RunConfig, settings: Optional[Settings] = None, observer: Optional[Observer] = None) -> RunSummary:
    """Execute one run and return its summary."""
    return Simulation(config, settings).run(observer)


def block_average(averages: np.ndarray, factor: int) -> np.ndarray:
    """Average groups of ``factor`` cells per axis: (*fine, ncomp) -> (*fine/factor, ncomp)."""
    dim = averages.ndim - 1
    shape: Tuple[int, ...] = ()
    for n in averages.shape[:-1]:
        shape += (n // factor, factor)
    out = averages.reshape(shape + averages.shape[-1:])
    return out.mean(axis=tuple(2 * a + 1 for a in range(dim)))


def self_convergence_reference(
    config: RunConfig, factor: int = 20, settings: Optional[Settings] = None
) -> np.ndarray:
    """
    Reference cell averages on the mesh of ``config``: a first-order forward-Euler run on
    a mesh ``factor`` times finer per axis, block-averaged back down.
    """
    scenario = builtin(config.scenario)
    cells = tuple(config.cells) if config.cells else scenario.cells
    fine = config.model_copy(
        update={
            "degree": 0,
            "cells": tuple(n * factor for n in cells),
            "scheme": "fe",
            "limiter": "none",
            "monitor": False,
            "cfl": None,
            "dt": None,
            "dt_coefficient": None,
            "dt_exponent": None,
        }
    )
    simulation = Simulation(fine, settings)
    logger.info(f"Building a self-convergence reference on {simulation.mesh.counts} cells")
    simulation.run()
    return block_average(simulation.solution.averages(), factor)


def average_errors(solution: DgSolution, reference: np.ndarray, eos: Eos) -> Tuple[float, float]:
    """l1 and l2 (domain averaged) differences of rest-mass density between cell averages."""
    rho = recover(solution.averages(), eos)[0][..., 0]
    rho_ref = recover(reference, eos)[0][..., 0]
    error = np.abs(rho - rho_ref)
    return float(np.mean(error)), float(np.sqrt(np.mean(error**2)))
