import argparse
import logging
import os
from typing import List, Optional, Sequence

import numpy as np

from app.cli.options import add_run_arguments, build_run_config, parse_cells
from app.cli.output import format_table, write_table
from app.config import Settings
from app.scenarios.scenarios import builtin
from app.solver.simulation import Simulation, average_errors, self_convergence_reference
from models.models import ConvergenceRow, RunConfig

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTIONS = {1: (40, 80, 160, 320), 2: (20, 40, 80)}


def observed_order(coarse_error: float, fine_error: float, coarse: int, fine: int) -> Optional[float]:
    if coarse_error <= 0 or fine_error <= 0:
        return None
    return float(np.log(coarse_error / fine_error) / np.log(fine / coarse))


def convergence_table(
    template: RunConfig, resolutions: Sequence[int], settings: Optional[Settings] = None
) -> List[ConvergenceRow]:
    """
    Density errors over a sequence of resolutions (same count on every axis). Scenarios
    without an exact solution are measured against a self-convergence reference.
    """
    scenario = builtin(template.scenario)
    rows: List[ConvergenceRow] = []
    for n in resolutions:
        config = template.model_copy(update={"cells": (n,) * scenario.dim})
        simulation = Simulation(config, settings)
        summary = simulation.run()
        if summary.l1_error is not None:
            l1, l2 = summary.l1_error, summary.l2_error
        else:
            reference = self_convergence_reference(config, settings=settings)
            l1, l2 = average_errors(simulation.solution, reference, simulation.eos)
        row = ConvergenceRow(cells=n, l1=l1, l2=l2)
        if rows:
            prev = rows[-1]
            row.l1_order = observed_order(prev.l1, l1, prev.cells, n)
            row.l2_order = observed_order(prev.l2, l2, prev.cells, n)
        logger.info(f"N={n}: l1={l1:.3e}, l2={l2:.3e}")
        rows.append(row)
    return rows


def handle(args: argparse.Namespace, settings: Settings) -> int:
    template = build_run_config(args, {"monitor": False})
    scenario = builtin(template.scenario)
    resolutions = args.resolutions or DEFAULT_RESOLUTIONS[scenario.dim]
    rows = convergence_table(template, resolutions, settings)
    print(format_table(rows))

    output_dir = template.output_dir or settings.output_dir
    stem = os.path.join(output_dir, f"{scenario.name}_k{template.degree}_{template.scheme}_convergence")
    text, data = write_table(stem, rows)
    logger.info(f"Convergence table written to {text} and {data}")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("converge", help="Tabla de convergencia sobre varias resoluciones")
    add_run_arguments(parser)
    parser.add_argument("--resolutions", type=parse_cells, help="Resoluciones, p. ej. 40,80,160,320")
    parser.set_defaults(handler=handle)
