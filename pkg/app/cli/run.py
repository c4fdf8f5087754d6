import argparse
import logging
import os

from app.cli.options import add_run_arguments, build_run_config
from app.cli.output import write_series, write_snapshot, write_summary
from app.config import Settings
from app.errors import IrpViolation
from app.solver.simulation import Simulation

logger = logging.getLogger(__name__)


def output_stem(simulation: Simulation, output_dir: str) -> str:
    c = simulation.config
    cells = "x".join(str(n) for n in simulation.mesh.counts)
    return os.path.join(output_dir, f"{simulation.scenario.name}_k{c.degree}_{cells}_{c.scheme}_{c.limiter}")


def snapshot_writer(output_dir: str):
    """Observer that writes one snapshot file per call."""

    def write(simulation: Simulation, reason: str) -> str:
        path = f"{output_stem(simulation, output_dir)}_t{simulation.solution.time:.6g}.dat"
        return write_snapshot(
            path, simulation.solution, simulation.mesh, simulation.eos,
            simulation.config.scheme, simulation.config.limiter,
        )

    return write


def handle(args: argparse.Namespace, settings: Settings) -> int:
    config = build_run_config(args)
    output_dir = config.output_dir or settings.output_dir
    simulation = Simulation(config, settings)
    summary = simulation.run(snapshot_writer(output_dir))

    stem = output_stem(simulation, output_dir)
    if config.monitor:
        write_series(stem + "_smin.dat", simulation.monitor.as_array())
    write_summary(stem + "_summary.json", summary)
    logger.info(f"Summary written to {stem}_summary.json")

    print(f"Escenario {summary.scenario}: {summary.steps} pasos hasta t = {summary.t_final:.6g}")
    if summary.l1_error is not None:
        print(f"Error l1 = {summary.l1_error:.3e}, error l2 = {summary.l2_error:.3e}")
    if summary.s_min_points is not None:
        s_min = min(summary.s_min_points, summary.s_min_averages)
        print(f"S0 = {summary.s0:.12g}, mínimo de S = {s_min:.12g}")
    print(f"Región invariante preservada: {'sí' if summary.irp_verdict else 'no'}")
    # bp and none bound positivity only; S_min below the floor is expected there
    if not summary.irp_verdict and config.limiter in ("irp", "irp_qtilde"):
        logger.error(f"S_min fell below the working floor {simulation.floor:.12g}")
        return IrpViolation.exit_code
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="Ejecutar un escenario")
    add_run_arguments(parser)
    parser.set_defaults(handler=handle)
