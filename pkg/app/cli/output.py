"""
Plain-text outputs: per-cell snapshots with a metadata header, the S_min(t) series,
run summaries and convergence tables.
"""
import json
import logging
import os
import subprocess
from typing import Dict, List, Tuple

import numpy as np

from app.physics.invariant_region import entropy_from_prim
from app.physics.state_eos import recover
from models.models import ConvergenceRow, DgSolution, Eos, Mesh, RunSummary

logger = logging.getLogger(__name__)

FORMAT = "%.17g"
AXES = ("x", "y")


def git_revision() -> str:
    try:
        result = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"], capture_output=True, text=True, timeout=5, check=True
        )
        return result.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def snapshot_columns(dim: int) -> List[str]:
    velocity = [f"v{a}" for a in AXES[:dim]]
    momentum = [f"m{a}" for a in AXES[:dim]]
    return list(AXES[:dim]) + ["D", *momentum, "E", "rho", *velocity, "p", "S"]


def snapshot_table(solution: DgSolution, mesh: Mesh, eos: Eos) -> np.ndarray:
    """One row per cell (C order): centre coordinates, averages, recovered primitives and S."""
    U = solution.averages().reshape(-1, mesh.dim + 2)
    V, _ = recover(U, eos)
    centers = np.meshgrid(*[mesh.centers(a) for a in range(mesh.dim)], indexing="ij")
    coords = np.stack([c.ravel() for c in centers], axis=1)
    return np.column_stack([coords, U, V, entropy_from_prim(V, eos)])


def write_snapshot(
    path: str, solution: DgSolution, mesh: Mesh, eos: Eos, scheme: str, limiter: str
) -> str:
    meta = {
        "k": solution.degree,
        "N": "x".join(str(n) for n in mesh.counts),
        "t": repr(float(solution.time)),
        "gamma": repr(eos.gamma),
        "scheme": scheme,
        "limiter": limiter,
        "revision": git_revision(),
    }
    header = "\n".join(f"{key} = {value}" for key, value in meta.items())
    header += "\n" + " ".join(snapshot_columns(mesh.dim))
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    np.savetxt(path, snapshot_table(solution, mesh, eos), fmt=FORMAT, header=header)
    logger.info(f"Snapshot written to {path}")
    return path


def read_snapshot(path: str) -> Tuple[Dict[str, str], List[str], np.ndarray]:
    """Header metadata, column names and the table of a snapshot file."""
    meta: Dict[str, str] = {}
    columns: List[str] = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            text = line[1:].strip()
            if "=" in text:
                key, value = text.split("=", 1)
                meta[key.strip()] = value.strip()
            else:
                columns = text.split()
    table = np.loadtxt(path, comments="#", ndmin=2)
    return meta, columns, table


def snapshot_averages(table: np.ndarray, counts: Tuple[int, ...]) -> np.ndarray:
    """Cell averages (*counts, ncomp) back from a snapshot table."""
    dim = len(counts)
    return table[:, dim : 2 * dim + 2].reshape(tuple(counts) + (dim + 2,))


def write_series(path: str, series: np.ndarray) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    np.savetxt(path, series, fmt=FORMAT, header="t S_min_points S_min_averages")
    return path


def write_summary(path: str, summary: RunSummary) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(summary.model_dump_json(indent=2))
    return path


def format_table(rows: List[ConvergenceRow]) -> str:
    def order(value):
        return "    -" if value is None else f"{value:5.2f}"

    lines = [f"{'N':>6} {'l1 error':>12} {'order':>5} {'l2 error':>12} {'order':>5}"]
    for row in rows:
        lines.append(f"{row.cells:>6} {row.l1:12.3e} {order(row.l1_order)} {row.l2:12.3e} {order(row.l2_order)}")
    return "\n".join(lines)


def write_table(stem: str, rows: List[ConvergenceRow]) -> Tuple[str, str]:
    """Text and JSON versions of a convergence table."""
    os.makedirs(os.path.dirname(stem) or ".", exist_ok=True)
    with open(stem + ".txt", "w", encoding="utf-8") as f:
        f.write(format_table(rows) + "\n")
    with open(stem + ".json", "w", encoding="utf-8") as f:
        json.dump([row.model_dump() for row in rows], f, indent=2)
    return stem + ".txt", stem + ".json"
