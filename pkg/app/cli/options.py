"""Run configuration from a `key = value` file and command-line flags."""
import argparse
import logging
import os
import re
from typing import Any, Dict, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from app.errors import ConfigError
from models.models import RunConfig

logger = logging.getLogger(__name__)

_LIST_SPLIT = re.compile(r"[,x\s]+")


def parse_cells(value: str):
    """'40' -> (40,), '100x100' or '100,100' -> (100, 100)."""
    try:
        return tuple(int(v) for v in _LIST_SPLIT.split(value.strip()) if v)
    except ValueError:
        raise ConfigError(f"Invalid cell counts '{value}'")


def load_run_file(path: str) -> Dict[str, Any]:
    """
    Read a run file: one `key = value` per line, `#` comments (`# [section]` headers are
    decorative). Keys must be RunConfig fields.
    """
    if not os.path.isfile(path):
        raise ConfigError(f"Run file not found: {path}")
    # dotenv only warns about lines it cannot parse
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            text = line.strip()
            if text and not text.startswith("#") and "=" not in text:
                raise ConfigError(f"Malformed line {number} in {path}: '{text}'")
    raw = dotenv_values(path)
    unknown = sorted(set(raw) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"Unknown keys in {path}: {', '.join(unknown)}")
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if value is None or value.strip() == "":
            continue
        values[key] = parse_cells(value) if key == "cells" else value.strip()
    logger.debug(f"Run file {path}: {values}")
    return values


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags mirroring the RunConfig fields; unset flags keep file or default values."""
    parser.add_argument("--config", help="Fichero de configuración con líneas clave = valor")
    parser.add_argument("--scenario", help="Escenario incorporado")
    parser.add_argument("--degree", "-k", type=int, help="Grado polinómico k (0-3)")
    parser.add_argument("--cells", type=parse_cells, help="Celdas por eje, p. ej. 320 o 100x100")
    parser.add_argument("--cfl", type=float, help="Número CFL práctico")
    parser.add_argument("--dt", type=float, help="Paso de tiempo fijo")
    parser.add_argument("--dt-coefficient", type=float, help="Coeficiente c de la ley dt = c*dx^e")
    parser.add_argument("--dt-exponent", type=float, help="Exponente e de la ley dt = c*dx^e")
    parser.add_argument("--t-final", type=float, help="Instante final")
    parser.add_argument("--limiter", choices=["none", "bp", "irp", "irp_qtilde"], help="Modo del limitador")
    parser.add_argument("--scheme", choices=["fe", "ssprk3", "sspms3"], help="Integrador temporal")
    parser.add_argument("--gamma", type=float, help="Índice adiabático")
    parser.add_argument("--output-dir", help="Directorio de salida")
    parser.add_argument("--snapshot-interval", type=int, help="Pasos entre instantáneas")
    parser.add_argument("--no-monitor", dest="monitor", action="store_false", default=None,
                        help="No registrar la serie S_min(t)")
    parser.add_argument("--include-optional", action="store_true", default=None,
                        help="Permitir escenarios opcionales")
    parser.add_argument("--max-steps", type=int, help="Límite de pasos")


def build_run_config(args: argparse.Namespace, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Defaults < run file < flags < explicit overrides."""
    values: Dict[str, Any] = load_run_file(args.config) if getattr(args, "config", None) else {}
    for field in RunConfig.model_fields:
        flag = getattr(args, field, None)
        if flag is not None:
            values[field] = flag
    values.update(overrides or {})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e}")
