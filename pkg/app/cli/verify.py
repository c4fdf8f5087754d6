import argparse
import json
import logging
import os

from app.cli.options import build_run_config
from app.config import Settings
from app.verify.properties import battery_names, run_battery

logger = logging.getLogger(__name__)

QUICK_SCALE = 0.01


def handle(args: argparse.Namespace, settings: Settings) -> int:
    scale = QUICK_SCALE if args.quick else args.scale
    seed = build_run_config(args).seed
    results = run_battery(seed=seed, scale=scale, only=args.only)
    if not results:
        print("Ninguna propiedad coincide con la selección")
        return 1
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.samples:>7} muestras  peor margen {r.worst: .3e}")
    failed = [r for r in results if not r.passed]

    if args.output:
        os.makedirs(os.path.dirname(args.output) or ".", exist_ok=True)
        with open(args.output, "w", encoding="utf-8") as f:
            json.dump([r.model_dump() for r in results], f, indent=2)
        logger.info(f"Battery results written to {args.output}")

    if failed:
        print(f"{len(failed)} de {len(results)} propiedades fallaron")
        return 2
    print(f"Las {len(results)} propiedades se cumplen")
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Batería de propiedades teóricas por muestreo")
    parser.add_argument("--config", help="Fichero de configuración; solo se usa su clave seed")
    parser.add_argument("--seed", type=int, help="Semilla aleatoria (por defecto la del fichero o 0)")
    parser.add_argument("--scale", type=float, default=1.0, help="Factor sobre el número de muestras")
    parser.add_argument("--quick", action="store_true", help="Ejecutar con el 1%% de las muestras")
    parser.add_argument("--only", action="append", choices=sorted(battery_names()), help="Limitar a una propiedad")
    parser.add_argument("--output", help="Fichero JSON con los resultados")
    parser.set_defaults(handler=handle)
