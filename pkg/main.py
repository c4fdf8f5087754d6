import logging
import sys
import traceback
from typing import List, Optional

from pydantic import ValidationError

from app.cli.router import build_parser
from app.config import get_settings
from app.errors import ConfigError, SolverError

logger = logging.getLogger(__name__)


def configure_logging(level_name: str) -> None:
    level = logging.getLevelName(level_name.upper())
    if not isinstance(level, int):
        raise ConfigError(f"Unknown log level '{level_name}'")
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = get_settings()
        configure_logging(args.log_level or settings.log_level)
        return args.handler(args, settings)
    except SolverError as e:
        logger.error(e.message)
        logger.debug(traceback.format_exc())
        print(f"Error: {e.message}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        print(f"Error de configuración: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
