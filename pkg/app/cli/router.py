import argparse

from app.cli import converge, run, verify
from app.errors import ConfigError

COMMANDS = (run, converge, verify)


class CommandParser(argparse.ArgumentParser):
    """Usage errors become ConfigError (exit 1); subcommand parsers inherit the class."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CommandParser(
        prog="irp-rhd",
        description="Solver DG de hidrodinámica relativista que preserva la región invariante",
    )
    parser.add_argument("--log-level", help="Nivel de registro (por defecto IRP_RHD_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    # each command module registers its own parser and handler
    for command in COMMANDS:
        command.register(subparsers)
    return parser
