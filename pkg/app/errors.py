from typing import Optional


class SolverError(Exception):
    """Base exception for solver failures; carries the process exit code."""
    exit_code = 1

    def __init__(self, message: str, exit_code: Optional[int] = None):
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code
        super().__init__(self.message)


class ConfigError(SolverError):
    """Invalid configuration file, flag or environment variable."""
    exit_code = 1


class UnknownScenario(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown scenario '{name}'")


class DomainError(SolverError):
    """Input outside the domain of a physical map (|v| >= 1, rho <= 0, p <= 0, ...)."""
    exit_code = 1


class FanError(SolverError):
    """Normal fan of a polytope does not close: sum of s_j xi_j != 0."""
    exit_code = 1


class RecoveryError(SolverError):
    """Conserved-to-primitive recovery failed, which signals an inadmissible state."""
    exit_code = 3

    def __init__(self, message: str, cell: Optional[tuple] = None):
        self.reason = message
        self.cell = cell
        if cell is not None:
            message = f"{message} (cell {cell})"
        super().__init__(message)


class NonConvergence(SolverError):
    """An iterative scalar solver hit its iteration cap."""
    exit_code = 3


class InvalidAverage(SolverError):
    """A cell average handed to the limiter is outside the invariant region."""
    exit_code = 2

    def __init__(self, cell: tuple, quantity: str, value: float):
        self.cell = cell
        self.quantity = quantity
        self.value = value
        super().__init__(f"Invalid cell average in cell {cell}: {quantity} = {value!r}")


class IrpViolation(SolverError):
    """A post-step cell average left the invariant region beyond the allowed slack."""
    exit_code = 2

    def __init__(self, cell: tuple, quantity: str, value: float, time: Optional[float] = None):
        self.cell = cell
        self.quantity = quantity
        self.value = value
        self.time = time
        where = f" at t={time:.6g}" if time is not None else ""
        super().__init__(f"Invariant region violated in cell {cell}{where}: {quantity} = {value!r}")
