"""Exception hierarchy shared by every allocation module.

Each category base carries the command-line exit code that the harness maps
it to, so callers never need a lookup table.
"""

from __future__ import annotations

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_DOMAIN_ERROR = 3


class AllocationError(Exception):
    exit_code = EXIT_INPUT_ERROR


class InputError(AllocationError):
    exit_code = EXIT_INPUT_ERROR


class DomainError(AllocationError):
    exit_code = EXIT_DOMAIN_ERROR


class ParseError(InputError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class NonPositiveDemand(InputError):
    pass


class EmptyInstance(InputError):
    pass


class ConfigError(InputError):
    pass


class BadAlpha(InputError):
    pass


class BadParams(InputError):
    pass


class TooSmall(InputError):
    pass


class TraceIoError(InputError):
    pass


class EmptyPool(InputError):
    pass


class WrongArity(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class NotNonWasteful(DomainError):
    pass


class NonMonotoneScore(DomainError):
    pass


class LPError(AllocationError):
    exit_code = EXIT_DOMAIN_ERROR


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


class DimensionMismatch(LPError):
    pass


class OracleError(AllocationError):
    exit_code = EXIT_DOMAIN_ERROR


class DegenerateDenominator(AllocationError):
    exit_code = EXIT_DOMAIN_ERROR


class ManipulationProbeError(AllocationError):
    """A mechanism failed on one of the substituted reports."""

    def __init__(self, agent: int, grid_vector: tuple[float, ...], cause: Exception) -> None:
        self.agent = agent
        self.grid_vector = grid_vector
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", EXIT_DOMAIN_ERROR)
        super().__init__(f"agent {agent} reporting {grid_vector}: {cause}")
