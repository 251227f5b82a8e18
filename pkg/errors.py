"""Exception hierarchy shared by every PhotoMC package.

Each family maps onto one CLI exit code (see ``runner.cli``).
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from scenario.validation import Violation


class PhotoMCError(Exception):
    """Base class for all PhotoMC errors."""


class DomainError(PhotoMCError, ValueError):
    """An argument lies outside the domain of an operation.

    Attributes:
        parameter: Name of the offending parameter.
    """

    def __init__(self, parameter: str, message: str) -> None:
        super().__init__(f"{parameter}: {message}")
        self.parameter = parameter


class UndefinedMetricError(DomainError):
    """A metric is undefined for the given input (e.g. ITR with no arrivals)."""


class ConfigParseError(PhotoMCError, ValueError):
    """A scenario file could not be parsed.

    Attributes:
        line: 1-based line number in the source file, if known.
        field: Dotted field path, if known.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None) -> None:
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.field = field


class ConfigInvalidError(PhotoMCError, ValueError):
    """A parsed scenario violates one or more invariants."""

    def __init__(self, violations: list[Violation]) -> None:
        lines = "\n".join(f"  - {v}" for v in violations)
        super().__init__(f"{len(violations)} configuration violation(s):\n{lines}")
        self.violations = violations


class BudgetExceededError(PhotoMCError, RuntimeError):
    """The requested run exceeds the particle-step budget.

    Attributes:
        parameter: The parameter that drives the cost.
        cost: Requested particle-steps.
        ceiling: Configured ceiling.
    """

    def __init__(self, parameter: str, cost: float, ceiling: float) -> None:
        super().__init__(
            f"particle-step budget exceeded: {cost:.3g} > {ceiling:.3g} "
            f"(reduce '{parameter}' or raise MAX_PARTICLE_STEPS)"
        )
        self.parameter = parameter
        self.cost = cost
        self.ceiling = ceiling


class OutputError(PhotoMCError, OSError):
    """Writing or reading a run artifact failed."""
