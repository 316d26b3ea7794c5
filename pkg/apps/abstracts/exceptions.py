# Python modules
from typing import Any, Optional

# Django modules
from django.core.exceptions import ValidationError


class LabError(Exception):
    """Root of every error raised by the lab."""

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details: dict[str, Any] = details or {}

    def __str__(self) -> str:
        """Magic str method."""
        if not self.details:
            return self.message
        extra: str = ", ".join(f"{k}={v}" for k, v in sorted(self.details.items()))
        return f"{self.message} ({extra})"


class SpecValidationError(LabError, ValidationError):
    """An invalid model spec reached an operation that needs a valid one."""

    def __init__(self, violations: list[str]) -> None:
        LabError.__init__(
            self,
            "Model spec is invalid: " + "; ".join(violations),
            {"violations": len(violations)},
        )
        ValidationError.__init__(self, list(violations))
        self.violations: list[str] = list(violations)

    def __str__(self) -> str:
        """Magic str method."""
        return LabError.__str__(self)


class SizeCapError(LabError, ValueError):
    """Requested object is larger than the configured cap."""

    def __init__(self, what: str, size: int, cap: int) -> None:
        super().__init__(
            f"{what} has {size} entries, above the cap of {cap}",
            {"size": size, "cap": cap},
        )
        self.size = size
        self.cap = cap


class DomainError(LabError, ValueError):
    """Argument outside the domain of an operation."""


class InconsistencyError(DomainError):
    """Inputs contradict each other (e.g. r1 above min V)."""


class ConvergenceError(LabError, ArithmeticError):
    """Iterative method ran out of budget."""

    def __init__(self, message: str, iterations: int, residual: float) -> None:
        super().__init__(message, {"iterations": iterations, "residual": residual})
        self.iterations = iterations
        self.residual = residual


class DegenerateFitError(LabError, ValueError):
    """Least-squares system is rank deficient."""


class StructureViolation(LabError):
    """Profile breaks the viscosity structure."""

    def __init__(self, failures: list[Any]) -> None:
        super().__init__(
            f"{len(failures)} viscosity structure violation(s)",
            {"first": failures[0] if failures else None},
        )
        self.failures = list(failures)


class CheckFailure(LabError):
    """One or more checks of a validation run failed."""

    def __init__(self, failed: list[str]) -> None:
        super().__init__(f"{len(failed)} check(s) failed: " + ", ".join(failed), {"failed": len(failed)})
        self.failed = list(failed)
