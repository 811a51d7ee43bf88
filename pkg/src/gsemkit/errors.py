"""Exception types shared across the package."""

import os

_MAX_ENUM_DEFAULT = 2**20


def max_enum() -> int:
    """Global cap on enumeration sizes, overridable via GSEMKIT_MAX_ENUM."""
    raw = os.environ.get("GSEMKIT_MAX_ENUM")
    if raw is None:
        return _MAX_ENUM_DEFAULT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"GSEMKIT_MAX_ENUM must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("GSEMKIT_MAX_ENUM must be positive")
    return value


class GsemError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GsemError):
    """A model or value violates a construction invariant."""


class SignatureMismatch(GsemError):
    """Two models were compared but do not share a signature."""


class NotAllowed(GsemError):
    """An intervention outside the signature's allowed set was used."""


class UnboundVariable(GsemError):
    """A formula mentions a variable the assignment does not bind."""


class TooLarge(GsemError):
    """An exhaustive enumeration would exceed the configured size cap."""


class NotUniversal(GsemError):
    """An operation requires the universal allowed-intervention set."""


class AxiomsFail(GsemError):
    """A required axiom does not hold; carries the failing axiom name."""

    def __init__(self, axiom: str, message: str = ""):
        self.axiom = axiom
        super().__init__(message or f"axiom {axiom} does not hold")


class SearchSpaceTooLarge(GsemError):
    """An actual-cause search would exceed the configured bounds."""


class OutOfHorizon(GsemError):
    """A time coordinate lies outside a trajectory's [0, T] window."""


class IntegratorFailure(GsemError):
    """The numeric integrator could not produce a solution segment."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class Stuck(GsemError):
    """A hybrid run hit an invariant violation with no enabled jump."""


class UnknownEvent(GsemError):
    """A trace query referenced an event that is not in the schedule."""
