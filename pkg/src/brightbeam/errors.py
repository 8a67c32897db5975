"""Exception hierarchy shared across the package."""


class BrightBeamError(Exception):
    """Base class for all package errors."""


class DomainError(BrightBeamError, ValueError):
    """An argument is outside its physically meaningful range."""


class DegenerateModeError(BrightBeamError):
    """A carrier is too weak for the linearized description.

    Raised when an operation needs a well-defined carrier-aligned frame or
    a non-zero shot-noise reference (dark interferometer ports, vacuum
    direct detection).
    """


class ScenarioError(BrightBeamError, ValueError):
    """A scenario file or scenario field failed validation."""
