"""Exception types raised by the library."""


class ActiveSearchError(Exception):
    """Base class for all library errors."""


class NonPositiveConfidence(ActiveSearchError):
    """A sensing confidence was <= 0 (would imply infinite noise variance)."""


class NumericalFailure(ActiveSearchError):
    """A linear-algebra step failed even after jitter escalation."""


class OutOfBounds(ActiveSearchError):
    """A point or cell index lies outside the grid."""


class InvalidCell(ActiveSearchError):
    """A message referenced a cell index outside the grid."""


class DegenerateZone(ActiveSearchError):
    """The search polygon is too small or malformed to contain a cell."""


class NoCandidates(ActiveSearchError):
    """The zone yields no candidate goal cells."""


class NonPositiveHorizon(ActiveSearchError):
    """A trajectory horizon T <= 0 was requested."""


class OutOfHorizon(ActiveSearchError):
    """A trajectory was evaluated outside [0, T]."""


class Unreachable(ActiveSearchError):
    """Boundary conditions violate kinematic limits at the endpoints."""


class ConfigError(ActiveSearchError):
    """A scenario configuration failed validation."""
