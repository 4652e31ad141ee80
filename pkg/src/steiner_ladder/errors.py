"""Exception types shared across the package."""


class DegenerateInputError(ValueError):
    """Geometric input is degenerate (coincident points, zero-length data)."""


class ParameterError(ValueError):
    """Parameters lie outside the admissible domain of an operation."""


class ForbiddenPointError(ValueError):
    """An interval-map evaluation hit a discontinuity or boundary point."""


class EscapeError(ValueError):
    """A forward interval-map step left the unit interval."""
