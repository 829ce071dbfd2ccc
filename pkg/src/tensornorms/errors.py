"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in incompatible tensor spaces."""


class DegenerateInputError(ValueError):
    """Input is zero or otherwise degenerate for the requested operation."""


class PreconditionError(ValueError):
    """A documented precondition (unit length, orthogonality, ...) does not hold."""


class InapplicableError(ValueError):
    """The hypotheses of an inequality are not met; nothing can be concluded."""


class ResourceError(ValueError):
    """Requested construction exceeds the dense-storage caps."""


class ValidationError(ValueError):
    """A user-supplied structure (group table, certificate, file) is invalid."""
