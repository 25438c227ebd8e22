"""Exception types shared across the package."""


class ScalarKindError(TypeError):
    """Exact (dyadic) and approximate (float) values were mixed."""


class DimensionError(ValueError):
    """Operands live in different ambient dimensions."""


class SupportLimitError(RuntimeError):
    """A product would exceed the configured nonzero-coefficient cap."""


class PreconditionError(ValueError):
    """An input violates a mathematical precondition of the operation
    (not a refinement mask, not interpolatory, not biorthogonal, ...)."""
