"""Exception types shared across the library."""


class MultitileError(Exception):
    """Base class for all library-specific errors."""


class SignIndeterminate(MultitileError):
    """Interval refinement hit the precision cap without separating from zero.

    Raised only for values involving symbolic generators (or generators the
    caller declared as independent when they are not).  Signals that the
    supplied approximation is too coarse, never a silent misclassification.
    """


class PrecisionUnreachable(MultitileError):
    """A symbolic generator's interval cannot be refined to the requested width."""


class FieldClosureViolation(MultitileError):
    """A product or quotient left the closed scalar tier (single quadratic field)."""


class DimensionUnsupported(MultitileError):
    """The operation is not available in this dimension (e.g. hulls for d >= 3)."""


class ModeUnavailable(MultitileError):
    """Verification-mode preconditions are not met (dimension, period, field)."""


class InputError(MultitileError):
    """Malformed problem file or inconsistent construction data."""
