"""Exception types shared across the package."""


class MarkLabError(Exception):
    """Base class for every error raised by marklab."""


class ResourceLimit(MarkLabError):
    """An enumeration exceeded its configured cap."""


class IndexOutOfRange(MarkLabError, IndexError):
    pass


class InvalidDeterminant(MarkLabError, ValueError):
    pass


class MarkingLengthMismatch(MarkLabError, ValueError):
    pass


class MixedCarriers(MarkLabError, ValueError):
    """Operands live over different rings or groups."""


class PreconditionFailed(MarkLabError):
    """A checked precondition does not hold; ``witness`` carries the offending value."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ExceedsCap(MarkLabError):
    pass


class ShapeMismatch(MarkLabError, ValueError):
    pass


class NotNormal(MarkLabError, ValueError):
    pass


class UnvalidatedSystem(MarkLabError):
    pass


class OutOfScope(MarkLabError, ValueError):
    pass


class InvalidSpec(MarkLabError, ValueError):
    pass


class NotReached(MarkLabError):
    pass


class NotCoprime(MarkLabError, ValueError):
    pass


class InvalidParameters(MarkLabError, ValueError):
    pass


class MissingNamedGenerators(MarkLabError, ValueError):
    pass
