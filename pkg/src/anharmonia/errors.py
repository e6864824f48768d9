"""Exception hierarchy shared by every module."""


class AnharmoniaError(Exception):
    pass


class IncompatibleRingError(AnharmoniaError, TypeError):
    """Operands live in different coefficient rings."""


class DegenerateInputError(AnharmoniaError, ValueError):
    pass


class NotAPowerError(AnharmoniaError, ValueError):
    """Raised by p-th root extraction; ``index`` is the first mismatching coefficient."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InadmissibleSeedError(AnharmoniaError, ValueError):
    pass


class ConstructionError(AnharmoniaError, RuntimeError):
    pass


class EliminationError(ConstructionError):
    pass


class SingularityError(AnharmoniaError, ArithmeticError):
    """Numeric integration hit a non-finite state."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class IllConditionedError(AnharmoniaError, ArithmeticError):
    pass


class WholeSphereFixed(AnharmoniaError, ValueError):
    """The identity map fixes every point."""
