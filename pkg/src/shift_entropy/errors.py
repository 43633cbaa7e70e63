"""Exception types shared across the package."""


class ShiftEntropyError(Exception):
    """Base class for all package errors."""


class EmptyWord(ShiftEntropyError):
    pass


class EmptyPeriod(ShiftEntropyError):
    pass


class AlphabetMismatch(ShiftEntropyError):
    pass


class ParseError(ShiftEntropyError):
    pass


class ConditionViolation(ShiftEntropyError):
    """The admissibility inequalities on (u, v) fail."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularPoint(ShiftEntropyError):
    """A point lies within the singular tolerance of a breakpoint."""


class SingularOrbit(ShiftEntropyError):
    """An orbit enters a breakpoint neighbourhood at step ``step``."""

    def __init__(self, step):
        super().__init__(f"orbit hits a breakpoint at step {step}")
        self.step = step


class BadParams(ShiftEntropyError):
    pass


class NotPeriodic(ShiftEntropyError):
    pass


class SymbolUnderflow(ShiftEntropyError):
    pass


class SymbolOverflow(ShiftEntropyError):
    pass


class BracketFailure(ShiftEntropyError):
    """Bisection bracket endpoints do not carry opposite signs."""


class MaxIterExceeded(ShiftEntropyError):
    pass


class Undetermined(ShiftEntropyError):
    pass
