"""Exception hierarchy shared by all gprand modules."""


class GPRandError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""


class DomainError(GPRandError, ValueError):
    pass


class StraddlesInteger(GPRandError, ArithmeticError):
    """A ball contains an integer (or the decision boundary), so its floor is not certified."""


class InsufficientPrecision(GPRandError, ArithmeticError):
    pass


class PrecisionExhausted(GPRandError, ArithmeticError):
    """Raised when the retry ladder hits its cap without certifying a decision."""

    def __init__(self, message, node=None, index=None):
        super().__init__(message)
        self.node = node
        self.index = index


class GPSyntaxError(GPRandError, ValueError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        exp = ", ".join(self.expected)
        super().__init__(f"{message} at offset {offset}" + (f" (expected one of: {exp})" if exp else ""))


class NotTheoremShape(GPRandError, ValueError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class OutOfRange(GPRandError, ValueError):
    pass


class OutOfDomain(GPRandError, ValueError):
    pass


class TooLarge(GPRandError, ValueError):
    pass


class PreconditionViolated(GPRandError, ValueError):
    pass


class RationalRelation(GPRandError, ArithmeticError):
    """An integer combination of the inputs is (or cannot be certified apart from) an integer."""

    def __init__(self, message, witness):
        super().__init__(f"{message}; witness={tuple(witness)}")
        self.witness = tuple(witness)
