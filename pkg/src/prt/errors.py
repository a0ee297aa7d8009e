"""Exception types shared across the package."""


class PrtError(Exception):
    """Base class for all package errors."""


class InvalidExtension(PrtError):
    pass


class NodeAbsent(PrtError):
    pass


class NotCodingNode(PrtError):
    pass


class NotMeetClosed(PrtError):
    """A decoded point set is not closed under meets in the ground truth."""


class DepthExhausted(PrtError):
    def __init__(self, message: str, level: int = -1):
        super().__init__(message)
        self.level = level


class ConstraintUnsatisfiable(PrtError):
    def __init__(self, message: str, blocking: str | None = None):
        super().__init__(message)
        self.blocking = blocking


class NotAChain(PrtError):
    pass


class NotAlmostAntichain(PrtError):
    pass


class NotDiaryShaped(PrtError):
    pass


class InstanceTooLarge(PrtError):
    pass


class ParseError(PrtError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DepthWarning(UserWarning):
    """Enumeration may have been truncated by the height bound."""
