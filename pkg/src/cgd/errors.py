from __future__ import annotations


class CGDError(Exception):
    """Base class for every error raised by the package."""


class InvariantViolation(CGDError):
    pass


class InconsistentUnion(CGDError):
    def __init__(self, conflict, centers=None):
        self.conflict = conflict
        self.centers = centers
        msg = f"inconsistent union: {conflict}"
        if centers is not None:
            msg += f" (images of {centers[0]} and {centers[1]})"
        super().__init__(msg)


class NonInjectiveRenaming(CGDError):
    pass


class SizeGuardExceeded(CGDError):
    pass


class MalformedDisk(CGDError):
    pass


class AlphabetMismatch(CGDError):
    pass


class RadiusNotPowerOfTwo(CGDError):
    pass


class PortBudgetExceeded(CGDError):
    pass


class UnknownVertex(CGDError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class SpaceTooLarge(CGDError):
    pass


class BadParameters(CGDError):
    pass


class ParseError(CGDError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
