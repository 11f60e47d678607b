"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NcicError(Exception):
    """Base class for all library errors."""


class NotPrimePower(NcicError, ValueError):
    pass


class TooLarge(NcicError, ValueError):
    pass


class LimitExceeded(NcicError):
    """An exhaustive enumeration would exceed the configured limit."""

    def __init__(self, what: str, cost: int, limit: int):
        self.what = what
        self.cost = cost
        self.limit = limit
        super().__init__(f"{what}: cost {cost} exceeds enumeration limit {limit}")


class ArityMismatch(NcicError, ValueError):
    pass


class DimensionMismatch(NcicError, ValueError):
    pass


class NotDAG(NcicError, ValueError):
    pass


class Ambiguous(NcicError):
    """Two distinct wanted values are consistent with one decoder input."""

    def __init__(self, codeword, side_info, values):
        self.codeword = codeword
        self.side_info = side_info
        self.values = values
        super().__init__(
            f"ambiguous decoder input: codeword={codeword} side_info={side_info} "
            f"admits wanted values {values}"
        )


class TooManyDeletions(NcicError, ValueError):
    def __init__(self, receiver: str, requested: int, allowed: int):
        self.receiver = receiver
        super().__init__(
            f"receiver {receiver}: {requested} deletions requested, at most {allowed} allowed"
        )


class PreconditionError(NcicError, ValueError):
    pass


class InvalidInstance(NcicError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid instance: " + "; ".join(self.violations))


class InvalidNetworkCode(NcicError, ValueError):
    pass


class InvalidIndexCode(NcicError, ValueError):
    pass


class WrongLength(NcicError, ValueError):
    pass


class NonUniqueExtension(NcicError):
    pass


class DependenceViolated(NcicError):
    def __init__(self, dup: str, orig: str):
        self.dup = dup
        self.orig = orig
        super().__init__(f"global map of {dup} is not a function of the global map of {orig}")


class IterationCapExceeded(NcicError, RuntimeError):
    pass


class FormatError(NcicError, ValueError):
    """Malformed instance or code file."""
