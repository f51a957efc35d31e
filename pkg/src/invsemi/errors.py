"""Exception hierarchy.

MathAssertionError marks a failed mathematical assertion and always carries a
concrete witness (an element, a coefficient, or a pair). InputError marks a
malformed or mismatched input. The CLI maps these to exit codes 1 and 2.
"""

from __future__ import annotations


class InvsemiError(Exception):
    pass


class MathAssertionError(InvsemiError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IdentityMismatch(MathAssertionError):
    pass


class WitnessFailure(MathAssertionError):
    pass


class NotInCoset(MathAssertionError):
    pass


class PartitionFailure(MathAssertionError):
    pass


class NotUpwardClosed(MathAssertionError):
    pass


class UnsupportedCoefficient(MathAssertionError):
    pass


class OracleMismatch(MathAssertionError):
    pass


class InputError(InvsemiError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContextMismatch(InputError):
    pass


class CapExceeded(InputError):
    pass


class NotHermitian(InputError):
    pass


class NotPositivePair(InputError):
    pass


class CancellationPresent(InputError):
    pass
