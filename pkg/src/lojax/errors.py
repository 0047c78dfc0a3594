"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI turns into
an exit status and a report field.
"""

from __future__ import annotations


class LojaxError(Exception):
    code = "ERROR"


class ParseError(LojaxError, ValueError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        where = f" at position {position}"
        if text:
            where += f"\n  {text}\n  {' ' * position}^"
        super().__init__(message + where)


class ResourceCapError(LojaxError):
    """A configured degree or size cap was exceeded."""

    code = "RESOURCE_CAP"


class NotIsolatedError(LojaxError):
    code = "NOT_ISOLATED"


class PreconditionError(LojaxError):
    """A mathematical precondition of an operation does not hold."""

    code = "PRECONDITION"


class GlobalLocalMismatch(LojaxError):
    code = "GLOBAL_LOCAL_MISMATCH"


class FitUnstable(LojaxError):
    code = "FIT_UNSTABLE"


class TooFewSamples(LojaxError):
    code = "TOO_FEW_SAMPLES"


class IdentityFailed(LojaxError):
    code = "IDENTITY_FAILED"

    def __init__(self, message: str, residual=None):
        self.residual = residual
        super().__init__(message)


class MismatchError(LojaxError):
    code = "MISMATCH"


class SemicontinuityViolation(LojaxError):
    code = "SEMICONTINUITY_VIOLATION"
