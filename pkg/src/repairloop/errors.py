"""Exception hierarchy.

Every error carries a short machine ``code`` (e.g. ``"infinite-mttf"``) that
appears in its message, so callers can match on either.  The CLI maps the
three families below onto exit codes 1, 2 and 3.
"""

from __future__ import annotations


class CtmcError(Exception):
    code = "error"

    def __init__(self, message: str, code: str | None = None):
        if code is not None:
            self.code = code
        super().__init__(f"{self.code}: {message}")


class ModelSyntaxError(CtmcError):
    """Malformed model document (bad JSON, wrong types, unknown keys)."""

    code = "syntax-error"

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class ModelValidationError(CtmcError):
    """Well-formed document or model that violates a model invariant."""

    code = "invalid-model"

    def __init__(self, message: str, code: str | None = None, location: str | None = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message, code)


class NumericalError(CtmcError):
    code = "numerical-failure"


class SolverFailure(NumericalError):
    code = "solver-failure"

    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(f"{message} (residual {residual:.3e})")


class DegenerateAvailability(NumericalError):
    code = "degenerate-availability"


class OracleFailure(NumericalError):
    code = "oracle-failure"
