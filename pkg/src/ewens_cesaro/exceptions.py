"""Error types.  The CLI maps each to its own exit code."""


class ValidationError(ValueError):
    """Inputs outside the domain of an operation (exit code 2)."""


class CrossCheckError(ArithmeticError):
    """Two independent computation routes disagree (exit code 3)."""


class InvariantViolation(RuntimeError):
    """A hard inequality that must hold numerically was violated (exit code 4)."""
