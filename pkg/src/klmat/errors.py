"""Exception hierarchy shared by all klmat modules."""


class KlmatError(Exception):
    """Base class for every error raised by this package."""


class ContractError(KlmatError, ValueError):
    """An argument violated a documented precondition."""


class NumericalError(KlmatError, ArithmeticError):
    """An iterative or integration routine failed numerically.

    ``last_iterate`` holds whatever partial result was available.
    """

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DivergenceError(NumericalError):
    """A filter produced a non-finite prediction, error or coefficient."""

    def __init__(self, step, magnitude):
        super().__init__(
            f"filter diverged at step {step} (|error| = {magnitude!r})"
        )
        self.step = step
        self.magnitude = magnitude


class IngestionError(KlmatError):
    """A data file could not be read or failed validation."""

    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
        self.path = path
        self.line = line


class ConfigError(KlmatError, ValueError):
    """An experiment configuration is malformed or inconsistent."""
