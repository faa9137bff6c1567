"""Exception types raised across the package."""


class QFeasibleError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(QFeasibleError, ValueError):
    pass


class InvalidArgumentError(QFeasibleError, ValueError):
    pass


class CapacityError(QFeasibleError, ValueError):
    """A circuit does not fit the simulator or the target device."""


class UnsupportedGateError(QFeasibleError, ValueError):
    pass


class NoPathError(QFeasibleError):
    pass


class DomainError(QFeasibleError, ValueError):
    """A cost model was evaluated outside its domain."""


class EvaluationError(QFeasibleError, ArithmeticError):
    pass


class MissingCalibrationError(QFeasibleError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class CalibrationError(QFeasibleError, ValueError):
    """Calibration data failed to parse or validate.

    ``line`` is the 1-based line number in the source text when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(CalibrationError):
    pass


class ValidationError(CalibrationError):
    pass
