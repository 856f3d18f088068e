"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the category it
belongs to: configuration (2), numerical (3) or input/parsing (4).
"""


class SpecResError(Exception):
    exit_code = 3


class ConfigError(SpecResError, ValueError):
    exit_code = 2


class NumericalError(SpecResError, ArithmeticError):
    exit_code = 3


class InputError(SpecResError):
    exit_code = 4


class PoleOfGamma(NumericalError):
    """Argument lies within tolerance of a nonpositive integer."""


class IllConditioned(NumericalError):
    """Moment matrix condition number exceeds the configured limit."""


class QuadratureFailure(NumericalError):
    pass


class ScheduleViolation(NumericalError):
    """Schedule parameter m does not exceed s_0 - s_k."""


class InsufficientData(NumericalError):
    pass


class InvalidScales(ConfigError):
    pass


class InvalidCutoff(ConfigError):
    pass


class InvalidPoles(ConfigError):
    pass


class ParseError(InputError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class EmptySpectrum(InputError):
    pass


class NonpositiveEigenvalue(InputError):
    def __init__(self, value: float, line: int | None = None):
        self.value = value
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"eigenvalue {value!r} is not strictly positive{where}")
