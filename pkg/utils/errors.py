from typing import Optional


class Ca3dError(Exception):
    """Root of every error raised by this package"""


class InvalidArgumentError(Ca3dError, ValueError):
    """An operation was called outside its precondition"""

    def __init__(self, argument: str, message: str):
        self.argument = argument
        super().__init__(f"Invalid argument '{argument}': {message}")


class DomainError(InvalidArgumentError):
    """A closed form was evaluated outside the domain it is defined on"""


class ScenarioFileError(Ca3dError):
    """Base class for scenario file problems"""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class ScenarioParseError(ScenarioFileError):
    """The scenario file is not well-formed JSON"""

    def __init__(self, path: str, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(path, f"{where}{message}")


class ScenarioValidationError(ScenarioFileError):
    """The scenario file parsed but violates a field invariant"""

    def __init__(self, path: str, field: str, message: str):
        self.field = field
        super().__init__(path, f"field '{field}': {message}")


class ProjectionError(Ca3dError):
    """Separation repair could not reach a feasible deployment"""

    def __init__(self, message: str, rounds: int):
        self.rounds = rounds
        super().__init__(f"Projection failed after {rounds} rounds: {message}")


class ConfigError(Ca3dError):
    """Experiment configuration is missing, malformed or inconsistent"""


class SchemeException(Ca3dError):
    """A deployment scheme failed"""

    def __init__(self, scheme_name: str, message: str, original_error: Optional[Exception] = None):
        self.scheme_name = scheme_name
        self.original_error = original_error
        super().__init__(f"Scheme '{scheme_name}': {message}")


class OrchestrationException(Ca3dError):
    """A sweep could not be completed"""
