"""
    Exceptions raised by the outage engine.
"""

import typing


class DomainError(ValueError):
    "An argument lies outside the domain of the function or type."


class ShapeError(ValueError):
    "Array operands do not have matching dimensions."


class AccuracyError(ArithmeticError):
    "A series did not reach the requested tolerance within its term cap."


class OptimizationError(RuntimeError):
    def __init__(self, message: str, best: typing.Any = None):
        super().__init__(message)
        self.best = best


class ConfigError(ValueError):
    def __init__(self, message: str, line: typing.Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.line = line


    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f'line {self.line}: {self.message}'
