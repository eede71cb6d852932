"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ConceptNetError(Exception):
    """Base class for all package errors."""


class InputError(ConceptNetError, ValueError):
    """Bad input data: unknown node, duplicate article, empty corpus..."""


class ParseError(InputError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


class ConfigError(ConceptNetError, ValueError):
    """Invalid model or run configuration."""


class UndefinedMetricError(ConceptNetError, ArithmeticError):
    """The metric has no defined value for this graph (zero variance, no triplets, N < 2)."""
