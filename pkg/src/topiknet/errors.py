"""Exception hierarchy shared across the package.

The three leaf classes map onto the CLI exit codes: ConfigError -> 2,
DataError -> 3, ConvergenceError -> 4.
"""

from __future__ import annotations


class TopiknetError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(TopiknetError):
    """Invalid or inconsistent configuration."""


class DataError(TopiknetError):
    """Input data violates a precondition (malformed record, empty window,
    constant vector, rank-deficient design, ...)."""


class ConvergenceError(TopiknetError):
    """An iterative procedure exhausted its budget without stabilizing.

    ``agreement`` carries the last co-assignment matrix when consensus
    clustering is the procedure that failed.
    """

    def __init__(self, message: str, agreement=None):
        super().__init__(message)
        self.agreement = agreement
