"""
Finite chain complexes over Q for permutahedra, Hochschild and
Gerstenhaber–Schack computations.

All domain errors derive from PermucellError so the CLI can map them to
exit codes in one place.
"""


class PermucellError(Exception):
    """Base class for every error raised by the complexes package."""


class DimensionMismatch(PermucellError):
    """Operands live in incompatible spaces (matrix shapes, dim V)."""


class InvalidComplex(PermucellError):
    """A complex failed validation; `report` holds the violations."""

    def __init__(self, message: str, report=None) -> None:
        super().__init__(message)
        self.report = report


class TruncationOverflow(PermucellError):
    """An operator image does not fit inside a truncation window."""

    def __init__(self, message: str, required: int) -> None:
        super().__init__(message)
        self.required = required


class WindowOverflow(PermucellError):
    """A bracket result cannot be computed exactly inside the given windows."""

    def __init__(self, message: str, required: int) -> None:
        super().__init__(message)
        self.required = required


class NotACocycle(PermucellError):
    """hkr_project was handed a cochain with nonzero differential."""

    def __init__(self, message: str, differential=None) -> None:
        super().__init__(message)
        self.differential = differential


class ConfigError(PermucellError):
    """Invalid command-line or config-file parameters."""
