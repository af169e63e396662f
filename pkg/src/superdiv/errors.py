"""Exception hierarchy shared by the library and the CLI exit-code mapping."""

from __future__ import annotations


class SuperdivError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SuperdivError):
    """Invalid or incomplete run configuration (CLI exit code 2)."""


class DataFormatError(SuperdivError):
    """Malformed input data file (CLI exit code 3)."""

    def __init__(self, message: str, *, path: object = None, line: int | None = None) -> None:
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class NoSignalError(SuperdivError):
    """Every index iteration was skipped; no correlation signal exists (CLI exit code 3)."""


class InvariantError(SuperdivError):
    """An internal invariant was violated; indicates a bug (CLI exit code 4)."""
