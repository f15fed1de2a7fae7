"""Exception hierarchy shared by the toolkit and mapped to CLI exit codes."""

from __future__ import annotations


class RelRipsError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    exit_code = 1

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class PresentationSyntaxError(RelRipsError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column

    def to_json(self) -> dict:
        out = super().to_json()
        out.update(line=self.line, column=self.column)
        return out


class PresentationError(RelRipsError):
    """Semantically invalid presentation (unknown symbol, bad rule, ...)."""


class ConfluenceError(PresentationError):
    def __init__(self, report):
        super().__init__(
            f"rewriting system is not confluent up to length {report.length}: "
            f"{report.witness_text!r} has normal forms {report.forms_text}"
        )
        self.report = report


class NotInCosetError(RelRipsError):
    """Raised where a same-coset precondition is violated."""


class ResourceLimitError(RelRipsError):
    """A configured cap (vertices, cliques, paths) was exceeded (exit code 3)."""

    exit_code = 3


class ContainmentError(RelRipsError):
    """An inclusion between complexes is not simplicial."""


class NoInteriorPairsError(RelRipsError):
    """Ball too small to examine any quasi-geodesic pairs."""


class NotACycleError(RelRipsError):
    """Chain passed where a cycle is required has nonzero boundary."""


class TruncationWarning(UserWarning):
    """A ball-restricted answer may differ from the one in the full group."""
