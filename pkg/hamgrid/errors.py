from __future__ import annotations

from typing import *  # type: ignore

if TYPE_CHECKING:
    from .grid_graph import ClassificationReport


__all__ = [
    "HamgridError",
    "CoordinateError",
    "CellError",
    "StructureError",
    "RegionShapeError",
    "ClassificationError",
    "InvariantViolation",
    "NoCycleError",
    "ThinnessViolation",
    "CapacityError",
    "TrvbIdError",
    "TemplateInvalidError",
    "ParameterError",
    "LayoutError",
    "CompilerBugError",
    "CertificateInconsistencyError",
    "ParseError",
    "MonotonicityError",
    "PlanarityError",
    "BudgetExhaustedError",
]


class HamgridError(Exception):
    """
    Base class for all errors raised by `hamgrid`.
    """

    def __init__(self, message: str) -> None:
        super().__init__(message)

    @property
    def message(self) -> str:
        """
        A human-readable message describing the problem.
        """
        return self.args[0]


class CoordinateError(HamgridError):
    """
    Raised when a coordinate is not a vertex of the requested lattice, or lies
    outside of the coordinate window.
    """


class CellError(HamgridError):
    """
    Raised when a cell is malformed, e.g. a triangular cell without an
    orientation or a hexagonal cell whose anchor isn't a hexagon center.
    """


class StructureError(HamgridError):
    """
    Raised when a graph doesn't have the structure an operation requires, e.g.
    tracing faces of a disconnected graph.
    """


class RegionShapeError(HamgridError):
    """
    Raised when a region of pixels is disconnected or encloses a cavity, so its
    boundary isn't a single cycle.
    """


class ClassificationError(HamgridError):
    """
    Raised when a solver is handed a graph outside of the class it can decide.

    ## Attributes

    `report`: The classification of the offending graph.
    """

    def __init__(self, message: str, report: ClassificationReport) -> None:
        super().__init__(message)
        self.report = report


class InvariantViolation(HamgridError):
    """
    Raised when an internal guarantee fails. This indicates either a bug or an
    input which doesn't satisfy the documented preconditions.
    """


class NoCycleError(HamgridError):
    """
    Raised when a cycle of pixels was requested, but the pixel graph is
    acyclic.
    """


class ThinnessViolation(HamgridError):
    """
    Raised when a hexagonal pixel has four or more neighboring pixels, which
    can't happen in a thin graph.
    """


class CapacityError(HamgridError):
    """
    Raised when a local enumeration has more free vertices than the configured
    cap.
    """


class TrvbIdError(HamgridError):
    """
    Raised when a vertex id doesn't exist in a multigraph.
    """


class TemplateInvalidError(HamgridError):
    """
    Raised when a gadget template doesn't honor its behavioral contract.
    """


class ParameterError(HamgridError):
    """
    Raised when a gadget is requested with unusable parameters.
    """


class LayoutError(HamgridError):
    """
    Raised when a compiler can't place gadgets or route wires.

    ## Attributes

    `edge`: The id of the edge or clause which couldn't be routed, if known.
    """

    def __init__(self, message: str, edge: int | None = None) -> None:
        super().__init__(message)
        self.edge = edge


class CompilerBugError(HamgridError):
    """
    Raised when a compiled instance fails its post-classification.
    """


class CertificateInconsistencyError(HamgridError):
    """
    Raised when the edges of a certificate inside a wire match neither of the
    two wire modes.
    """


class ParseError(HamgridError):
    """
    Raised when a document can't be parsed.

    ## Attributes

    `line`: The 1-based line number the problem was found on, or `None` if
        the problem concerns the document as a whole.
    """

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"Line {line}: {message}"

        super().__init__(message)
        self.line = line


class MonotonicityError(ParseError):
    """
    Raised when a clause above the variable axis contains a negative literal,
    or a clause below it contains a positive one.
    """


class PlanarityError(ParseError):
    """
    Raised when the clause segments of a SAT embedding cross.
    """


class BudgetExhaustedError(HamgridError):
    """
    Raised when a definite answer is required, but the search ran out of budget
    before finding one.
    """
