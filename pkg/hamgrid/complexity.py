"""
The known complexity of Hamiltonicity for every grid graph subclass, and a
lookup picking the row that best describes a classified graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import *  # type: ignore

from .grid_graph import ClassificationReport
from .lattice import GridKind

__all__ = [
    "Label",
    "ComplexityRow",
    "TABLE",
    "label",
]


Label = Literal["NP-complete", "Polynomial", "Open"]


@dataclass(frozen=True)
class ComplexityRow:
    """
    One subclass of grid graphs, together with the complexity of deciding
    Hamiltonicity on each lattice.

    ## Attributes

    `name`: Human-readable name of the subclass.

    `labels`: The complexity per lattice.

    `note`: Extra qualification shown next to the label, e.g. the degree
        bound of the degree-bounded row.
    """

    name: str
    labels: dict[GridKind, Label]
    note: dict[GridKind, str]

    def applies_to(self, report: ClassificationReport) -> bool:
        return _MEMBERSHIP[self.name](report)


def _row(
    name: str,
    triangular: Label,
    square: Label,
    hexagonal: Label,
    note: dict[GridKind, str] | None = None,
) -> ComplexityRow:
    return ComplexityRow(
        name=name,
        labels={
            GridKind.TRIANGULAR: triangular,
            GridKind.SQUARE: square,
            GridKind.HEXAGONAL: hexagonal,
        },
        note={} if note is None else note,
    )


# Most specific row first
TABLE: tuple[ComplexityRow, ...] = (
    _row("Thin Polygonal", "Polynomial", "Polynomial", "Polynomial"),
    _row("Polygonal", "Polynomial", "NP-complete", "NP-complete"),
    _row("Thin", "NP-complete", "NP-complete", "NP-complete"),
    _row("Superthin", "NP-complete", "Polynomial", "Polynomial"),
    _row("Solid", "Polynomial", "Polynomial", "Open"),
    _row(
        "Degree-bounded",
        "NP-complete",
        "NP-complete",
        "Polynomial",
        note={
            GridKind.TRIANGULAR: "deg <= 3",
            GridKind.SQUARE: "deg <= 3",
            GridKind.HEXAGONAL: "deg <= 2",
        },
    ),
    _row("General", "NP-complete", "NP-complete", "NP-complete"),
)


_MEMBERSHIP: dict[str, Callable[[ClassificationReport], bool]] = {
    "Thin Polygonal": lambda r: r.thin and r.polygonal,
    "Polygonal": lambda r: r.polygonal,
    "Thin": lambda r: r.thin,
    "Superthin": lambda r: r.superthin,
    "Solid": lambda r: r.solid,
    "Degree-bounded": lambda r: r.degree_bounded,
    "General": lambda r: True,
}


_PREFERENCE: dict[Label, int] = {
    "Polynomial": 0,
    "Open": 1,
    "NP-complete": 2,
}


def label(
    report: ClassificationReport,
    kind: GridKind | None = None,
) -> tuple[ComplexityRow, Label]:
    """
    Returns the row of the complexity table that best describes a graph, and
    the label of that row for the graph's lattice.

    Among all rows the graph belongs to, rows with a polynomial algorithm win
    over open rows, which win over NP-complete ones. Ties go to the more
    specific row.


    ## Parameters

    `report`: The classification of the graph.

    `kind`: The lattice to look up. Defaults to the lattice of the report.
    """
    if kind is None:
        kind = report.kind

    candidates = [row for row in TABLE if row.applies_to(report)]

    best = min(
        enumerate(candidates),
        key=lambda item: (_PREFERENCE[item[1].labels[kind]], item[0]),
    )[1]

    return best, best.labels[kind]
