"""
Serializable cell regions, used by the reductions to record which part of a
compiled instance came from which part of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import *  # type: ignore

import uniserde

from .lattice import Cell, Coord, GridKind

__all__ = ["CellRegion"]


@dataclass
class CellRegion(uniserde.Serde):
    """
    A named set of cells.

    ## Attributes

    `id`: The input element the region belongs to: a vertex, edge, variable
        or clause index.

    `anchors`: The anchors of all cells, sorted.

    `offset`: Where the region's gadget was placed, if it is a gadget.
    """

    id: int
    anchors: list[list[int]]
    offset: list[int] = field(default_factory=list)

    @staticmethod
    def from_cells(
        id: int,
        cells: Iterable[Cell],
        offset: tuple[int, int] | None = None,
    ) -> CellRegion:
        return CellRegion(
            id=id,
            anchors=sorted([c.anchor.a, c.anchor.b] for c in cells),
            offset=[] if offset is None else list(offset),
        )

    def cells(self, kind: GridKind) -> set[Cell]:
        return {Cell(kind, Coord(a, b)) for a, b in self.anchors}

    def __len__(self) -> int:
        return len(self.anchors)
