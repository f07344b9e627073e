"""
Integer coordinates, unit-distance adjacency and cell geometry for the square,
triangular and hexagonal tilings.

All three lattices share one integer basis. Square coordinates are embedded
as-is, while triangular and hexagonal coordinates use the basis `(1, 0)` and
`(1/2, √3/2)`. Hexagonal vertices are the triangular lattice points with
`(a - b) mod 3 != 0`; the excluded points are the hexagon centers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import *  # type: ignore

from .errors import CellError, CoordinateError

__all__ = [
    "GridKind",
    "Coord",
    "Cell",
    "COORD_LIMIT",
    "neighbors",
    "pixel_corners",
    "cells_at",
    "cell_of_corners",
    "adjacent_cells",
    "embed",
    "color_class",
    "is_vertex",
    "validate_coord",
    "rotate60",
    "rotate90",
    "translate",
]


# Keeps embedded positions exact in double precision
COORD_LIMIT = 2**20


class GridKind(enum.Enum):
    """
    The tiling a grid graph lives on.
    """

    SQUARE = "square"
    TRIANGULAR = "triangular"
    HEXAGONAL = "hexagonal"


class Coord(NamedTuple):
    """
    A lattice point, given by its two integer coefficients.
    """

    a: int
    b: int

    def __add__(self, other: tuple[int, int]) -> Coord:  # type: ignore
        return Coord(self.a + other[0], self.b + other[1])

    def __sub__(self, other: tuple[int, int]) -> Coord:
        return Coord(self.a - other[0], self.b - other[1])


Orientation = Literal["none", "up", "down"]


@dataclass(frozen=True, order=True)
class Cell:
    """
    A minimal face of a tiling: a unit square, a unit triangle or a regular
    hexagon.

    ## Attributes

    `kind`: The tiling the cell belongs to.

    `anchor`: The bottom left corner for squares and triangles, the center for
        hexagons.

    `orientation`: `"up"` or `"down"` for triangles, `"none"` otherwise.
    """

    kind: GridKind
    anchor: Coord
    orientation: Orientation = "none"

    def __post_init__(self) -> None:
        # Allow plain tuples as anchors
        if not isinstance(self.anchor, Coord):
            object.__setattr__(self, "anchor", Coord(*self.anchor))

        if self.kind is GridKind.TRIANGULAR:
            if self.orientation not in ("up", "down"):
                raise CellError(
                    f"Triangular cells must be oriented `up` or `down`, not"
                    f" `{self.orientation}`"
                )
        elif self.orientation != "none":
            raise CellError(
                f"Only triangular cells have an orientation, but a"
                f" {self.kind.value} cell was given `{self.orientation}`"
            )

        if (
            self.kind is GridKind.HEXAGONAL
            and (self.anchor.a - self.anchor.b) % 3 != 0
        ):
            raise CellError(
                f"{tuple(self.anchor)} is not a hexagon center. Centers satisfy"
                f" `(a - b) mod 3 == 0`"
            )

    def __repr__(self) -> str:
        if self.orientation == "none":
            return f"<Cell {self.kind.value} {self.anchor.a} {self.anchor.b}>"

        return (
            f"<Cell {self.kind.value} {self.anchor.a} {self.anchor.b}"
            f" {self.orientation}>"
        )


_SQUARE_STEPS = (Coord(1, 0), Coord(0, 1), Coord(-1, 0), Coord(0, -1))

_TRIANGULAR_STEPS = (
    Coord(1, 0),
    Coord(0, 1),
    Coord(-1, 1),
    Coord(-1, 0),
    Coord(0, -1),
    Coord(1, -1),
)

# Hexagonal vertices come in two classes, which point in alternating
# directions
_HEXAGONAL_STEPS = {
    1: (Coord(1, 0), Coord(-1, 1), Coord(0, -1)),
    2: (Coord(0, 1), Coord(-1, 0), Coord(1, -1)),
}

_HEXAGONAL_CENTER_STEPS = {
    1: (Coord(0, 1), Coord(-1, 0), Coord(1, -1)),
    2: (Coord(1, 0), Coord(0, -1), Coord(-1, 1)),
}


def is_vertex(kind: GridKind, c: tuple[int, int]) -> bool:
    """
    Returns whether `c` is a vertex of the given lattice. Only the hexagonal
    lattice excludes any integer points.
    """
    if kind is GridKind.HEXAGONAL:
        return (c[0] - c[1]) % 3 != 0

    return True


def validate_coord(
    kind: GridKind,
    c: tuple[int, int],
    *,
    limit: int = COORD_LIMIT,
) -> Coord:
    """
    Makes sure `c` is a vertex of the lattice and lies within the coordinate
    window, and returns it as a `Coord`.


    ## Parameters

    `kind`: The lattice to check against.

    `c`: The coordinate to check.

    `limit`: The largest allowed absolute value of either coefficient.


    ## Raises

    `CoordinateError`: If the coordinate is not a lattice vertex or lies
        outside of the window.
    """
    a, b = c

    if abs(a) > limit or abs(b) > limit:
        raise CoordinateError(
            f"{(a, b)} lies outside of the coordinate window of ±{limit}"
        )

    if not is_vertex(kind, c):
        raise CoordinateError(
            f"{(a, b)} is a hexagon center, not a vertex of the hexagonal"
            f" lattice"
        )

    return Coord(a, b)


def neighbors(kind: GridKind, c: tuple[int, int]) -> list[Coord]:
    """
    Returns all lattice points at distance exactly 1 from `c`.

    The neighbors are listed counterclockwise, starting from the direction
    closest to `+x`. This order is the rotation system every face walk in the
    library is traced with.


    ## Raises

    `CoordinateError`: If `c` is not a vertex of the lattice.
    """
    c = validate_coord(kind, c)

    if kind is GridKind.SQUARE:
        steps = _SQUARE_STEPS
    elif kind is GridKind.TRIANGULAR:
        steps = _TRIANGULAR_STEPS
    else:
        steps = _HEXAGONAL_STEPS[(c.a - c.b) % 3]

    return [c + step for step in steps]


def pixel_corners(cell: Cell) -> list[Coord]:
    """
    Returns the corners of a cell in counterclockwise order.

    Squares and triangles start at their anchor, hexagons at the corner in
    `+x` direction of their center.
    """
    a, b = cell.anchor

    if cell.kind is GridKind.SQUARE:
        return [
            Coord(a, b),
            Coord(a + 1, b),
            Coord(a + 1, b + 1),
            Coord(a, b + 1),
        ]

    if cell.kind is GridKind.TRIANGULAR:
        if cell.orientation == "up":
            return [Coord(a, b), Coord(a + 1, b), Coord(a, b + 1)]

        return [Coord(a + 1, b), Coord(a + 1, b + 1), Coord(a, b + 1)]

    return [cell.anchor + step for step in _TRIANGULAR_STEPS]


def cells_at(kind: GridKind, c: tuple[int, int]) -> list[Cell]:
    """
    Returns all cells which have `c` as one of their corners.
    """
    c = validate_coord(kind, c)
    a, b = c

    if kind is GridKind.SQUARE:
        return [
            Cell(kind, Coord(a, b)),
            Cell(kind, Coord(a - 1, b)),
            Cell(kind, Coord(a - 1, b - 1)),
            Cell(kind, Coord(a, b - 1)),
        ]

    if kind is GridKind.TRIANGULAR:
        return [
            Cell(kind, Coord(a, b), "up"),
            Cell(kind, Coord(a - 1, b), "down"),
            Cell(kind, Coord(a - 1, b), "up"),
            Cell(kind, Coord(a - 1, b - 1), "down"),
            Cell(kind, Coord(a, b - 1), "up"),
            Cell(kind, Coord(a, b - 1), "down"),
        ]

    return [
        Cell(kind, c + step) for step in _HEXAGONAL_CENTER_STEPS[(a - b) % 3]
    ]


def cell_of_corners(kind: GridKind, corners: Iterable[Coord]) -> Cell | None:
    """
    Returns the cell whose corners are exactly the given coordinates, or `None`
    if there is no such cell.
    """
    corner_set = set(corners)

    if not corner_set:
        return None

    first = next(iter(corner_set))

    if not is_vertex(kind, first):
        return None

    for cell in cells_at(kind, first):
        if set(pixel_corners(cell)) == corner_set:
            return cell

    return None


def adjacent_cells(cell: Cell) -> list[tuple[Cell, tuple[Coord, Coord]]]:
    """
    Returns the cells sharing a side with `cell`, each paired with the shared
    side. Sides are listed in counterclockwise order.
    """
    corners = pixel_corners(cell)
    result: list[tuple[Cell, tuple[Coord, Coord]]] = []

    for ii, u in enumerate(corners):
        v = corners[(ii + 1) % len(corners)]

        for other in cells_at(cell.kind, u):
            if other == cell:
                continue

            if v in pixel_corners(other):
                result.append((other, (u, v)))
                break

    return result


def embed(kind: GridKind, c: tuple[int, int]) -> tuple[float, float]:
    """
    Returns the Euclidean position of a lattice point.
    """
    a, b = c

    if kind is GridKind.SQUARE:
        return float(a), float(b)

    return a + b / 2, b * math.sqrt(3) / 2


def color_class(kind: GridKind, c: tuple[int, int]) -> int | None:
    """
    Returns the bipartition class (0 or 1) of a vertex. The triangular lattice
    isn't bipartite, so `None` is returned for it.
    """
    if kind is GridKind.SQUARE:
        return (c[0] + c[1]) % 2

    if kind is GridKind.HEXAGONAL:
        return (c[0] - c[1]) % 3 - 1

    return None


def rotate60(c: tuple[int, int], times: int = 1) -> Coord:
    """
    Rotates a point of the triangular basis counterclockwise around the origin,
    in steps of 60 degrees.

    Hexagonal vertices stay hexagonal vertices, but rotating by an odd number
    of steps swaps their color classes.
    """
    a, b = c

    for _ in range(times % 6):
        a, b = -b, a + b

    return Coord(a, b)


def rotate90(c: tuple[int, int], times: int = 1) -> Coord:
    """
    Rotates a square lattice point counterclockwise around the origin, in steps
    of 90 degrees.
    """
    a, b = c

    for _ in range(times % 4):
        a, b = -b, a

    return Coord(a, b)


def translate(c: tuple[int, int], offset: tuple[int, int]) -> Coord:
    return Coord(c[0] + offset[0], c[1] + offset[1])
