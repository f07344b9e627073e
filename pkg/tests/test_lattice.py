import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamgrid import lattice
from hamgrid.errors import CellError, CoordinateError
from hamgrid.lattice import Cell, Coord, GridKind

SQUARE = GridKind.SQUARE
TRIANGULAR = GridKind.TRIANGULAR
HEXAGONAL = GridKind.HEXAGONAL

small = st.integers(-50, 50)


@pytest.mark.parametrize(
    "kind, degree",
    [
        (SQUARE, 4),
        (TRIANGULAR, 6),
        (HEXAGONAL, 3),
    ],
)
def test_neighbor_counts(kind: GridKind, degree: int) -> None:
    assert len(lattice.neighbors(kind, (1, 0))) == degree


def test_hexagon_centers_are_not_vertices() -> None:
    assert not lattice.is_vertex(HEXAGONAL, (0, 0))
    assert not lattice.is_vertex(HEXAGONAL, (2, -1))
    assert lattice.is_vertex(HEXAGONAL, (1, 0))

    with pytest.raises(CoordinateError):
        lattice.neighbors(HEXAGONAL, (0, 0))


def test_coordinate_window() -> None:
    with pytest.raises(CoordinateError):
        lattice.validate_coord(SQUARE, (lattice.COORD_LIMIT + 1, 0))

    assert lattice.validate_coord(SQUARE, (3, -4)) == Coord(3, -4)


@given(small, small)
def test_neighbors_are_at_unit_distance(a: int, b: int) -> None:
    for kind in GridKind:
        if not lattice.is_vertex(kind, (a, b)):
            continue

        x, y = lattice.embed(kind, (a, b))

        for other in lattice.neighbors(kind, (a, b)):
            u, v = lattice.embed(kind, other)
            assert math.isclose(math.hypot(u - x, v - y), 1.0)


@given(small, small)
def test_adjacency_is_symmetric(a: int, b: int) -> None:
    for kind in GridKind:
        if not lattice.is_vertex(kind, (a, b)):
            continue

        for other in lattice.neighbors(kind, (a, b)):
            assert (a, b) in lattice.neighbors(kind, other)


@given(small, small)
def test_bipartite_lattices_alternate_colors(a: int, b: int) -> None:
    for kind in (SQUARE, HEXAGONAL):
        if not lattice.is_vertex(kind, (a, b)):
            continue

        color = lattice.color_class(kind, (a, b))
        assert color in (0, 1)

        for other in lattice.neighbors(kind, (a, b)):
            assert lattice.color_class(kind, other) == 1 - color

    assert lattice.color_class(TRIANGULAR, (a, b)) is None


def test_hexagonal_cell_needs_a_center() -> None:
    Cell(HEXAGONAL, Coord(0, 0))

    with pytest.raises(CellError):
        Cell(HEXAGONAL, Coord(1, 0))


def test_triangles_need_an_orientation() -> None:
    with pytest.raises(CellError):
        Cell(TRIANGULAR, Coord(0, 0))

    with pytest.raises(CellError):
        Cell(SQUARE, Coord(0, 0), "up")


@pytest.mark.parametrize(
    "cell, count",
    [
        (Cell(SQUARE, Coord(0, 0)), 4),
        (Cell(TRIANGULAR, Coord(0, 0), "up"), 3),
        (Cell(TRIANGULAR, Coord(0, 0), "down"), 3),
        (Cell(HEXAGONAL, Coord(0, 0)), 6),
    ],
)
def test_cell_corners_form_a_unit_cycle(cell: Cell, count: int) -> None:
    corners = lattice.pixel_corners(cell)
    assert len(corners) == count

    for ii, u in enumerate(corners):
        v = corners[(ii + 1) % count]
        assert v in lattice.neighbors(cell.kind, u)

    assert lattice.cell_of_corners(cell.kind, reversed(corners)) == cell


@pytest.mark.parametrize(
    "kind, count",
    [
        (SQUARE, 4),
        (TRIANGULAR, 6),
        (HEXAGONAL, 3),
    ],
)
def test_cells_at_a_vertex(kind: GridKind, count: int) -> None:
    cells = lattice.cells_at(kind, (1, 0))
    assert len(cells) == count

    for cell in cells:
        assert (1, 0) in lattice.pixel_corners(cell)


def test_cell_of_corners_rejects_non_cells() -> None:
    assert lattice.cell_of_corners(SQUARE, [Coord(0, 0), Coord(2, 0)]) is None
    assert lattice.cell_of_corners(SQUARE, []) is None


def test_adjacent_cells() -> None:
    square = lattice.adjacent_cells(Cell(SQUARE, Coord(0, 0)))
    assert {cell.anchor for cell, _ in square} == {
        (0, -1),
        (1, 0),
        (0, 1),
        (-1, 0),
    }

    hexagon = lattice.adjacent_cells(Cell(HEXAGONAL, Coord(0, 0)))
    assert len(hexagon) == 6

    for cell, (u, v) in hexagon:
        assert {u, v} <= set(lattice.pixel_corners(cell))


@given(small, small, st.integers(0, 5))
def test_rotations_preserve_the_lattice(a: int, b: int, times: int) -> None:
    assert lattice.rotate90(lattice.rotate90((a, b), times), 4 - times) == (
        a,
        b,
    )
    assert lattice.rotate60(lattice.rotate60((a, b), times), 6 - times) == (
        a,
        b,
    )

    # Rotations around a hexagon center keep hexagonal vertices
    assert lattice.is_vertex(HEXAGONAL, lattice.rotate60((a, b), 2)) == (
        lattice.is_vertex(HEXAGONAL, (a, b))
    )


def test_rotate60_moves_neighbors_around() -> None:
    assert lattice.rotate60((1, 0)) == (0, 1)
    assert lattice.rotate60((0, 1)) == (-1, 1)
    assert lattice.rotate90((1, 0)) == (0, 1)
    assert lattice.translate((1, 2), (3, 4)) == (4, 6)
