"""
Random thin polygonal grid graphs, for tests and benchmarks.

Graphs are induced by the corners of a growing set of pixels. Growth only
adds pixels which keep every vertex on the boundary and don't make any cell
outside of the set a face of the induced graph.
"""

from __future__ import annotations

import logging
import random
from typing import *  # type: ignore

from . import lattice
from .errors import ParameterError
from .grid_graph import GridGraph, classify
from .lattice import Cell, Coord, GridKind

__all__ = ["Shape", "generate", "grow_pixels"]


_logger = logging.getLogger(__name__)


Shape = Literal["tree", "ring"]

MAX_ATTEMPTS = 100

# Three mutually adjacent hexagons. Their shared corner is the only vertex
# missing from the smallest hexagonal ring.
_HEX_HOLE = (Coord(0, 0), Coord(1, 1), Coord(2, -1))


def _origin(kind: GridKind) -> Cell:
    if kind is GridKind.TRIANGULAR:
        return Cell(kind, Coord(0, 0), "up")

    return Cell(kind, Coord(0, 0))


def _ring(kind: GridKind, rng: random.Random, max_pixels: int) -> set[Cell]:
    """
    A ring of pixels around a hole. The hole has to contain at least one
    lattice vertex, or the induced graph would fill it with pixels.
    """
    if kind is GridKind.HEXAGONAL:
        if max_pixels < 9:
            raise ParameterError("A hexagonal ring needs at least 9 pixels")

        hole = {Cell(kind, c) for c in _HEX_HOLE}

        return {
            other
            for cell in hole
            for other, _ in lattice.adjacent_cells(cell)
            if other not in hole
        }

    if kind is GridKind.SQUARE:
        if max_pixels < 12:
            raise ParameterError("A square ring needs at least 12 pixels")

        # The border of a w x h block has 2 (w + h) - 4 cells
        width = rng.randint(4, max_pixels // 2 - 2)
        height = rng.randint(4, max(4, (max_pixels + 4) // 2 - width))

        return {
            Cell(kind, Coord(x, y))
            for x in range(width)
            for y in range(height)
            if x in (0, width - 1) or y in (0, height - 1)
        }

    raise ParameterError(
        f"Ring growth isn't supported on the {kind.value} lattice"
    )


def _can_add(cells: set[Cell], candidate: Cell) -> bool:
    """
    Whether adding `candidate` keeps the induced graph thin and polygonal.
    """
    kind = candidate.kind
    after = cells | {candidate}

    def present(v: Coord) -> bool:
        return any(c in after for c in lattice.cells_at(kind, v))

    for corner in lattice.pixel_corners(candidate):
        around = lattice.cells_at(kind, corner)
        filled = [c in after for c in around]

        # Interior vertex
        if all(filled):
            return False

        # The pixels around a vertex must form a single fan
        runs = sum(
            1 for ii, here in enumerate(filled) if here and not filled[ii - 1]
        )

        if runs > 1:
            return False

        if any(c in cells for c in around):
            continue

        # The corner is new. No cell outside of the set may become a face,
        # and every new edge must lie on a pixel.
        for cell in around:
            if cell == candidate:
                continue

            if all(present(v) for v in lattice.pixel_corners(cell)):
                return False

        for other in lattice.neighbors(kind, corner):
            if not present(other):
                continue

            shared = [
                c
                for c in lattice.cells_at(kind, other)
                if c in after and corner in lattice.pixel_corners(c)
            ]

            if not shared:
                return False

    return True


def grow_pixels(
    cells: set[Cell],
    target: int,
    rng: random.Random,
) -> set[Cell]:
    """
    Adds random neighboring pixels to `cells` until it holds `target` pixels,
    or no pixel can be added without breaking thinness or polygonality.

    The set is modified in place and returned.
    """
    while len(cells) < target:
        frontier = {
            other
            for cell in cells
            for other, _ in lattice.adjacent_cells(cell)
            if other not in cells
        }
        candidates = [c for c in sorted(frontier) if _can_add(cells, c)]

        if not candidates:
            break

        cells.add(rng.choice(candidates))

    return cells


def generate(
    kind: GridKind,
    seed: int,
    min_pixels: int = 10,
    max_pixels: int = 200,
    shape: Shape = "tree",
) -> GridGraph:
    """
    Generates a random connected, thin, polygonal grid graph.

    The number of pixels is drawn uniformly from `min_pixels` to
    `max_pixels`. `"tree"` grows the pixels outward from a single one,
    `"ring"` starts from a ring of pixels around a hole. The same arguments
    always produce the same graph.


    ## Raises

    `ParameterError`: If the pixel bounds are invalid, ring growth is
        requested on the triangular lattice, or no valid graph was found
        within a fixed number of attempts.
    """
    if not 1 <= min_pixels <= max_pixels:
        raise ParameterError(
            f"Invalid pixel bounds: {min_pixels} to {max_pixels}"
        )

    rng = random.Random(seed)

    for attempt in range(MAX_ATTEMPTS):
        target = rng.randint(min_pixels, max_pixels)

        if shape == "ring":
            cells = _ring(kind, rng, max_pixels)
        else:
            cells = {_origin(kind)}

        cells = grow_pixels(cells, target, rng)

        if len(cells) < min_pixels:
            continue

        g = GridGraph.from_cells(kind, cells)
        report = classify(g)

        if (
            report.connected
            and report.min_degree_ok
            and report.thin
            and report.polygonal
            and report.pixel_count == len(cells)
        ):
            _logger.debug(
                f"Generated {len(cells)} {kind.value} pixels from seed {seed}"
                f" after {attempt + 1} attempt(s)"
            )
            return g

    raise ParameterError(
        f"Couldn't generate a thin polygonal {kind.value} graph with"
        f" {min_pixels} to {max_pixels} pixels from seed {seed}"
    )
