"""
Polynomial-time Hamiltonicity for thin polygonal grid graphs.

Square graphs are always Hamiltonian: pixels are removed from cycles of the
pixel graph until it's a tree, and the perimeter of that tree is the cycle.

Hexagonal graphs reduce to Tree-Residue Vertex-Breaking on the pixel graph,
with exactly the degree-3 pixels breakable. If some breaking set yields a tree,
the perimeter of the unbroken pixels is a Hamiltonian cycle, and otherwise
there is none.

Triangular graphs are answered by the exact oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import *  # type: ignore

from ordered_set import OrderedSet

from . import grid_graph, ham_core, trvb
from .errors import (
    BudgetExhaustedError,
    ClassificationError,
    InvariantViolation,
    NoCycleError,
    ThinnessViolation,
)
from .grid_graph import GridGraph, PixelGraph
from .ham_core import CycleCertificate, HamResult
from .lattice import Cell, Coord, GridKind

__all__ = [
    "PixelCycleWitness",
    "HexTrvbCorrespondence",
    "solve_square",
    "find_removable_pixel",
    "hex_to_trvb",
    "solve_hex",
    "solve_triangular",
    "pixel_tree_condition",
]


_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PixelCycleWitness:
    """
    A pixel which can be dropped from a cycle of pixels without disconnecting
    the remaining pixels.

    ## Attributes

    `cycle`: The cycle of pixels, in order.

    `removable`: A pixel of the cycle with exactly two neighboring pixels in
        the whole graph, on opposite sides of it.
    """

    cycle: list[Cell]
    removable: Cell


@dataclass(frozen=True)
class HexTrvbCorrespondence:
    """
    Relates the vertices of a TRVB instance to the pixels they stand for.

    ## Attributes

    `pixel_of_vertex`: The pixel each TRVB vertex stands for.

    `breakable_ids`: The vertices of pixels with three neighboring pixels.
    """

    pixel_of_vertex: dict[int, Cell]
    breakable_ids: frozenset[int]


def _require(
    g: GridGraph,
    kind: GridKind,
    *,
    thin: bool = True,
    polygonal: bool = True,
) -> grid_graph.ClassificationReport:
    report = grid_graph.classify(g)
    problems: list[str] = []

    if g.kind is not kind:
        problems.append(f"is {g.kind.value} rather than {kind.value}")

    if not report.connected:
        problems.append("is not connected")

    if not report.min_degree_ok:
        problems.append("has a vertex of degree below 2")

    if thin and not report.thin:
        problems.append("is not thin")

    if polygonal and not report.polygonal:
        problems.append("is not polygonal")

    if problems:
        raise ClassificationError(
            "The graph " + ", ".join(problems),
            report,
        )

    return report


def _find_cycle(residual: PixelGraph) -> list[Cell] | None:
    """
    Finds a cycle of the pixel graph using depth first search, or returns
    `None` if the pixel graph is a forest.
    """
    parent: dict[Cell, Cell | None] = {}

    for root in residual.nodes:
        if root in parent:
            continue

        parent[root] = None
        stack: list[tuple[Cell, Iterator[Cell]]] = [
            (root, iter(residual.adjacency[root]))
        ]

        while stack:
            cell, neighbors = stack[-1]
            advanced = False

            for other in neighbors:
                if other == parent[cell]:
                    continue

                if other in parent:
                    # Back edge. Only ancestors are still on the stack
                    on_stack = [c for c, _ in stack]

                    if other in on_stack:
                        return on_stack[on_stack.index(other) :]

                    continue

                parent[other] = cell
                stack.append((other, iter(residual.adjacency[other])))
                advanced = True
                break

            if not advanced:
                stack.pop()

    return None


def _chordless(cycle: list[Cell], residual: PixelGraph) -> list[Cell]:
    """
    Shortens a cycle along its chords until none are left.
    """
    while True:
        position = {cell: ii for ii, cell in enumerate(cycle)}
        length = len(cycle)
        chord: tuple[int, int] | None = None

        for ii, cell in enumerate(cycle):
            for other in residual.adjacency[cell]:
                jj = position.get(other)

                if jj is None:
                    continue

                if (jj - ii) % length in (1, length - 1):
                    continue

                chord = (min(ii, jj), max(ii, jj))
                break

            if chord is not None:
                break

        if chord is None:
            return cycle

        ii, jj = chord
        cycle = cycle[ii : jj + 1]


def find_removable_pixel(
    g: GridGraph,
    residual: PixelGraph,
) -> PixelCycleWitness:
    """
    Finds a pixel on a cycle of the residual pixel graph whose only neighbors in
    the whole graph are the two pixels directly above and below it.

    Takes any chordless cycle, goes to its leftmost column and starts at the
    bottom-most cycle pixel `p(0, 0)` there. In a thin graph the three pixels
    above it are on the cycle, the pixels right of `p(0, 1)` and `p(0, 2)` are
    missing, and at least one of the pixels left of them is missing too. That
    one's right neighbor is the result.


    ## Raises

    `NoCycleError`: If the residual pixel graph is acyclic.

    `InvariantViolation`: If the construction fails, which means the graph
        isn't thin.
    """
    cycle = _find_cycle(residual)

    if cycle is None:
        raise NoCycleError("The residual pixel graph contains no cycle")

    cycle = _chordless(cycle, residual)
    on_cycle = set(cycle)
    in_graph = set(g.face_decomposition.pixels)

    column = min(cell.anchor.a for cell in cycle)
    bottom = min(cell.anchor.b for cell in cycle if cell.anchor.a == column)

    def pixel(dx: int, dy: int) -> Cell:
        return Cell(GridKind.SQUARE, Coord(column + dx, bottom + dy))

    for dy in (1, 2, 3):
        if pixel(0, dy) not in on_cycle:
            raise InvariantViolation(
                f"{pixel(0, dy)!r} should be on the cycle of pixels, but"
                f" isn't. Is the graph thin?"
            )

    for dy in (1, 2):
        if pixel(1, dy) in in_graph:
            raise InvariantViolation(
                f"{pixel(1, dy)!r} should not be a pixel, but is. Is the graph"
                f" thin?"
            )

    for dy in (1, 2):
        if pixel(-1, dy) not in in_graph:
            return PixelCycleWitness(cycle, pixel(0, dy))

    raise InvariantViolation(
        f"Both {pixel(-1, 1)!r} and {pixel(-1, 2)!r} are pixels. Is the graph"
        f" thin?"
    )


def solve_square(g: GridGraph) -> CycleCertificate:
    """
    Finds a Hamiltonian cycle of a thin polygonal square grid graph. Such a
    cycle always exists.

    While the remaining pixels contain a cycle, a removable pixel of that cycle
    is dropped. The perimeter of the remaining tree of pixels is the result.


    ## Raises

    `ClassificationError`: If the graph isn't a connected, thin, polygonal
        square grid graph with minimum degree 2.

    `InvariantViolation`: If no removable pixel can be found, or the result
        fails verification. Neither can happen for valid inputs.
    """
    _require(g, GridKind.SQUARE)

    full = grid_graph.pixel_graph(g)
    removed: OrderedSet[Cell] = OrderedSet()
    residual = full

    while _find_cycle(residual) is not None:
        witness = find_removable_pixel(g, residual)
        cell = witness.removable

        # Removed pixels are never adjacent
        for other in full.adjacency[cell]:
            if other in removed:
                raise InvariantViolation(
                    f"{cell!r} is adjacent to the already removed pixel"
                    f" {other!r}"
                )

        removed.add(cell)
        residual = full.restricted(c for c in full.nodes if c not in removed)

    _logger.debug(
        f"Removed {len(removed)} of {len(full.nodes)} pixels to break all"
        f" cycles"
    )

    cert = CycleCertificate(
        frozenset(grid_graph.region_boundary(g, residual.nodes))
    )
    verdict = ham_core.verify_cycle(g, cert)

    if not verdict:
        raise InvariantViolation(
            f"The perimeter of the pixel tree is not a Hamiltonian cycle:"
            f" {verdict.detail}"
        )

    return cert


def hex_to_trvb(
    g: GridGraph,
) -> tuple[trvb.Multigraph, HexTrvbCorrespondence] | None:
    """
    Converts a thin polygonal hexagonal grid graph into a Tree-Residue
    Vertex-Breaking instance.

    The instance is the pixel graph, with a vertex breakable exactly if its
    pixel has three neighboring pixels. Vertices are numbered in canonical
    pixel order, and the rotation system follows the sides of each pixel
    counterclockwise.

    Returns `None` if the graph is a single pixel, which is trivially
    Hamiltonian.


    ## Raises

    `ClassificationError`: If the graph isn't a connected, thin, polygonal
        hexagonal grid graph with minimum degree 2.

    `ThinnessViolation`: If a pixel has four or more neighboring pixels.
    """
    report = _require(g, GridKind.HEXAGONAL)

    if report.single_pixel:
        return None

    pixels = grid_graph.pixel_graph(g)
    vertex_of_pixel = {cell: ii for ii, cell in enumerate(pixels.nodes)}

    edges: list[tuple[int, int]] = []
    edge_of_pair: dict[frozenset[Cell], int] = {}
    rotation: dict[int, list[int]] = {}

    for cell in pixels.nodes:
        neighbors = pixels.adjacency[cell]

        if len(neighbors) >= 4:
            raise ThinnessViolation(
                f"{cell!r} has {len(neighbors)} neighboring pixels. Pixels of"
                f" thin hexagonal graphs have at most 3"
            )

        order: list[int] = []

        for other in neighbors:
            pair = frozenset((cell, other))

            if pair not in edge_of_pair:
                edge_of_pair[pair] = len(edges)
                edges.append((vertex_of_pixel[cell], vertex_of_pixel[other]))

            order.append(edge_of_pair[pair])

        rotation[vertex_of_pixel[cell]] = order

    breakable = {
        vertex_of_pixel[cell]: len(pixels.adjacency[cell]) == 3
        for cell in pixels.nodes
    }

    m = trvb.Multigraph.from_edges(breakable, edges, rotation)
    corr = HexTrvbCorrespondence(
        pixel_of_vertex={ii: cell for cell, ii in vertex_of_pixel.items()},
        breakable_ids=frozenset(v for v, flag in breakable.items() if flag),
    )

    return m, corr


def pixel_tree_condition(g: GridGraph, tree: Iterable[Cell]) -> bool:
    """
    Checks whether a set of pixels of a thin hexagonal graph has a Hamiltonian
    perimeter: it must be connected and acyclic, contain every pixel with fewer
    than three neighboring pixels, and contain at least one pixel out of every
    pair of adjacent pixels with three neighbors each.
    """
    pixels = grid_graph.pixel_graph(g)
    members = set(tree)

    if not members or not members <= set(pixels.nodes):
        return False

    sub = pixels.restricted(members)

    if _find_cycle(sub) is not None:
        return False

    # Connected, via a flood fill
    first = next(iter(sub.nodes))
    seen = {first}
    stack = [first]

    while stack:
        cell = stack.pop()

        for other in sub.adjacency[cell]:
            if other not in seen:
                seen.add(other)
                stack.append(other)

    if len(seen) != len(members):
        return False

    for cell in pixels.nodes:
        degree = len(pixels.adjacency[cell])

        if degree < 3 and cell not in members:
            return False

        if degree == 3 and cell not in members:
            for other in pixels.adjacency[cell]:
                if len(pixels.adjacency[other]) == 3 and other not in members:
                    return False

    return True


def solve_hex(
    g: GridGraph,
    *,
    budget: int = 10_000_000,
) -> CycleCertificate | None:
    """
    Decides Hamiltonicity of a thin polygonal hexagonal grid graph, returning a
    Hamiltonian cycle or `None` if there is none.


    ## Parameters

    `g`: The graph to solve.

    `budget`: The search budget for the Tree-Residue Vertex-Breaking step.


    ## Raises

    `ClassificationError`: If the graph isn't a connected, thin, polygonal
        hexagonal grid graph.

    `BudgetExhaustedError`: If the TRVB search runs out of budget.

    `InvariantViolation`: If the reconstructed cycle fails verification.
    """
    converted = hex_to_trvb(g)

    if converted is None:
        (cell,) = g.face_decomposition.pixels
        boundary = grid_graph.region_boundary(g, [cell])
        return CycleCertificate(frozenset(boundary))

    m, corr = converted
    result = trvb.solve(m, budget=budget)

    if result.status == "exhausted":
        raise BudgetExhaustedError(
            f"The TRVB search gave up after {result.expansions} expansions"
        )

    if result.status == "no":
        _logger.debug("No breaking set exists, the graph is not Hamiltonian")
        return None

    assert result.breaking_set is not None
    broken = {corr.pixel_of_vertex[v] for v in result.breaking_set}

    for v in result.breaking_set:
        for edge_id in m.rotation[v]:  # type: ignore
            a, b = m.edges[edge_id]
            other = b if a == v else a

            if other in result.breaking_set:
                raise InvariantViolation(
                    f"The breaking set contains the adjacent vertices {v} and"
                    f" {other}"
                )

    tree = [cell for cell in g.face_decomposition.pixels if cell not in broken]

    if not pixel_tree_condition(g, tree):
        raise InvariantViolation(
            "The unbroken pixels don't satisfy the pixel tree condition"
        )

    cert = CycleCertificate(frozenset(grid_graph.region_boundary(g, tree)))
    verdict = ham_core.verify_cycle(g, cert)

    if not verdict:
        raise InvariantViolation(
            f"The perimeter of the pixel tree is not a Hamiltonian cycle:"
            f" {verdict.detail}"
        )

    return cert


def solve_triangular(
    g: GridGraph,
    *,
    budget: int = ham_core.DEFAULT_BUDGET,
) -> HamResult:
    """
    Decides Hamiltonicity of a thin polygonal triangular grid graph using the
    exact oracle. A polynomial algorithm exists for this class, but isn't
    implemented here.


    ## Raises

    `ClassificationError`: If the graph isn't a connected, thin, polygonal
        triangular grid graph.
    """
    _require(g, GridKind.TRIANGULAR)
    return ham_core.find_hamiltonian(g, budget)
