"""
Gadget templates: fixed pixel geometries with wire stubs attached at their
ports, together with the behavioral contract their local solutions must meet.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import *  # type: ignore

from .. import lattice
from ..errors import ParameterError, TemplateInvalidError
from ..grid_graph import Edge, GridGraph, edge_key, make_edge
from ..ham_core import LocalSolutionSpec, enumerate_local_solutions
from ..lattice import Cell, Coord, GridKind

__all__ = [
    "STEPS",
    "Port",
    "GadgetTemplate",
    "LocalSolutions",
    "Contract",
    "cell_step",
    "rungs",
    "wire_mode",
]


_logger = logging.getLogger(__name__)


# Directions between adjacent cells, counterclockwise starting at +x. Ports
# refer to these by index.
STEPS: dict[GridKind, tuple[Coord, ...]] = {
    GridKind.SQUARE: (
        Coord(1, 0),
        Coord(0, 1),
        Coord(-1, 0),
        Coord(0, -1),
    ),
    GridKind.HEXAGONAL: (
        Coord(1, 1),
        Coord(-1, 2),
        Coord(-2, 1),
        Coord(-1, -1),
        Coord(1, -2),
        Coord(2, -1),
    ),
}


def cell_step(kind: GridKind, direction: int) -> Coord:
    """
    Returns the anchor offset between a cell and its neighbor in the given
    direction.


    ## Raises

    `ParameterError`: If the lattice has no uniform cell steps, or the
        direction is out of range.
    """
    try:
        steps = STEPS[kind]
    except KeyError:
        raise ParameterError(
            f"Gadgets on the {kind.value} lattice aren't supported"
        ) from None

    if not 0 <= direction < len(steps):
        raise ParameterError(
            f"Direction {direction} is out of range for the {kind.value}"
            f" lattice"
        )

    return steps[direction]


def rungs(cells: Sequence[Cell]) -> list[Edge]:
    """
    The sides shared by consecutive cells of a straight run.
    """
    result: list[Edge] = []

    for first, second in zip(cells, cells[1:]):
        shared = set(lattice.pixel_corners(first)) & set(
            lattice.pixel_corners(second)
        )
        u, v = sorted(shared)
        result.append(make_edge(u, v))

    return result


def wire_mode(used: Sequence[bool]) -> Literal["one", "two"] | None:
    """
    Decides how a cycle passes through a straight wire, given which of the
    wire's rungs it uses. Rungs are the sides shared by consecutive pixels,
    listed in order along the wire.

    A one-enforced wire zigzags over every rung. In a two-enforced wire the
    cycle runs along both rails, possibly breaking away into U-turns over
    pairs of rungs. Returns `None` if the pattern is neither.
    """
    if all(used):
        return "one"

    # Walk along the wire tracking which side of the cycle each pixel is on.
    # Two consecutive outside pixels would leave a rail vertex uncovered.
    for inside in (True, False):
        sides = [inside]

        for rung in used:
            if rung:
                inside = not inside

            sides.append(inside)

        if not any(
            not a and not b for a, b in zip(sides, sides[1:])
        ):
            return "two"

    return None


@dataclass(frozen=True)
class Port:
    """
    Where a wire attaches to a gadget.

    ## Attributes

    `id`: The port's identifier, unique within its gadget.

    `cell`: The first stub cell, which shares a side with the gadget body.

    `direction`: The index into `STEPS` pointing away from the body.
    """

    id: int
    cell: Cell
    direction: int


Contract = Callable[["LocalSolutions"], None]


@dataclass(frozen=True)
class GadgetTemplate:
    """
    A gadget geometry with wire stubs attached to its ports.

    ## Attributes

    `name`: A human-readable name, also used to look up the contract of
        gadgets loaded from resource files.

    `kind`: The lattice the gadget lives on.

    `cells`: The body cells, without the stubs.

    `ports`: All ports, ordered counterclockwise around the body.

    `stub_length`: How many cells each stub extends away from its port.

    `contract`: Checks the gadget's local solutions, raising
        `TemplateInvalidError` if they don't behave as advertised.
    """

    name: str
    kind: GridKind
    cells: frozenset[Cell]
    ports: tuple[Port, ...]
    stub_length: int = 2
    contract: Contract | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.stub_length < 1:
            raise ParameterError("Stubs must be at least one cell long")

        ids = [port.id for port in self.ports]
        if len(set(ids)) != len(ids):
            raise ParameterError(
                f"The ports of gadget `{self.name}` have duplicate ids"
            )

        for cell in self.cells:
            if cell.kind is not self.kind:
                raise ParameterError(
                    f"Gadget `{self.name}` is {self.kind.value}, but contains"
                    f" the cell {cell}"
                )

        stub_cells = {c for cells in self.stubs().values() for c in cells}
        overlap = self.cells & stub_cells
        if overlap:
            raise ParameterError(
                f"The stubs of gadget `{self.name}` overlap its body at"
                f" {sorted(overlap)}"
            )

    def port(self, id: int) -> Port:
        for port in self.ports:
            if port.id == id:
                return port

        raise KeyError(id)

    def stub(self, port: Port) -> list[Cell]:
        """
        The stub cells of a port, starting next to the body.
        """
        step = cell_step(self.kind, port.direction)

        return [
            Cell(self.kind, port.cell.anchor + Coord(step.a * k, step.b * k))
            for k in range(self.stub_length)
        ]

    def stubs(self) -> dict[int, list[Cell]]:
        return {port.id: self.stub(port) for port in self.ports}

    def all_cells(self) -> set[Cell]:
        """
        The body and stub cells together.
        """
        result = set(self.cells)

        for cells in self.stubs().values():
            result.update(cells)

        return result

    @functools.cached_property
    def graph(self) -> GridGraph:
        return GridGraph.from_cells(self.kind, self.all_cells())

    @functools.cached_property
    def window(self) -> frozenset[Coord]:
        """
        The vertices which must be covered by every local solution.

        For square gadgets this is every corner of a body cell, so the stubs
        stay free to turn in either direction. Hexagonal stubs are included as
        well, apart from the far rung of every stub tip, where the rest of the
        wire would attach.
        """
        if self.kind is GridKind.SQUARE:
            return frozenset(
                corner
                for cell in self.cells
                for corner in lattice.pixel_corners(cell)
            )

        far: set[Coord] = set()
        for port in self.ports:
            tip = self.stub(port)[-1]
            step = cell_step(self.kind, port.direction)
            beyond = Cell(self.kind, tip.anchor + step)
            far.update(
                set(lattice.pixel_corners(tip))
                & set(lattice.pixel_corners(beyond))
            )

        return frozenset(v for v in self.graph.vertices if v not in far)

    def local_solutions(self, *, cap: int | None = None) -> LocalSolutions:
        """
        Enumerates every way a cycle cover can pass through the gadget with
        all ports open.
        """
        window = self.window
        spec = LocalSolutionSpec.with_ports(self.graph, window)
        solutions = enumerate_local_solutions(
            self.graph,
            spec,
            cap=len(window) if cap is None else cap,
        )

        _logger.debug(
            f"Gadget `{self.name}` has {len(solutions)} local solutions"
        )

        return LocalSolutions(self, solutions)

    def validate(self) -> LocalSolutions:
        """
        Enumerates the local solutions and checks them against the contract.


        ## Raises

        `TemplateInvalidError`: If the gadget has no contract, or its local
            solutions violate it.
        """
        if self.contract is None:
            raise TemplateInvalidError(
                f"Gadget `{self.name}` has no behavioral contract to validate"
                f" against"
            )

        result = self.local_solutions()
        self.contract(result)
        return result

    def instantiate(
        self,
        offset: tuple[int, int] = (0, 0),
        rotation: int = 0,
        *,
        mirror: bool = False,
    ) -> GadgetTemplate:
        """
        Returns a copy of the gadget placed elsewhere in the lattice.

        The gadget is first mirrored across the horizontal axis if requested,
        then rotated counterclockwise around the origin in steps of 90 degrees
        (square) or 60 degrees (hexagonal), and finally translated by
        `offset`.


        ## Raises

        `ParameterError`: If the transformed cells don't land on lattice
            cells, e.g. a hexagonal offset that isn't a center-to-center step.
        """
        kind = self.kind

        def linear(c: tuple[int, int]) -> Coord:
            a, b = c

            if kind is GridKind.SQUARE:
                if mirror:
                    b = -b

                return lattice.rotate90((a, b), rotation)

            if mirror:
                a, b = a + b, -b

            return lattice.rotate60((a, b), rotation)

        def place(cell: Cell) -> Cell:
            corners = [
                lattice.translate(linear(c), offset)
                for c in lattice.pixel_corners(cell)
            ]
            result = lattice.cell_of_corners(kind, corners)

            if result is None:
                raise ParameterError(
                    f"Placing gadget `{self.name}` at {tuple(offset)} doesn't"
                    f" align with the {kind.value} cells"
                )

            return result

        steps = STEPS[kind]
        ports = tuple(
            Port(
                id=port.id,
                cell=place(port.cell),
                direction=steps.index(linear(steps[port.direction])),
            )
            for port in self.ports
        )

        return GadgetTemplate(
            name=self.name,
            kind=kind,
            cells=frozenset(place(cell) for cell in self.cells),
            ports=ports,
            stub_length=self.stub_length,
            contract=self.contract,
        )


@dataclass(frozen=True)
class LocalSolutions:
    """
    The local solutions of a gadget, plus helpers for inspecting them.
    """

    template: GadgetTemplate
    solutions: list[frozenset[Edge]]

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self) -> Iterator[frozenset[Edge]]:
        return iter(self.solutions)

    def rails(self, port: Port) -> tuple[Edge, Edge]:
        """
        The two sides of a square port cell which run along the wire. These
        are the edges a cycle uses to pass between stub and body.
        """
        if self.template.kind is not GridKind.SQUARE:
            raise ParameterError("Only square wires have rails")

        a, b = port.cell.anchor

        if port.direction % 2 == 0:
            first = make_edge((a, b), (a + 1, b))
            second = make_edge((a, b + 1), (a + 1, b + 1))
        else:
            first = make_edge((a, b), (a, b + 1))
            second = make_edge((a + 1, b), (a + 1, b + 1))

        first, second = sorted((first, second), key=edge_key)
        return first, second

    def pattern(self, solution: frozenset[Edge], port: Port) -> str:
        """
        Which rails of a port a solution uses, as a string like `"10"`.
        """
        return "".join("1" if e in solution else "0" for e in self.rails(port))

    def patterns(self, solution: frozenset[Edge]) -> tuple[str, ...]:
        return tuple(self.pattern(solution, p) for p in self.template.ports)

    def mode(
        self,
        solution: frozenset[Edge],
        cells: Sequence[Cell],
    ) -> Literal["one", "two"] | None:
        """
        How a solution passes through a straight run of cells.
        """
        return wire_mode([e in solution for e in rungs(cells)])

    def region_groups(self, solution: frozenset[Edge]) -> int:
        """
        Counts how many separate regions the ports' first stub cells end up
        in, once the faces are merged across every window edge the solution
        doesn't use.
        """
        g = self.template.graph
        decomposition = g.face_decomposition
        window = self.template.window
        parent = list(range(len(decomposition.faces)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]

            return x

        for u, v in g.edges:
            if u not in window and v not in window:
                continue

            if (u, v) in solution:
                continue

            left = find(decomposition.edge_faces[(u, v)])
            right = find(decomposition.edge_faces[(v, u)])
            parent[left] = right

        def face_of(cell: Cell) -> int:
            corners = lattice.pixel_corners(cell)
            return decomposition.edge_faces[(corners[0], corners[1])]

        return len({find(face_of(port.cell)) for port in self.template.ports})
