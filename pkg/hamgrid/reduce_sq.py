"""
Compiles planar monotone rectilinear 3SAT embeddings into polygonal square
grid graphs.

The variable gadgets sit in a row along the top of one big loop of wire, each
with a one-enforcer in front of it. An extra one-enforcer on the return wire
keeps the loop's zigzag consistent when the number of variables is odd.

Every variable gadget is a ring whose top and bottom branches are passed in
opposite modes: a two-enforced top branch means true. Positive clauses sit
above the loop and reach down to the top branches with two-enforced legs.
Negative clauses hang inside the loop and reach up to the bottom branches.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import pairwise
from typing import *  # type: ignore

import uniserde

from . import gadgets
from .errors import (
    CertificateInconsistencyError,
    CompilerBugError,
    LayoutError,
    ParameterError,
)
from .gadgets.template import GadgetTemplate, Port, rungs, wire_mode
from .grid_graph import GridGraph, classify
from .ham_core import CycleCertificate
from .lattice import Cell, Coord, GridKind
from .regions import CellRegion
from .sat import Assignment, SatEmbedding, solve_formula_brute_force

__all__ = [
    "GADGET_NAMES",
    "VariableRegion",
    "ClauseRegion",
    "SquareCorrespondence",
    "gadget",
    "compile",
    "extract_assignment",
    "solve_formula_brute_force",
]


_logger = logging.getLogger(__name__)


SQUARE = GridKind.SQUARE

GADGET_NAMES = (
    "wire",
    "turn",
    "one_enforcer",
    "two_enforcer",
    "variable",
    "clause",
)

# Geometry of the compiled layout, in cells
VARIABLE_BOTTOM = -2
VARIABLE_TOP = 3
LEG_PITCH = 4
LEVEL_PITCH = 8
FIRST_VARIABLE = 8
VARIABLE_GAP = 9
ENFORCER_LEAD = 5


def _cells(coords: Iterable[tuple[int, int]]) -> frozenset[Cell]:
    return frozenset(Cell(SQUARE, Coord(*c)) for c in coords)


def _port(id: int, x: int, y: int, direction: int) -> Port:
    return Port(id, Cell(SQUARE, Coord(x, y)), direction)


def _wire(length: int) -> GadgetTemplate:
    if length < 1:
        raise ParameterError("Wires need at least one pixel")

    return GadgetTemplate(
        name="wire",
        kind=SQUARE,
        cells=_cells((x, 0) for x in range(length)),
        ports=(_port(0, -1, 0, 2), _port(1, length, 0, 0)),
        stub_length=2,
        contract=gadgets.contracts.through_wire,
    )


def _ring(width: int) -> list[tuple[int, int]]:
    return [
        (x, y)
        for x in range(width)
        for y in range(VARIABLE_BOTTOM, VARIABLE_TOP + 1)
        if x in (0, width - 1) or y in (VARIABLE_BOTTOM, VARIABLE_TOP)
    ]


def _variable(width: int) -> GadgetTemplate:
    if width % 2 == 0:
        raise ParameterError(
            f"Variable gadgets need an odd width, but {width} was given"
        )

    if width < 7:
        raise ParameterError(
            f"Variable gadgets are at least 7 cells wide, not {width}"
        )

    return GadgetTemplate(
        name="variable",
        kind=SQUARE,
        cells=_cells(_ring(width)),
        ports=(_port(0, -1, 0, 2), _port(1, width, 0, 0)),
        stub_length=3,
        contract=gadgets.contracts.variable,
    )


def _clause_cells(
    legs: Sequence[int],
    height: int,
    bumps: Sequence[int],
    bottom: int,
) -> set[tuple[int, int]]:
    cells: set[tuple[int, int]] = set()

    for x, bump in zip(legs, bumps):
        cells.update((x, y) for y in range(bottom, height + 1))
        cells.update({(x - 1, bump), (x + 1, bump)})

    cells.update((x, height) for x in range(min(legs), max(legs) + 1))
    return cells


def _clause(
    legs: tuple[int, int, int],
    height: int,
    bumps: tuple[int, int, int] | None,
) -> GadgetTemplate:
    if any(b - a < LEG_PITCH for a, b in zip(legs, legs[1:])):
        raise ParameterError(
            f"Clause legs must be at least {LEG_PITCH} cells apart and in"
            f" increasing order, not {legs}"
        )

    if bumps is None:
        bumps = (6, 8, 6)

    if any(not VARIABLE_TOP + 3 <= b <= height - 3 for b in bumps):
        raise ParameterError(
            f"The two-enforcer bumps must sit between rows"
            f" {VARIABLE_TOP + 3} and {height - 3}"
        )

    return GadgetTemplate(
        name="clause",
        kind=SQUARE,
        cells=_cells(_clause_cells(legs, height, bumps, VARIABLE_TOP + 2)),
        ports=tuple(
            _port(ii, x, VARIABLE_TOP + 1, 3) for ii, x in enumerate(legs)
        ),
        stub_length=2,
        contract=gadgets.contracts.clause,
    )


def gadget(
    name: str,
    *,
    length: int = 5,
    width: int = 7,
    legs: tuple[int, int, int] = (3, 7, 11),
    height: int = 11,
    bumps: tuple[int, int, int] | None = None,
) -> GadgetTemplate:
    """
    Returns one of the square gadgets, with stubs attached.

    Turns and both enforcers are fixed geometries shipped as resources. Wires
    take a `length`, variable gadgets a `width` and clauses the x positions of
    their `legs`, the row of their horizontal segment (`height`) and the rows
    of their two-enforcer `bumps`. Clause coordinates are relative to the row
    of the variable gadget's top branch, which lies at y = 3.

    The returned template isn't validated. Call `validate` on it to check its
    contract.


    ## Raises

    `ParameterError`: If the name is unknown, or the parameters describe an
        invalid gadget, e.g. a variable gadget of even width.
    """
    if name == "wire":
        return _wire(length)

    if name in ("turn", "one_enforcer", "two_enforcer"):
        return gadgets.load(name)

    if name == "variable":
        return _variable(width)

    if name == "clause":
        return _clause(legs, height, bumps)

    raise ParameterError(
        f"Unknown gadget `{name}`. Expected one of {', '.join(GADGET_NAMES)}"
    )


@dataclass
class VariableRegion(uniserde.Serde):
    """
    Where a variable gadget ended up.

    ## Attributes

    `id`: The 1-based variable index.

    `x`: The column of the ring's left side.

    `width`: The ring's width.

    `top_wire`, `bottom_wire`: The interior cells of the ring's top and
        bottom branches, left to right.
    """

    id: int
    x: int
    width: int
    top_wire: list[list[int]]
    bottom_wire: list[list[int]]

    def top_cells(self) -> list[Cell]:
        return [Cell(SQUARE, Coord(a, b)) for a, b in self.top_wire]


@dataclass
class ClauseRegion(uniserde.Serde):
    """
    Where a clause gadget ended up.

    ## Attributes

    `id`: The clause's index in the embedding.

    `positive`: Whether the clause sits above the loop.

    `anchors`: All cells of the clause, legs included.

    `junctions`: For each literal, the leg cell touching its variable's
        branch.
    """

    id: int
    positive: bool
    anchors: list[list[int]]
    junctions: list[list[int]]


@dataclass
class SquareCorrespondence(uniserde.Serde):
    """
    Which pixels of a compiled instance came from which part of the formula.

    ## Attributes

    `variables`: One region per variable, in order.

    `clauses`: One region per clause, in input order.

    `enforcers`: The cells of every one-enforcer on the main loop, left to
        right.

    `parity`: One `[x, parity]` pair per one-enforcer, in loop order: the
        enforcer's x coordinate and the parity of the wire leading up to it
        from the previous enforcer. The last pair belongs to the return wire,
        which wraps around to the first enforcer. Every pair of a consistent
        loop ends in 0.

    `spacing`: The spacing the layout succeeded with.
    """

    variables: list[VariableRegion]
    clauses: list[ClauseRegion]
    enforcers: list[CellRegion] = field(default_factory=list)
    parity: list[list[int]] = field(default_factory=list)
    spacing: int = 0

    def variable(self, id: int) -> VariableRegion:
        for region in self.variables:
            if region.id == id:
                return region

        raise KeyError(id)


def _enforcer_ports(x: int) -> tuple[int, int]:
    # The straight part covers x - 1 to x + 2, the bump hangs below x, x + 1
    return x - 2, x + 3


def _run(first: int, second: int) -> int:
    """
    The number of steps between two consecutive one-enforcers on the top row.
    Both pin the rail the zigzag uses at their ports, and the rail alternates
    with every step in between, so a consistent run is even.
    """
    return _enforcer_ports(second)[0] - _enforcer_ports(first)[1]


class _Canvas:
    """
    Collects cells, remembering which feature claimed each one.
    """

    def __init__(self) -> None:
        self.owner: dict[tuple[int, int], str] = {}

    def add(self, cells: Iterable[tuple[int, int]], owner: str) -> None:
        for c in cells:
            previous = self.owner.get(c)

            if previous is not None and previous != owner:
                raise LayoutError(
                    f"The {owner} and the {previous} both claim the cell"
                    f" {c}"
                )

            self.owner[c] = owner

    def remove(self, cells: Iterable[tuple[int, int]]) -> None:
        for c in cells:
            self.owner.pop(c, None)


def _layout(
    e: SatEmbedding,
    spacing: int,
) -> tuple[set[Cell], SquareCorrespondence]:
    slots = e.leg_slots()
    above = e.slot_counts(True)
    below = e.slot_counts(False)

    widths: dict[int, int] = {}
    xs: dict[int, int] = {}
    x = FIRST_VARIABLE

    for v in e.variables:
        legs = max(above[v], below[v])
        width = max(7, LEG_PITCH * legs + 3)
        width += 1 - width % 2
        widths[v], xs[v] = width, x

        x += width + VARIABLE_GAP + spacing
        x += _run(xs[v] - ENFORCER_LEAD, x - ENFORCER_LEAD) % 2

    last = e.variable_count
    length = xs[last] + widths[last] + VARIABLE_GAP
    depth = max(8, LEVEL_PITCH * e.max_level(False) + 6)

    canvas = _Canvas()
    canvas.add(((x, 0) for x in range(length)), "main loop")
    canvas.add(((x, -depth) for x in range(length)), "main loop")
    canvas.add(
        (
            (x, y)
            for x in (0, length - 1)
            for y in range(-depth + 1, 0)
        ),
        "main loop",
    )

    variables: list[VariableRegion] = []

    for v in e.variables:
        x, width = xs[v], widths[v]
        canvas.remove((c, 0) for c in range(x, x + width))

        ring = _variable(width).instantiate((x, 0))
        canvas.add((c.anchor for c in ring.cells), f"variable x{v}")

        variables.append(
            VariableRegion(
                id=v,
                x=x,
                width=width,
                top_wire=[
                    [c, VARIABLE_TOP] for c in range(x + 1, x + width - 1)
                ],
                bottom_wire=[
                    [c, VARIABLE_BOTTOM] for c in range(x + 1, x + width - 1)
                ],
            )
        )

    enforcer_xs = [xs[v] - ENFORCER_LEAD for v in e.variables]
    parity = [
        [second, _run(first, second) % 2]
        for first, second in pairwise(enforcer_xs)
    ]

    # Detours through the variable rings are an even number of cells longer
    # than the straight row, so the loop is as long as its rectangle
    loop_cells = 2 * length + 2 * (depth - 1)

    def returning() -> int:
        span = (
            _enforcer_ports(enforcer_xs[-1])[1]
            - _enforcer_ports(enforcer_xs[0])[0]
        )
        return loop_cells - span

    if returning() % 2:
        extra = xs[last] + widths[last] + 3
        extra += _run(enforcer_xs[-1], extra) % 2

        parity.append([extra, _run(enforcer_xs[-1], extra) % 2])
        enforcer_xs.append(extra)

        _logger.debug(f"Added a one-enforcer for parity at x = {extra}")

    parity.append([enforcer_xs[0], returning() % 2])

    if any(p for _, p in parity):
        raise CompilerBugError(
            f"The main loop's zigzag is inconsistent: {parity}"
        )

    enforcer = gadgets.load("one_enforcer")
    enforcers: list[CellRegion] = []

    for x0 in enforcer_xs:
        # The enforcer's bump hangs below the loop's top row
        placed = enforcer.instantiate((x0 - 1, 0))
        bump = [c for c in placed.cells if c.anchor.b < 0]
        canvas.add((c.anchor for c in bump), "main loop")
        enforcers.append(CellRegion.from_cells(len(enforcers), bump))

    clauses: list[ClauseRegion] = []

    for ii, clause in enumerate(e.clauses):
        legs = [
            xs[v] + 3 + LEG_PITCH * slot
            for v, slot in zip(clause.variables, slots[ii])
        ]
        bumps = [6 if slot % 2 == 0 else 8 for slot in slots[ii]]
        height = VARIABLE_TOP + LEVEL_PITCH * clause.level
        cells = _clause_cells(legs, height, bumps, VARIABLE_TOP + 1)
        junctions = [(x, VARIABLE_TOP + 1) for x in legs]

        if not clause.positive:
            cells = {(x, 1 - y) for x, y in cells}
            junctions = [(x, 1 - y) for x, y in junctions]

        canvas.add(cells, f"clause {ii + 1}")
        clauses.append(
            ClauseRegion(
                id=ii,
                positive=clause.positive,
                anchors=sorted([x, y] for x, y in cells),
                junctions=[[x, y] for x, y in junctions],
            )
        )

    corr = SquareCorrespondence(
        variables=variables,
        clauses=clauses,
        enforcers=enforcers,
        parity=parity,
        spacing=spacing,
    )

    return {Cell(SQUARE, Coord(*c)) for c in canvas.owner}, corr


def compile(
    e: SatEmbedding,
    *,
    spacing: int = 4,
    max_spacing: int = 64,
) -> tuple[GridGraph, SquareCorrespondence]:
    """
    Compiles an embedding into a polygonal square grid graph, which is
    Hamiltonian exactly if the formula is satisfiable.

    If features collide the layout is retried with doubled spacing, up to
    `max_spacing`.


    ## Raises

    `PlanarityError`: If the embedding isn't planar.

    `LayoutError`: If the features still collide at the maximum spacing.

    `CompilerBugError`: If the result isn't a connected polygonal grid graph
        with minimum degree 2.
    """
    e.validate()

    if spacing < 0:
        raise ParameterError("The spacing can't be negative")

    while True:
        try:
            cells, corr = _layout(e, spacing)
            break
        except LayoutError:
            if spacing >= max_spacing:
                raise

            _logger.debug(f"Layout failed at spacing {spacing}, retrying")
            spacing = min(max(1, 2 * spacing), max_spacing)

    g = GridGraph.from_cells(SQUARE, cells)
    report = classify(g)

    if not (report.polygonal and report.connected and report.min_degree_ok):
        raise CompilerBugError(
            f"The compiled instance doesn't classify as expected: connected"
            f" {report.connected}, polygonal {report.polygonal}, minimum"
            f" degree at least 2 {report.min_degree_ok}"
        )

    _logger.debug(
        f"Compiled {e.variable_count} variables and {len(e.clauses)} clauses"
        f" into {len(g)} grid vertices at spacing {spacing}"
    )

    return g, corr


def extract_assignment(
    corr: SquareCorrespondence,
    cert: CycleCertificate,
) -> Assignment:
    """
    Reads a satisfying assignment off a Hamiltonian cycle of a compiled
    instance: a variable is true exactly if the cycle passes its gadget's top
    branch two-enforced.


    ## Raises

    `CertificateInconsistencyError`: If a top branch is passed in neither
        mode, which can't happen for a valid Hamiltonian cycle.
    """
    values: dict[int, bool] = {}

    for region in corr.variables:
        used = [e in cert.edges for e in rungs(region.top_cells())]
        mode = wire_mode(used)

        if mode is None:
            raise CertificateInconsistencyError(
                f"The cycle passes the top branch of x{region.id} in neither"
                f" wire mode"
            )

        values[region.id] = mode == "two"

    return Assignment(values)
