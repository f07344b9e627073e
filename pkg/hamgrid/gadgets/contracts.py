"""
Behavioral contracts of the shipped gadgets. Each contract receives a gadget's
local solutions and raises `TemplateInvalidError` if they misbehave.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import *  # type: ignore

from .. import lattice
from ..errors import TemplateInvalidError
from ..grid_graph import Edge, make_edge
from ..lattice import Cell
from .template import Contract, GadgetTemplate, LocalSolutions, cell_step

__all__ = [
    "CONTRACTS",
    "breakable_vertex",
    "boundary_forced",
    "through_wire",
    "one_enforcer",
    "two_enforcer",
    "variable",
    "clause",
]


ONE_RAIL = ("10", "01")


def _fail(sols: LocalSolutions, message: str) -> NoReturn:
    raise TemplateInvalidError(
        f"Gadget `{sols.template.name}` violates its contract: {message}"
    )


def breakable_vertex(sols: LocalSolutions) -> None:
    """
    Exactly two solutions: one joining the regions of all wires into one, and
    one keeping every wire's region apart.
    """
    if len(sols) != 2:
        _fail(sols, f"expected 2 local solutions, found {len(sols)}")

    groups = sorted(sols.region_groups(s) for s in sols)
    expected = [1, len(sols.template.ports)]

    if groups != expected:
        _fail(
            sols,
            f"the solutions split the wire regions into {groups} groups"
            f" instead of {expected}",
        )


def _boundary_edges(cells: Iterable[Cell]) -> set[Edge]:
    counts: Counter[Edge] = Counter()

    for cell in cells:
        corners = lattice.pixel_corners(cell)

        for ii, u in enumerate(corners):
            counts[make_edge(u, corners[(ii + 1) % len(corners)])] += 1

    return {e for e, n in counts.items() if n == 1}


def boundary_forced(sols: LocalSolutions) -> None:
    """
    A single solution, made of exactly the boundary edges around the window.
    """
    window = sols.template.window
    expected = frozenset(
        (u, v)
        for u, v in _boundary_edges(sols.template.all_cells())
        if u in window or v in window
    )

    if sols.solutions != [expected]:
        _fail(
            sols,
            "the only solution must follow the wire's boundary",
        )


def through_wire(sols: LocalSolutions) -> None:
    """
    Every solution passes straight through on one rail per end
    (one-enforced), on both rails at both ends (two-enforced), or turns
    around inside the gadget. Both passing modes must be possible.
    """
    if len(sols.template.ports) != 2:
        _fail(sols, "wires have exactly two ports")

    seen_one = seen_two = False

    for solution in sols:
        first, second = sols.patterns(solution)

        if first in ONE_RAIL and second in ONE_RAIL:
            seen_one = True
        elif first == second == "11":
            seen_two = True
        elif {first, second} != {"11", "00"}:
            _fail(
                sols,
                f"a solution crosses the ends as `{first}` and `{second}`",
            )

    if not seen_one:
        _fail(sols, "the wire can't be one-enforced")

    if not seen_two:
        _fail(sols, "the wire can't be two-enforced")


def _plain_wire(sols: LocalSolutions) -> GadgetTemplate:
    """
    A straight wire between the same two ports, with the same stubs.
    """
    template = sols.template
    first, second = template.ports
    step = cell_step(template.kind, second.direction)
    cells: list[Cell] = []
    anchor = first.cell.anchor + step

    while anchor != second.cell.anchor:
        if len(cells) > len(template.cells):
            _fail(sols, "the ports aren't the ends of a straight wire")

        cells.append(Cell(template.kind, anchor))
        anchor = anchor + step

    return GadgetTemplate(
        name=f"{template.name}-plain",
        kind=template.kind,
        cells=frozenset(cells),
        ports=template.ports,
        stub_length=template.stub_length,
    )


def one_enforcer(sols: LocalSolutions) -> None:
    """
    Exactly two solutions, both one-enforced and both with the same rails at
    either end, so the gadget fixes the wire's parity. That parity must
    differ from every one-enforced pass through a plain wire of the same
    length.
    """
    if len(sols) != 2:
        _fail(sols, f"expected 2 local solutions, found {len(sols)}")

    if len(sols.template.ports) != 2:
        _fail(sols, "enforcers have exactly two ports")

    patterns = {sols.patterns(s) for s in sols}

    if len(patterns) != 1:
        _fail(sols, "the solutions don't agree on the wire's parity")

    pattern = next(iter(patterns))

    if not all(p in ONE_RAIL for p in pattern):
        _fail(sols, "the wire isn't one-enforced")

    plain = _plain_wire(sols).local_solutions()

    if any(plain.patterns(s) == pattern for s in plain):
        _fail(
            sols,
            f"a plain wire of the same length also passes as {pattern}, so"
            f" the parity isn't shifted",
        )


def two_enforcer(sols: LocalSolutions) -> None:
    """
    No solution is one-enforced, and every edge at a window vertex of degree
    two is part of every solution.
    """
    g = sols.template.graph
    window = sols.template.window
    forced = {
        make_edge(v, n)
        for v in window
        if g.degree(v) == 2
        for n in g.neighbors_of(v)
    }

    if not sols.solutions:
        _fail(sols, "there are no local solutions")

    for solution in sols:
        if any(p in ONE_RAIL for p in sols.patterns(solution)):
            _fail(sols, "a solution is one-enforced")

        missing = forced - solution
        if missing:
            _fail(
                sols,
                f"a solution skips the degree-2 edge"
                f" {sorted(missing)[0]}",
            )


def _ring_runs(cells: Iterable[Cell]) -> tuple[list[Cell], list[Cell]]:
    # The interior pixels of the ring's top and bottom rows
    cells = sorted(cells, key=lambda c: (c.anchor.a, c.anchor.b))
    top = max(c.anchor.b for c in cells)
    bottom = min(c.anchor.b for c in cells)

    def run(row: int) -> list[Cell]:
        return [c for c in cells if c.anchor.b == row][1:-1]

    return run(top), run(bottom)


def variable(sols: LocalSolutions) -> None:
    """
    With one rail used at either end of the main wire, a cycle can pass the
    variable ring in exactly two ways: top branch one-enforced and bottom
    branch two-enforced, or the other way around.
    """
    top, bottom = _ring_runs(sols.template.cells)
    classes: set[tuple[str | None, str | None]] = set()

    for solution in sols:
        if not all(p in ONE_RAIL for p in sols.patterns(solution)):
            continue

        classes.add((sols.mode(solution, top), sols.mode(solution, bottom)))

    expected = {("one", "two"), ("two", "one")}
    if classes != expected:
        _fail(
            sols,
            f"the ring's branches are passed as {sorted(map(str, classes))}",
        )


def clause(sols: LocalSolutions) -> None:
    """
    Every leg is entered on both rails or not at all, at least one leg is
    entered, and any nonempty set of legs can be the entered one.
    """
    ports = sols.template.ports
    subsets: set[tuple[bool, ...]] = set()

    for solution in sols:
        patterns = sols.patterns(solution)

        if any(p in ONE_RAIL for p in patterns):
            _fail(sols, "a leg is entered on a single rail")

        subsets.add(tuple(p == "11" for p in patterns))

    expected = set(itertools.product((False, True), repeat=len(ports)))
    expected.discard((False,) * len(ports))

    if subsets != expected:
        _fail(
            sols,
            "the legs don't realize exactly the nonempty subsets",
        )


CONTRACTS: dict[str, Contract] = {
    "degree6": breakable_vertex,
    "turn": through_wire,
    "one_enforcer": one_enforcer,
    "two_enforcer": two_enforcer,
}
