"""
Compiles 6-regular planar Tree-Residue Vertex-Breaking instances into thin
hexagonal grid graphs.

Every vertex becomes a copy of the breakable degree-6 gadget, and every edge a
wire of pixels between two of the gadgets' ports. The compiled graph is
Hamiltonian exactly if breaking some vertices leaves a tree. A gadget whose
cycle keeps the six wire regions apart corresponds to a broken vertex.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import *  # type: ignore

import networkx as nx
import uniserde

from . import gadgets, trvb
from .errors import CompilerBugError, LayoutError, ParameterError
from .gadgets.template import STEPS, GadgetTemplate
from .grid_graph import GridGraph, classify
from .ham_core import CycleCertificate
from .lattice import Cell, Coord, GridKind, embed
from .regions import CellRegion

__all__ = [
    "Placement",
    "HexLayout",
    "HexCorrespondence",
    "cell_distance",
    "vertex_gadget_template",
    "wire_template",
    "layout",
    "compile",
    "extract_breaking_set",
]


_logger = logging.getLogger(__name__)


HEX = GridKind.HEXAGONAL
DIRECTIONS = STEPS[HEX]

# Routes keep this far from every cell that isn't theirs
CLEARANCE = 2

DEFAULT_SPACING = 4
DEFAULT_MARGIN = 40
DEFAULT_ATTEMPTS = 8


def _axial(c: tuple[int, int]) -> tuple[int, int]:
    j = (c[0] - c[1]) // 3
    return c[1] + j, j


def cell_distance(p: tuple[int, int], q: tuple[int, int]) -> int:
    """
    The number of steps between two hexagon centers.
    """
    i1, j1 = _axial(p)
    i2, j2 = _axial(q)
    di, dj = i1 - i2, j1 - j2
    return max(abs(di), abs(dj), abs(di + dj))


def _scaled(direction: int, k: int) -> Coord:
    step = DIRECTIONS[direction]
    return Coord(step.a * k, step.b * k)


def _ball_offsets(radius: int) -> list[Coord]:
    return [
        Coord(a, b)
        for a in range(-2 * radius, 2 * radius + 1)
        for b in range(-2 * radius, 2 * radius + 1)
        if (a - b) % 3 == 0 and cell_distance((a, b), (0, 0)) <= radius
    ]


_CLEARANCE_BALL = _ball_offsets(CLEARANCE)


def vertex_gadget_template() -> GadgetTemplate:
    """
    The breakable degree-6 vertex gadget. Its two local solutions either join
    the regions of all six wires or keep every one of them separate.
    """
    return gadgets.load("degree6")


def wire_template(length: int, stub_length: int = 3) -> GadgetTemplate:
    """
    A straight wire of `length` pixels with stubs at both ends. Its only local
    solution runs along the wire's boundary.
    """
    if length < 1:
        raise ParameterError("Wires need at least one pixel")

    direction = 0
    cells = frozenset(Cell(HEX, _scaled(direction, k)) for k in range(length))

    return GadgetTemplate(
        name="wire",
        kind=HEX,
        cells=cells,
        ports=(
            gadgets.Port(0, Cell(HEX, _scaled(direction, length)), direction),
            gadgets.Port(1, Cell(HEX, _scaled(direction, -1)), direction + 3),
        ),
        stub_length=stub_length,
        contract=gadgets.contracts.boundary_forced,
    )


@dataclass(frozen=True)
class Placement:
    """
    Where a vertex gadget sits.

    ## Attributes

    `anchor`: The cell the gadget's origin is moved to.

    `shift`: How many ports the vertex's rotation is turned by. The i-th edge
        around the vertex attaches to port `(i + shift) mod 6`.
    """

    anchor: Cell
    shift: int


@dataclass(frozen=True)
class HexLayout:
    """
    Gadget placements and wire routes for a TRVB instance.

    ## Attributes

    `placement`: Where each vertex's gadget sits.

    `gadgets`: The placed gadgets, keyed by vertex.

    `ports`: The two `(vertex, port)` ends of every edge, in routing order.

    `routes`: The cells of every wire between the two stub tips, keyed by
        edge id.
    """

    placement: dict[int, Placement]
    gadgets: dict[int, GadgetTemplate]
    ports: dict[int, tuple[tuple[int, int], tuple[int, int]]]
    routes: dict[int, list[Cell]]

    def gadget_cells(self, vertex: int) -> set[Cell]:
        return self.gadgets[vertex].all_cells()

    def cells(self) -> set[Cell]:
        result: set[Cell] = set()

        for vertex in self.gadgets:
            result.update(self.gadget_cells(vertex))

        for route in self.routes.values():
            result.update(route)

        return result


@dataclass
class HexCorrespondence(uniserde.Serde):
    """
    Which pixels of a compiled instance came from which vertex and edge.

    ## Attributes

    `gadgets`: The gadget (body and stubs) of every vertex, with its offset.

    `wires`: The routed cells of every edge.
    """

    gadgets: list[CellRegion]
    wires: list[CellRegion]

    def gadget(self, vertex: int) -> CellRegion:
        for region in self.gadgets:
            if region.id == vertex:
                return region

        raise KeyError(vertex)


def _check_instance(m: trvb.Multigraph) -> None:
    for v in m.vertices:
        if m.degree(v) != 6:
            raise ParameterError(
                f"Vertex {v} has degree {m.degree(v)}, but every vertex needs"
                f" degree 6"
            )

        if not m.breakable[v]:
            raise ParameterError(f"Vertex {v} isn't breakable")

    if m.rotation is None:
        raise ParameterError("The instance needs a rotation system")

    if not trvb.is_planar_rotation(m):
        raise ParameterError("The rotation system isn't planar")


class _Router:
    """
    Routes wires one at a time, keeping every wire at least `CLEARANCE` cells
    away from anything it doesn't connect to.
    """

    def __init__(
        self,
        placed: dict[int, GadgetTemplate],
        margin: int,
    ) -> None:
        self.placed = placed
        self.owner: dict[Coord, tuple] = {}

        for v, gadget in placed.items():
            for cell in gadget.cells:
                self.owner[cell.anchor] = ("gadget", v)

            for port_id, stub in gadget.stubs().items():
                for cell in stub:
                    self.owner[cell.anchor] = ("stub", v, port_id)

        body = [c.anchor for g in placed.values() for c in g.cells]
        self.min_a = min(c.a for c in body) - margin
        self.max_a = max(c.a for c in body) + margin
        self.min_b = min(c.b for c in body) - margin
        self.max_b = max(c.b for c in body) + margin

    def _in_box(self, c: Coord) -> bool:
        return (
            self.min_a <= c.a <= self.max_a and self.min_b <= c.b <= self.max_b
        )

    def stub(self, end: tuple[int, int]) -> list[Coord]:
        v, port_id = end
        gadget = self.placed[v]
        return [c.anchor for c in gadget.stub(gadget.port(port_id))]

    def route(
        self,
        edge: int,
        source: tuple[int, int],
        target: tuple[int, int],
    ) -> list[Cell] | None:
        mine = {("stub", *source), ("stub", *target), ("wire", edge)}

        blocked: set[Coord] = set()
        for c, owner in self.owner.items():
            if owner not in mine:
                blocked.update(c + d for d in _CLEARANCE_BALL)

        source_stub = self.stub(source)
        target_stub = self.stub(target)
        start = source_stub[-1]
        start_direction = self.placed[source[0]].port(source[1]).direction

        goal = target_stub[-1]
        target_direction = self.placed[target[0]].port(target[1]).direction
        arrival = (target_direction + 3) % 6
        goal_chain = target_stub[::-1]

        # The last cells before the stub tip must come in straight
        ray = [goal + _scaled(target_direction, t) for t in (1, 2, 3)]
        entry = ray[0]

        State = tuple[Coord, int, bool]
        first: State = (start, start_direction, False)
        previous: dict[State, State | None] = {first: None}
        queue = deque([first])

        def path_to(state: State | None) -> list[Coord]:
            result: list[Coord] = []

            while state is not None:
                result.append(state[0])
                state = previous[state]

            return result[::-1]

        def spaced_out(cells: list[Coord]) -> bool:
            for ii, p in enumerate(cells):
                for q in cells[ii + 3 :]:
                    if cell_distance(p, q) < 3:
                        return False

            return True

        while queue:
            state = queue.popleft()
            c, direction, turned = state

            # No two turns in a row
            if turned:
                options = [direction]
            else:
                options = [direction, (direction + 5) % 6, (direction + 1) % 6]

            for new_direction in options:
                n = c + DIRECTIONS[new_direction]
                new_state = (n, new_direction, new_direction != direction)

                if new_state in previous or not self._in_box(n):
                    continue

                if n in self.owner or n in blocked:
                    continue

                if n in ray:
                    if new_direction != arrival:
                        continue

                    if n == entry:
                        full = (
                            source_stub[:-1]
                            + path_to(state)
                            + [n]
                            + goal_chain
                        )

                        if spaced_out(full):
                            previous[new_state] = state
                            cells = path_to(new_state)[1:]
                            return [Cell(HEX, a) for a in cells]

                        continue

                elif any(cell_distance(g, n) < 3 for g in goal_chain):
                    continue

                previous[new_state] = state
                queue.append(new_state)

        return None

    def claim(self, edge: int, cells: list[Cell]) -> None:
        for cell in cells:
            self.owner[cell.anchor] = ("wire", edge)


def _port_ends(
    m: trvb.Multigraph,
    shifts: dict[int, int],
) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
    assert m.rotation is not None
    ends: dict[int, list[tuple[int, int]]] = {}

    for v in m.vertices:
        for ii, edge_id in enumerate(m.rotation[v]):
            ends.setdefault(edge_id, []).append((v, (ii + shifts[v]) % 6))

    return {e: (pair[0], pair[1]) for e, pair in sorted(ends.items())}


def _other_end(m: trvb.Multigraph, edge_id: int, vertex: int) -> int:
    u, v = m.edges[edge_id]
    return v if u == vertex else u


def _vertex_order(m: trvb.Multigraph) -> list[int]:
    """
    Breadth-first order over each connected component, smallest vertex and
    neighbor first.
    """
    graph = nx.Graph(m.to_networkx())
    order: list[int] = []

    for component in sorted(nx.connected_components(graph), key=min):
        tree = nx.bfs_tree(graph, min(component), sort_neighbors=sorted)
        order.extend(tree.nodes)

    return order


def _slot_anchors(
    m: trvb.Multigraph,
    half_pitch: int,
    *,
    mirrored: bool,
) -> dict[int, Cell]:
    """
    Assigns every vertex a slot of a roughly square grid of gadget positions.
    Vertices are placed in breadth-first order, each taking the free slot
    closest to its neighbors placed so far.
    """
    order = _vertex_order(m)
    columns = math.ceil(math.sqrt(len(order)))
    rows = math.ceil(len(order) / columns)

    # Roughly as far apart as columns, and keeps anchors on hexagon centers
    row_pitch = 2 * math.ceil(math.sqrt(3) * half_pitch)

    free = [(col, row) for row in range(rows) for col in range(columns)]
    slots: dict[int, tuple[int, int]] = {}

    for v in order:
        neighbors = [
            _other_end(m, edge_id, v)
            for edge_id, _ in m.edge_ends(v)
            if _other_end(m, edge_id, v) != v
        ]

        def cost(slot: tuple[int, int]) -> float:
            return round(
                sum(math.dist(slot, slots[w]) for w in neighbors if w in slots),
                9,
            )

        best = min(free, key=cost)
        free.remove(best)
        slots[v] = best

    result: dict[int, Cell] = {}

    for v, (col, row) in slots.items():
        if mirrored:
            col = columns - 1 - col

        result[v] = Cell(
            HEX,
            Coord(3 * half_pitch * col - row_pitch // 2 * row, row_pitch * row),
        )

    return result


def _angle_between(a: float, b: float) -> float:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def _ranked_shifts(
    m: trvb.Multigraph,
    template: GadgetTemplate,
    anchors: dict[int, Cell],
) -> dict[int, list[tuple[float, int]]]:
    """
    Scores the six port shifts of every vertex by how far its ports point
    away from the neighbors their edges lead to. Both ends of a self-loop
    should share a side of the gadget.
    """
    assert m.rotation is not None
    port_angles: dict[int, float] = {}
    for port in template.ports:
        x, y = embed(HEX, port.cell.anchor)
        port_angles[port.id] = math.atan2(y, x)

    positions = {v: embed(HEX, cell.anchor) for v, cell in anchors.items()}
    result: dict[int, list[tuple[float, int]]] = {}

    for v in m.vertices:
        order = m.rotation[v]
        scores: list[tuple[float, int]] = []

        for shift in range(6):
            score = 0.0

            for ii, edge_id in enumerate(order):
                port_id = (ii + shift) % 6
                w = _other_end(m, edge_id, v)

                if w == v:
                    jj = next(
                        k
                        for k, other in enumerate(order)
                        if other == edge_id and k != ii
                    )
                    if port_id // 2 != (jj + shift) % 6 // 2:
                        score += 1
                    continue

                (x1, y1), (x2, y2) = positions[v], positions[w]
                score += _angle_between(
                    port_angles[port_id],
                    math.atan2(y2 - y1, x2 - x1),
                )

            scores.append((score, shift))

        result[v] = sorted(scores)

    return result


def _candidate_shifts(
    m: trvb.Multigraph,
    placed: dict[int, GadgetTemplate],
    ranked: dict[int, list[tuple[float, int]]],
    limit: int,
) -> list[tuple[int, dict[int, int]]]:
    """
    Combines the two best shifts of every vertex into at most `limit`
    assignments, then improves each one vertex at a time until the stub tips
    of every edge are as close together as they get.
    """
    tips = {
        v: {
            port_id: stub[-1].anchor
            for port_id, stub in gadget.stubs().items()
        }
        for v, gadget in placed.items()
    }

    def wire_lengths(shifts: dict[int, int]) -> int:
        return sum(
            cell_distance(tips[u][p], tips[v][q])
            for (u, p), (v, q) in _port_ends(m, shifts).values()
        )

    combos: list[tuple[float, dict[int, int]]] = [(0.0, {})]

    for v in m.vertices:
        combos = sorted(
            (
                (total + score, {**shifts, v: shift})
                for total, shifts in combos
                for score, shift in ranked[v][:2]
            ),
            key=lambda combo: combo[0],
        )[:limit]

    result: list[tuple[int, dict[int, int]]] = []

    for _, start in combos:
        shifts = dict(start)
        best = wire_lengths(shifts)
        improved = True

        while improved:
            improved = False

            for v in m.vertices:
                for shift in range(6):
                    previous = shifts[v]
                    shifts[v] = shift
                    length = wire_lengths(shifts)

                    if length < best:
                        best = length
                        improved = True
                    else:
                        shifts[v] = previous

        if all(shifts != other for _, other in result):
            result.append((best, shifts))

    return result


def _route_all(
    placed: dict[int, GadgetTemplate],
    ends: dict[int, tuple[tuple[int, int], tuple[int, int]]],
    margin: int,
) -> tuple[dict[int, list[Cell]], int | None]:
    router = _Router(placed, margin)

    def tip_distance(edge_id: int) -> tuple[int, int]:
        source, target = ends[edge_id]
        return (
            cell_distance(router.stub(source)[-1], router.stub(target)[-1]),
            edge_id,
        )

    routes: dict[int, list[Cell]] = {}

    for edge_id in sorted(ends, key=tip_distance):
        cells = router.route(edge_id, *ends[edge_id])

        if cells is None:
            return routes, edge_id

        router.claim(edge_id, cells)
        routes[edge_id] = cells

    return dict(sorted(routes.items())), None


def layout(
    m: trvb.Multigraph,
    *,
    spacing: int = DEFAULT_SPACING,
    margin: int = DEFAULT_MARGIN,
    attempts: int = DEFAULT_ATTEMPTS,
) -> HexLayout:
    """
    Places one gadget per vertex on a roughly square grid and routes a wire
    for every edge, attaching edges to ports in the order given by the
    rotation system.

    Vertices are placed in breadth-first order, each next to its already
    placed neighbors. Gadgets are `spacing` cells further apart than strictly
    necessary, and wires stay within `margin` cells of the gadgets. The port
    shifts start out facing every edge towards its other end and are then
    tuned to keep wires short. At most `attempts` placements and shift
    assignments are tried, best first, routing the edges with the closest
    stub tips first.


    ## Raises

    `ParameterError`: If a vertex doesn't have degree 6, isn't breakable, or
        the rotation system is missing or not planar. Also if `spacing` is
        negative or `attempts` isn't positive.

    `LayoutError`: If no attempt manages to route every edge.
    """
    _check_instance(m)

    if spacing < 0:
        raise ParameterError("The spacing can't be negative")

    if attempts < 1:
        raise ParameterError("At least one layout attempt is needed")

    template = vertex_gadget_template()
    radius = max(cell_distance(c.anchor, (0, 0)) for c in template.cells)
    pitch = 2 * (radius + template.stub_length) + 2 * spacing + 6
    half_pitch = math.ceil(pitch / 2)

    candidates: list[
        tuple[int, dict[int, Cell], dict[int, GadgetTemplate], dict[int, int]]
    ] = []

    for mirrored in (False, True):
        anchors = _slot_anchors(m, half_pitch, mirrored=mirrored)
        placed = {
            v: template.instantiate(cell.anchor) for v, cell in anchors.items()
        }
        ranked = _ranked_shifts(m, template, anchors)

        for length, shifts in _candidate_shifts(m, placed, ranked, attempts):
            candidates.append((length, anchors, placed, shifts))

    candidates.sort(key=lambda candidate: candidate[0])
    failed_edge: int | None = None
    tried = 0

    for _, anchors, placed, shifts in candidates[:attempts]:
        tried += 1
        ends = _port_ends(m, shifts)
        routes, failed_edge = _route_all(placed, ends, margin)

        if failed_edge is None:
            _logger.debug(
                f"Routed {len(routes)} wires on attempt {tried}, using port"
                f" shifts {shifts}"
            )

            return HexLayout(
                placement={
                    v: Placement(anchors[v], shifts[v]) for v in m.vertices
                },
                gadgets=placed,
                ports=ends,
                routes=routes,
            )

        _logger.debug(
            f"Attempt {tried} couldn't route edge {failed_edge}, using port"
            f" shifts {shifts}"
        )

    raise LayoutError(
        f"Couldn't route every wire in any of {tried} layout attempts",
        edge=failed_edge,
    )


def compile(
    m: trvb.Multigraph,
    *,
    spacing: int = DEFAULT_SPACING,
) -> tuple[GridGraph, HexCorrespondence]:
    """
    Compiles a TRVB instance into a thin hexagonal grid graph, which is
    Hamiltonian exactly if the instance is a yes instance.


    ## Raises

    `ParameterError`, `LayoutError`: See `layout`.

    `CompilerBugError`: If the result isn't a connected thin grid graph with
        minimum degree 2.
    """
    placed = layout(m, spacing=spacing)
    g = GridGraph.from_cells(HEX, placed.cells())
    report = classify(g)

    if not (report.thin and report.connected and report.min_degree_ok):
        raise CompilerBugError(
            f"The compiled instance doesn't classify as expected: connected"
            f" {report.connected}, thin {report.thin}, minimum degree at"
            f" least 2 {report.min_degree_ok}"
        )

    corr = HexCorrespondence(
        gadgets=[
            CellRegion.from_cells(
                v,
                placed.gadget_cells(v),
                offset=placed.placement[v].anchor.anchor,
            )
            for v in m.vertices
        ],
        wires=[
            CellRegion.from_cells(edge_id, cells)
            for edge_id, cells in placed.routes.items()
        ],
    )

    _logger.debug(
        f"Compiled {len(m.vertices)} vertices and {len(m.edges)} edges into"
        f" {len(g)} grid vertices"
    )

    return g, corr


def extract_breaking_set(
    corr: HexCorrespondence,
    cert: CycleCertificate,
) -> frozenset[int]:
    """
    Reads off which vertices a Hamiltonian cycle of a compiled instance
    breaks: those whose gadget keeps the wire regions apart.
    """
    template = vertex_gadget_template()
    result: set[int] = set()

    for region in corr.gadgets:
        placed = template.instantiate(tuple(region.offset))  # type: ignore
        solutions = gadgets.LocalSolutions(placed, [])

        if solutions.region_groups(cert.edges) > 1:
            result.add(region.id)

    return frozenset(result)
