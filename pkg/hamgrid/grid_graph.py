"""
Induced grid graphs, their planar face decomposition, and the subclass
predicates (thin, polygonal, solid, ...) used to route instances to solvers.
"""

from __future__ import annotations

import functools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import *  # type: ignore

import uniserde
from ordered_set import OrderedSet

from . import lattice
from .errors import RegionShapeError, StructureError
from .lattice import Cell, Coord, GridKind

__all__ = [
    "Edge",
    "make_edge",
    "GridGraph",
    "Face",
    "FaceDecomposition",
    "ClassificationReport",
    "PixelGraph",
    "build",
    "faces",
    "classify",
    "pixel_graph",
    "region_boundary",
]


_logger = logging.getLogger(__name__)


Edge = tuple[Coord, Coord]
DirectedEdge = tuple[Coord, Coord]


CORNER_COUNT = {
    GridKind.SQUARE: 4,
    GridKind.TRIANGULAR: 3,
    GridKind.HEXAGONAL: 6,
}


def vertex_key(c: Coord) -> tuple[int, int]:
    """
    The canonical sort key of vertices: lexicographic by `(b, a)`.
    """
    return c[1], c[0]


def edge_key(e: Edge) -> tuple[int, int, int, int]:
    return e[0][1], e[0][0], e[1][1], e[1][0]


def make_edge(u: tuple[int, int], v: tuple[int, int]) -> Edge:
    """
    Returns the undirected edge between `u` and `v` in canonical orientation,
    so that equal edges compare equal.
    """
    u = Coord(*u)
    v = Coord(*v)

    if vertex_key(u) <= vertex_key(v):
        return u, v

    return v, u


@dataclass(frozen=True)
class GridGraph:
    """
    A finite induced subgraph of a lattice.

    Edges are exactly the unit-distance pairs within the vertex set. Vertices
    are kept in canonical order, lexicographic by `(b, a)`, so serialization
    and all derived iteration orders are stable.

    Instances are immutable. Create them using `build` rather than calling the
    constructor directly.

    ## Attributes

    `kind`: The lattice the graph lives on.

    `vertices`: All vertices, in canonical order.

    `edges`: All edges, each in canonical orientation (see `make_edge`).
    """

    kind: GridKind
    vertices: OrderedSet[Coord]
    edges: frozenset[Edge]

    @functools.cached_property
    def rotation(self) -> dict[Coord, list[Coord]]:
        """
        The neighbors of every vertex, in counterclockwise order.
        """
        vertex_set = set(self.vertices)

        return {
            v: [n for n in lattice.neighbors(self.kind, v) if n in vertex_set]
            for v in self.vertices
        }

    @functools.cached_property
    def face_decomposition(self) -> FaceDecomposition:
        return _trace_faces(self)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, c: object) -> bool:
        return c in self.rotation

    def has_edge(self, u: Coord, v: Coord) -> bool:
        return make_edge(u, v) in self.edges

    def neighbors_of(self, v: Coord) -> list[Coord]:
        return self.rotation[v]

    def degree(self, v: Coord) -> int:
        return len(self.rotation[v])

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.rotation.values()), default=0)

    def components(self) -> list[list[Coord]]:
        """
        Returns the connected components, each as a list of vertices in
        canonical order. Components are ordered by their first vertex.
        """
        seen: set[Coord] = set()
        result: list[list[Coord]] = []

        for start in self.vertices:
            if start in seen:
                continue

            seen.add(start)
            queue = deque([start])
            component: list[Coord] = []

            while queue:
                v = queue.popleft()
                component.append(v)

                for n in self.rotation[v]:
                    if n not in seen:
                        seen.add(n)
                        queue.append(n)

            component.sort(key=vertex_key)
            result.append(component)

        return result

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def subgraph(self, vertices: Iterable[Coord]) -> GridGraph:
        """
        Returns the graph induced by the given subset of vertices.
        """
        return build(self.kind, vertices)

    @staticmethod
    def from_cells(kind: GridKind, cells: Iterable[Cell]) -> GridGraph:
        """
        Builds the graph induced by all corners of the given cells.
        """
        coords: set[Coord] = set()

        for cell in cells:
            coords.update(lattice.pixel_corners(cell))

        return build(kind, coords)


def build(kind: GridKind, coords: Iterable[tuple[int, int]]) -> GridGraph:
    """
    Builds the induced grid graph on the given lattice points.

    Connectivity isn't checked here. See `classify` for that.


    ## Parameters

    `kind`: The lattice the points are on.

    `coords`: The vertices of the graph. Duplicates are ignored.


    ## Raises

    `CoordinateError`: If any point is not a vertex of the lattice.
    """
    vertex_set = {lattice.validate_coord(kind, c) for c in coords}
    vertices = OrderedSet(sorted(vertex_set, key=vertex_key))
    edges: set[Edge] = set()

    for v in vertices:
        for n in lattice.neighbors(kind, v):
            if n in vertex_set:
                edges.add(make_edge(v, n))

    return GridGraph(kind, vertices, frozenset(edges))


@dataclass(frozen=True)
class Face:
    """
    A face of a planar grid graph.

    ## Attributes

    `walk`: The directed edges along the face, with the face on their left.

    `area`: Twice the signed area enclosed by the walk, in lattice units.
        Bounded faces are positive, the outer face is negative.

    `role`: Whether this is the outer face, a hole or a pixel.

    `cell`: The cell occupying the face, for pixels.
    """

    walk: tuple[DirectedEdge, ...]
    area: int
    role: Literal["outer", "hole", "pixel"]
    cell: Cell | None = None

    @property
    def vertices(self) -> list[Coord]:
        return [u for u, _ in self.walk]

    def __len__(self) -> int:
        return len(self.walk)


@dataclass(frozen=True)
class FaceDecomposition:
    """
    All faces of a connected grid graph.

    ## Attributes

    `faces`: Every face, in tracing order.

    `outer`: The index of the unbounded face.

    `holes`: The indices of all bounded faces which aren't pixels.

    `pixels`: All cells which are faces of the graph, in canonical order.

    `vertex_faces`: For each vertex, the indices of its incident faces. A face
        is listed once per visit of its walk to the vertex.

    `edge_faces`: For each directed edge, the index of the face on its left.
    """

    faces: list[Face]
    outer: int
    holes: list[int]
    pixels: OrderedSet[Cell]
    vertex_faces: dict[Coord, list[int]]
    edge_faces: dict[DirectedEdge, int]

    @property
    def outer_face(self) -> Face:
        return self.faces[self.outer]

    @property
    def hole_faces(self) -> list[Face]:
        return [self.faces[ii] for ii in self.holes]


def _signed_area(walk: Sequence[DirectedEdge]) -> int:
    # The triangular basis has a positive determinant, so the sign of the
    # lattice-coordinate shoelace sum matches the Euclidean one
    total = 0

    for (a1, b1), (a2, b2) in walk:
        total += a1 * b2 - a2 * b1

    return total


def _trace_faces(g: GridGraph) -> FaceDecomposition:
    rotation = g.rotation
    position = {
        v: {n: ii for ii, n in enumerate(nbrs)} for v, nbrs in rotation.items()
    }

    walks: list[list[DirectedEdge]] = []
    edge_faces: dict[DirectedEdge, int] = {}

    for u in g.vertices:
        for v in rotation[u]:
            if (u, v) in edge_faces:
                continue

            # Follow the face on the left: at each vertex continue with the
            # neighbor preceding the one we came from
            walk: list[DirectedEdge] = []
            tail, head = u, v

            while (tail, head) not in edge_faces:
                edge_faces[tail, head] = len(walks)
                walk.append((tail, head))

                nbrs = rotation[head]
                nxt = nbrs[(position[head][tail] - 1) % len(nbrs)]
                tail, head = head, nxt

            walks.append(walk)

    areas = [_signed_area(walk) for walk in walks]

    if walks:
        outer = min(range(len(walks)), key=lambda ii: areas[ii])
    else:
        outer = 0
        walks.append([])
        areas.append(0)

    face_list: list[Face] = []
    holes: list[int] = []
    pixels: list[Cell] = []

    for ii, walk in enumerate(walks):
        if ii == outer:
            face_list.append(Face(tuple(walk), areas[ii], "outer"))
            continue

        cell = None
        if len(walk) == CORNER_COUNT[g.kind]:
            cell = lattice.cell_of_corners(g.kind, (u for u, _ in walk))

        if cell is None:
            face_list.append(Face(tuple(walk), areas[ii], "hole"))
            holes.append(ii)
        else:
            face_list.append(Face(tuple(walk), areas[ii], "pixel", cell))
            pixels.append(cell)

    vertex_faces: dict[Coord, list[int]] = {v: [] for v in g.vertices}

    for ii, face in enumerate(face_list):
        for u, _ in face.walk:
            vertex_faces[u].append(ii)

    # Isolated vertices only touch the outer face
    for v, incident in vertex_faces.items():
        if not incident:
            incident.append(outer)

    return FaceDecomposition(
        faces=face_list,
        outer=outer,
        holes=holes,
        pixels=OrderedSet(sorted(pixels, key=_cell_key)),
        vertex_faces=vertex_faces,
        edge_faces=edge_faces,
    )


def _cell_key(cell: Cell) -> tuple[int, int, str]:
    return cell.anchor.b, cell.anchor.a, cell.orientation


def faces(g: GridGraph) -> FaceDecomposition:
    """
    Computes the planar face decomposition of a connected grid graph.

    Faces are traced with the rotation system defined by
    `lattice.neighbors`, keeping each face on the left of its walk. The face
    with the most negative signed area is the outer face. Bounded faces whose
    walk is exactly the corner cycle of a cell are pixels, all others are
    holes.


    ## Raises

    `StructureError`: If the graph is not connected.
    """
    if not g.is_connected():
        raise StructureError(
            "Faces can only be traced on connected graphs. Check connectivity"
            " with `classify` first."
        )

    return g.face_decomposition


@dataclass(frozen=True)
class ClassificationReport:
    """
    Which of the standard grid graph subclasses a graph belongs to.

    Disconnected graphs are classified component by component: a flag holds
    if it holds for every component.

    ## Attributes

    `kind`: The lattice of the graph.

    `connected`: Whether the graph is connected.

    `min_degree_ok`: Whether every vertex has degree at least 2.

    `thin`: Whether every vertex lies on the outer face or a hole.

    `polygonal`: Whether every vertex and edge lies on a pixel, and no vertex
        could be removed to merge two boundaries.

    `solid`: Whether the graph has no holes.

    `superthin`: Whether the graph contains no pixels at all.

    `degree_bounded`: Whether the maximum degree is at most 3 (square and
        triangular) or 2 (hexagonal).

    `single_pixel`: Whether the graph is exactly one hexagonal pixel, which is
        trivially Hamiltonian.

    `max_degree`: The largest vertex degree.

    `pixel_count`: The number of pixels.

    `hole_count`: The number of holes.

    `witnesses`: For each failed predicate, a vertex or edge demonstrating the
        failure.
    """

    kind: GridKind
    connected: bool
    min_degree_ok: bool
    thin: bool
    polygonal: bool
    solid: bool
    superthin: bool
    degree_bounded: bool
    single_pixel: bool
    max_degree: int
    vertex_count: int
    edge_count: int
    pixel_count: int
    hole_count: int
    witnesses: dict[str, Coord | Edge] = field(default_factory=dict)

    @property
    def trivially_non_hamiltonian(self) -> bool:
        """
        Disconnected graphs and graphs with a degree-1 vertex can't have a
        Hamiltonian cycle. A lone vertex is excluded too.
        """
        return not self.connected or not self.min_degree_ok

    def as_json(self) -> uniserde.JsonDoc:
        def _witness_json(w: Coord | Edge) -> list:
            if isinstance(w[0], int):
                return list(w)

            return [list(c) for c in w]  # type: ignore

        return {
            "kind": self.kind.value,
            "connected": self.connected,
            "min_degree_ok": self.min_degree_ok,
            "thin": self.thin,
            "polygonal": self.polygonal,
            "solid": self.solid,
            "superthin": self.superthin,
            "degree_bounded": self.degree_bounded,
            "single_pixel": self.single_pixel,
            "max_degree": self.max_degree,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "pixel_count": self.pixel_count,
            "hole_count": self.hole_count,
            "witnesses": {
                name: _witness_json(w) for name, w in self.witnesses.items()
            },
        }


def classify(g: GridGraph) -> ClassificationReport:
    """
    Decides which grid graph subclasses `g` belongs to.

    Never raises. Every failed predicate is recorded in the report together
    with a witness.

    The polygonal test has two parts: (a) every vertex and every edge lies on
    some pixel, and (b) no vertex touches two distinct non-pixel faces, or the
    same non-pixel face twice. A vertex failing (b) is exactly a vertex whose
    removal would merge or join boundary walks.
    """
    witnesses: dict[str, Coord | Edge] = {}
    components = g.components()
    connected = len(components) <= 1

    min_degree_ok = True
    for v in g.vertices:
        if g.degree(v) < 2:
            min_degree_ok = False
            witnesses["min_degree"] = v
            break

    if not connected:
        witnesses["connected"] = components[1][0]

    thin = polygonal = True
    pixel_count = hole_count = 0

    for component in components:
        sub = g if connected else g.subgraph(component)
        decomposition = sub.face_decomposition
        pixel_count += len(decomposition.pixels)
        hole_count += len(decomposition.holes)

        comp_thin, comp_polygonal = _check_component(
            sub,
            decomposition,
            witnesses,
        )
        thin = thin and comp_thin
        polygonal = polygonal and comp_polygonal

    if hole_count > 0 and "solid" not in witnesses:
        for component in components:
            sub = g if connected else g.subgraph(component)
            decomposition = sub.face_decomposition

            if decomposition.holes:
                first_hole = decomposition.faces[decomposition.holes[0]]
                witnesses["solid"] = first_hole.walk[0][0]
                break

    max_degree = g.max_degree()
    bound = 2 if g.kind is GridKind.HEXAGONAL else 3

    single_pixel = (
        g.kind is GridKind.HEXAGONAL
        and pixel_count == 1
        and len(g.vertices) == CORNER_COUNT[g.kind]
    )

    report = ClassificationReport(
        kind=g.kind,
        connected=connected,
        min_degree_ok=min_degree_ok,
        thin=thin,
        polygonal=polygonal,
        solid=hole_count == 0,
        superthin=pixel_count == 0,
        degree_bounded=max_degree <= bound,
        single_pixel=single_pixel,
        max_degree=max_degree,
        vertex_count=len(g.vertices),
        edge_count=len(g.edges),
        pixel_count=pixel_count,
        hole_count=hole_count,
        witnesses=witnesses,
    )

    _logger.debug(f"Classified {g.kind.value} graph: {report}")
    return report


def _check_component(
    g: GridGraph,
    decomposition: FaceDecomposition,
    witnesses: dict[str, Coord | Edge],
) -> tuple[bool, bool]:
    thin = polygonal = True
    face_list = decomposition.faces

    for v in g.vertices:
        incident = decomposition.vertex_faces[v]
        non_pixel = [ii for ii in incident if face_list[ii].role != "pixel"]

        # Thin: every vertex sits on some boundary
        if not non_pixel:
            thin = False
            witnesses.setdefault("thin", v)

        # Polygonal (a): every vertex belongs to a pixel
        if len(non_pixel) == len(incident):
            polygonal = False
            witnesses.setdefault("polygonal", v)

        # Polygonal (b): no boundary-merge vertex
        if len(non_pixel) >= 2:
            polygonal = False
            witnesses.setdefault("polygonal", v)

    # Polygonal (a): every edge belongs to a pixel
    for u, v in sorted(g.edges, key=edge_key):
        left = face_list[decomposition.edge_faces[u, v]]
        right = face_list[decomposition.edge_faces[v, u]]

        if left.role != "pixel" and right.role != "pixel":
            polygonal = False
            witnesses.setdefault("polygonal", (u, v))

    return thin, polygonal


@dataclass(frozen=True)
class PixelGraph:
    """
    The adjacency graph of the pixels of a grid graph. Two pixels are adjacent
    if they share an edge.

    ## Attributes

    `nodes`: All pixels, in canonical order.

    `adjacency`: For each pixel, its neighboring pixels in counterclockwise
        order around the pixel.
    """

    nodes: OrderedSet[Cell]
    adjacency: dict[Cell, list[Cell]]

    @property
    def edges(self) -> set[frozenset[Cell]]:
        return {
            frozenset((cell, other))
            for cell, others in self.adjacency.items()
            for other in others
        }

    def degree(self, cell: Cell) -> int:
        return len(self.adjacency[cell])

    def restricted(self, cells: Iterable[Cell]) -> PixelGraph:
        """
        Returns the pixel graph induced by a subset of the pixels.
        """
        keep = set(cells)

        return PixelGraph(
            nodes=OrderedSet(c for c in self.nodes if c in keep),
            adjacency={
                c: [o for o in self.adjacency[c] if o in keep]
                for c in self.nodes
                if c in keep
            },
        )


def pixel_graph(g: GridGraph) -> PixelGraph:
    """
    Builds the graph whose nodes are the pixels of `g` and whose edges join
    pixels sharing a graph edge.
    """
    pixels = g.face_decomposition.pixels
    pixel_set = set(pixels)

    adjacency = {
        cell: [
            other
            for other, _ in lattice.adjacent_cells(cell)
            if other in pixel_set
        ]
        for cell in pixels
    }

    return PixelGraph(pixels, adjacency)


def _cell_edges(cell: Cell) -> list[Edge]:
    corners = lattice.pixel_corners(cell)

    return [
        make_edge(corners[ii], corners[(ii + 1) % len(corners)])
        for ii in range(len(corners))
    ]


def region_boundary(g: GridGraph, region: Iterable[Cell]) -> set[Edge]:
    """
    Returns the edges lying on exactly one cell of the region.

    For a connected, hole-free region this is a single cycle through every
    corner of the region's cells.


    ## Parameters

    `g`: The graph the region lives in.

    `region`: A set of pixels of `g`.


    ## Raises

    `RegionShapeError`: If the region isn't a subset of the pixels, isn't
        connected, or encloses a cavity.
    """
    cells = OrderedSet(sorted(set(region), key=_cell_key))

    if not cells:
        raise RegionShapeError("The region is empty")

    pixel_set = set(g.face_decomposition.pixels)
    for cell in cells:
        if cell not in pixel_set:
            raise RegionShapeError(f"{cell!r} is not a pixel of the graph")

    # Connectivity, via shared sides
    seen = {cells[0]}
    queue = deque([cells[0]])

    while queue:
        cell = queue.popleft()

        for other, _ in lattice.adjacent_cells(cell):
            if other in cells and other not in seen:
                seen.add(other)
                queue.append(other)

    if len(seen) != len(cells):
        missing = next(c for c in cells if c not in seen)
        raise RegionShapeError(
            f"The region is not connected: {missing!r} can't be reached"
            f" from {cells[0]!r}"
        )

    # Count how often each side is used
    side_count: dict[Edge, int] = {}
    corners: set[Coord] = set()

    for cell in cells:
        corners.update(lattice.pixel_corners(cell))

        for e in _cell_edges(cell):
            side_count[e] = side_count.get(e, 0) + 1

    # A connected union of cells is simply connected iff its Euler
    # characteristic is 1
    euler = len(corners) - len(side_count) + len(cells)
    if euler != 1:
        raise RegionShapeError(
            f"The region encloses {1 - euler} cavit"
            f"{'y' if euler == 0 else 'ies'}"
        )

    return {e for e, count in side_count.items() if count == 1}
