"""
Tree-Residue Vertex-Breaking.

Breaking a vertex replaces it with one fresh leaf per edge-end, so every
former edge-end at the vertex ends up at its own degree-1 vertex. The problem
asks whether breaking some subset of the breakable vertices leaves a tree.

Multigraphs here allow parallel edges and self-loops, and may carry a
rotation system: the cyclic order of edge-ends around each vertex.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import *  # type: ignore

import networkx as nx

from .errors import InvariantViolation, TrvbIdError

__all__ = [
    "Multigraph",
    "TrvbResult",
    "break_vertex",
    "break_vertices",
    "is_tree",
    "solve",
    "enumerate_solutions",
    "is_planar_rotation",
]


_logger = logging.getLogger(__name__)


EdgeEnd = tuple[int, int]


@dataclass(frozen=True)
class Multigraph:
    """
    An undirected multigraph whose vertices are flagged breakable or not.

    ## Attributes

    `breakable`: The breakable flag of every vertex, keyed by vertex id.

    `edges`: The endpoints of every edge, keyed by edge id. Self-loops have
        equal endpoints.

    `rotation`: Optionally, the counterclockwise order of edges around each
        vertex. A self-loop is listed twice at its vertex.


    ## Raises

    `TrvbIdError`: If an edge references a nonexistent vertex.

    `InvariantViolation`: If the rotation system doesn't list each edge-end
        exactly once.
    """

    breakable: dict[int, bool]
    edges: dict[int, tuple[int, int]]
    rotation: dict[int, tuple[int, ...]] | None = field(default=None)

    def __post_init__(self) -> None:
        for edge_id, (u, v) in self.edges.items():
            for end in (u, v):
                if end not in self.breakable:
                    raise TrvbIdError(
                        f"Edge {edge_id} references the unknown vertex {end}"
                    )

        if self.rotation is None:
            return

        for vertex in self.breakable:
            expected = sorted(e for e, _ in self._ends_by_id(vertex))
            listed = sorted(self.rotation.get(vertex, ()))

            if expected != listed:
                raise InvariantViolation(
                    f"The rotation at vertex {vertex} lists edges {listed},"
                    f" but the incident edge-ends are {expected}"
                )

        for vertex in self.rotation:
            if vertex not in self.breakable:
                raise TrvbIdError(
                    f"The rotation system references the unknown vertex"
                    f" {vertex}"
                )

    @staticmethod
    def from_edges(
        breakable: Mapping[int, bool],
        edges: Iterable[tuple[int, int]],
        rotation: Mapping[int, Sequence[int]] | None = None,
    ) -> Multigraph:
        """
        Convenience constructor which numbers edges in the given order.
        """
        return Multigraph(
            breakable=dict(sorted(breakable.items())),
            edges={ii: (u, v) for ii, (u, v) in enumerate(edges)},
            rotation=(
                None
                if rotation is None
                else {v: tuple(order) for v, order in sorted(rotation.items())}
            ),
        )

    @property
    def vertices(self) -> list[int]:
        return sorted(self.breakable)

    def _ends_by_id(self, vertex: int) -> list[EdgeEnd]:
        result: list[EdgeEnd] = []

        for edge_id in sorted(self.edges):
            u, v = self.edges[edge_id]

            if u == vertex:
                result.append((edge_id, 0))

            if v == vertex:
                result.append((edge_id, 1))

        return result

    def edge_ends(self, vertex: int) -> list[EdgeEnd]:
        """
        Returns the edge-ends at a vertex as `(edge id, side)` pairs, where
        `side` is 0 for the first endpoint of the edge and 1 for the second.

        If a rotation system is present the ends are listed in rotation order,
        and the two ends of a self-loop are assigned sides in the order they
        appear. Otherwise the ends are ordered by edge id.


        ## Raises

        `TrvbIdError`: If the vertex doesn't exist.
        """
        if vertex not in self.breakable:
            raise TrvbIdError(f"There is no vertex with id {vertex}")

        if self.rotation is None:
            return self._ends_by_id(vertex)

        result: list[EdgeEnd] = []
        seen_loops: set[int] = set()

        for edge_id in self.rotation[vertex]:
            u, v = self.edges[edge_id]

            if u != v:
                result.append((edge_id, 0 if u == vertex else 1))
            elif edge_id in seen_loops:
                result.append((edge_id, 1))
            else:
                seen_loops.add(edge_id)
                result.append((edge_id, 0))

        return result

    def degree(self, vertex: int) -> int:
        """
        The number of edge-ends at a vertex. Self-loops count twice.
        """
        return sum(
            (u == vertex) + (v == vertex) for u, v in self.edges.values()
        )

    def to_networkx(self) -> nx.MultiGraph:
        """
        Converts the multigraph to `networkx`, keyed by edge id. Vertices carry
        a `breakable` attribute.
        """
        graph = nx.MultiGraph()

        for vertex, flag in sorted(self.breakable.items()):
            graph.add_node(vertex, breakable=flag)

        for edge_id, (u, v) in sorted(self.edges.items()):
            graph.add_edge(u, v, key=edge_id)

        return graph

    def is_isomorphic(self, other: Multigraph) -> bool:
        """
        Whether both multigraphs are isomorphic, respecting breakable flags.
        Rotation systems are ignored.
        """
        return nx.is_isomorphic(
            self.to_networkx(),
            other.to_networkx(),
            node_match=lambda a, b: a["breakable"] == b["breakable"],
        )


def break_vertex(m: Multigraph, v: int) -> Multigraph:
    """
    Breaks a vertex.

    The vertex is removed and one fresh, unbreakable vertex is added per
    edge-end it had. Fresh ids are allocated from the current maximum id
    onwards, in rotation order. The edge count is unchanged.


    ## Raises

    `TrvbIdError`: If the vertex doesn't exist.
    """
    ends = m.edge_ends(v)
    next_id = max(m.breakable) + 1

    breakable = {key: flag for key, flag in m.breakable.items() if key != v}
    edges = dict(m.edges)
    fresh_of_end: dict[EdgeEnd, int] = {}

    for end in ends:
        fresh_of_end[end] = next_id
        breakable[next_id] = False
        next_id += 1

    for (edge_id, side), fresh in fresh_of_end.items():
        u, w = edges[edge_id]
        edges[edge_id] = (fresh, w) if side == 0 else (u, fresh)

    rotation = None
    if m.rotation is not None:
        rotation = {key: order for key, order in m.rotation.items() if key != v}

        for (edge_id, _), fresh in fresh_of_end.items():
            rotation[fresh] = (edge_id,)

    return Multigraph(breakable, edges, rotation)


def break_vertices(m: Multigraph, ids: Iterable[int]) -> Multigraph:
    """
    Breaks several vertices, in increasing id order.
    """
    for v in sorted(ids):
        m = break_vertex(m, v)

    return m


def is_tree(m: Multigraph) -> bool:
    """
    Whether the multigraph is connected and has exactly one edge less than it
    has vertices. Self-loops and parallel edges are cycles.
    """
    if not m.breakable:
        return False

    if len(m.edges) != len(m.breakable) - 1:
        return False

    return nx.is_connected(m.to_networkx())


@dataclass(frozen=True)
class TrvbResult:
    """
    The outcome of solving a Tree-Residue Vertex-Breaking instance.

    ## Attributes

    `status`: `"yes"`, `"no"` or `"exhausted"` if the budget ran out.

    `breaking_set`: The vertices to break, if the answer is yes.

    `expansions`: How many search nodes were visited.
    """

    status: Literal["yes", "no", "exhausted"]
    breaking_set: frozenset[int] | None = None
    expansions: int = 0


class _DisjointSets:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {item: item for item in items}

    def find(self, item: int) -> int:
        parent = self.parent

        while parent[item] != item:
            parent[item] = parent[parent[item]]
            item = parent[item]

        return item

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def _connected_after_breaking(m: Multigraph, broken: set[int]) -> bool:
    """
    Whether breaking `broken` leaves the multigraph connected. Breaking only
    ever splits components, so this is monotone in `broken`.
    """
    kept = [v for v in m.breakable if v not in broken]

    # Edges with both ends broken become isolated components of their own
    stranded = sum(
        1 for u, v in m.edges.values() if u in broken and v in broken
    )

    if not kept:
        return stranded == 1 and len(m.edges) == 1

    if stranded:
        return False

    sets = _DisjointSets(kept)

    for u, v in m.edges.values():
        if u not in broken and v not in broken:
            sets.union(u, v)

    root = sets.find(kept[0])
    return all(sets.find(v) == root for v in kept)


def solve(m: Multigraph, *, budget: int = 10_000_000) -> TrvbResult:
    """
    Decides whether breaking some subset of the breakable vertices turns the
    multigraph into a tree.

    Breaking a set `B` adds `deg(v) - 1` vertices per member and keeps all
    edges, so a tree is only possible if these surpluses add up to exactly the
    cycle rank `|E| - |V| + 1`. The search walks the breakable vertices in id
    order, never breaks both ends of an edge (which would strand that edge),
    and abandons a branch as soon as the already broken vertices disconnect the
    graph.


    ## Parameters

    `m`: The instance.

    `budget`: The maximum number of search nodes to visit.


    ## Raises

    `InvariantViolation`: If a found breaking set fails to produce a tree. This
        is a bug.
    """
    if not m.breakable:
        return TrvbResult("no")

    degree = {v: m.degree(v) for v in m.breakable}

    # Without edges, a tree is a single remaining vertex
    if not m.edges:
        fixed = [v for v, flag in m.breakable.items() if not flag]

        if len(fixed) > 1:
            return TrvbResult("no")

        keep = fixed[0] if fixed else min(m.breakable)
        return TrvbResult("yes", frozenset(m.breakable) - {keep})

    # Otherwise isolated vertices have to go
    isolated = {v for v, d in degree.items() if d == 0}
    if any(not m.breakable[v] for v in isolated):
        return TrvbResult("no")

    if isolated and len(isolated) == len(m.breakable):
        return TrvbResult("no")

    # Neighbors, for the "never break both ends of an edge" rule
    adjacent: dict[int, set[int]] = {v: set() for v in m.breakable}
    for u, v in m.edges.values():
        adjacent[u].add(v)
        adjacent[v].add(u)

    # Breaking a degree-1 vertex changes nothing, so never bother
    candidates = [
        v
        for v in sorted(m.breakable)
        if m.breakable[v] and degree[v] >= 2
    ]

    vertices_after_isolated = len(m.breakable) - len(isolated)
    target = len(m.edges) - vertices_after_isolated + 1
    single_edge = len(m.edges) == 1

    # Largest surplus the remaining candidates could still contribute
    remaining = [0] * (len(candidates) + 1)
    for ii in range(len(candidates) - 1, -1, -1):
        remaining[ii] = remaining[ii + 1] + degree[candidates[ii]] - 1

    broken: set[int] = set(isolated)
    expansions = 0
    exhausted = False

    def search(index: int, surplus: int) -> bool:
        nonlocal expansions, exhausted

        if expansions >= budget:
            exhausted = True
            return False

        expansions += 1

        if surplus > target or surplus + remaining[index] < target:
            return False

        if not _connected_after_breaking(m, broken):
            return False

        if surplus == target:
            return True

        if index == len(candidates):
            return False

        v = candidates[index]

        if single_edge or not (adjacent[v] & broken) and v not in adjacent[v]:
            broken.add(v)

            if search(index + 1, surplus + degree[v] - 1):
                return True

            broken.discard(v)

        return search(index + 1, surplus)

    found = search(0, 0)

    if found:
        result_set = frozenset(broken)

        if not is_tree(break_vertices(m, result_set)):
            raise InvariantViolation(
                f"Breaking {sorted(result_set)} doesn't produce a tree"
            )

        _logger.debug(
            f"TRVB: breaking {sorted(result_set)} yields a tree"
            f" ({expansions} expansions)"
        )
        return TrvbResult("yes", result_set, expansions)

    if exhausted:
        return TrvbResult("exhausted", None, expansions)

    _logger.debug(f"TRVB: no breaking set exists ({expansions} expansions)")
    return TrvbResult("no", None, expansions)


def enumerate_solutions(m: Multigraph) -> list[frozenset[int]]:
    """
    Returns every subset of the breakable vertices whose breaking yields a
    tree, by trying all of them. Exponential, only meant as a reference for
    `solve`.
    """
    candidates = sorted(v for v, flag in m.breakable.items() if flag)
    result: list[frozenset[int]] = []

    for mask in range(1 << len(candidates)):
        subset = frozenset(
            v for ii, v in enumerate(candidates) if mask >> ii & 1
        )

        if is_tree(break_vertices(m, subset)):
            result.append(subset)

    return result


def is_planar_rotation(m: Multigraph) -> bool:
    """
    Whether the rotation system describes a planar embedding, by tracing its
    faces and checking Euler's formula on every component.


    ## Raises

    `InvariantViolation`: If the multigraph has no rotation system.
    """
    if m.rotation is None:
        raise InvariantViolation("The multigraph has no rotation system")

    # Where each edge-end sits in its vertex's rotation
    position: dict[EdgeEnd, tuple[int, int]] = {}
    ends_at: dict[int, list[EdgeEnd]] = {}

    for v in m.vertices:
        ends = m.edge_ends(v)
        ends_at[v] = ends

        for ii, end in enumerate(ends):
            position[end] = (v, ii)

    # A dart leaves through one end of an edge and arrives at the other
    visited: set[EdgeEnd] = set()
    face_count = 0

    for start in position:
        if start in visited:
            continue

        face_count += 1
        dart = start

        while dart not in visited:
            visited.add(dart)
            edge_id, side = dart
            vertex, index = position[edge_id, 1 - side]
            ends = ends_at[vertex]
            dart = ends[(index + 1) % len(ends)]

    graph = m.to_networkx()
    components = nx.number_connected_components(graph)
    isolated = sum(1 for v in m.vertices if m.degree(v) == 0)

    euler = len(m.breakable) - len(m.edges) + face_count + isolated
    return euler == 2 * components
