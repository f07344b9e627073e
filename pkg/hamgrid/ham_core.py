"""
Exact Hamiltonicity search on grid graphs.

The oracle is a backtracking search over edge decisions. Every decision is
followed by forced-edge propagation:

- a vertex with two chosen edges drops all of its other edges,
- a vertex with only two usable edges left must use both of them,
- an edge which would close a path fragment into a cycle that doesn't cover
  all vertices is dropped.

After propagation the usable edges must still form a 2-connected graph on all
vertices. Then every undecided edge is probed: if deciding it one way
contradicts propagation, it is decided the other way. Bipartite lattices
additionally require both color classes to have equal size.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import *  # type: ignore

from . import lattice
from .errors import CapacityError, InvariantViolation
from .grid_graph import Edge, GridGraph, edge_key, make_edge, vertex_key
from .lattice import Coord

__all__ = [
    "CycleCertificate",
    "VerificationResult",
    "HamResult",
    "LocalSolutionSpec",
    "DEFAULT_BUDGET",
    "DEFAULT_LOCAL_CAP",
    "find_hamiltonian",
    "verify_cycle",
    "enumerate_local_solutions",
    "count_hamiltonian_cycles",
    "brute_force_hamiltonian",
]


_logger = logging.getLogger(__name__)


DEFAULT_BUDGET = 50_000_000
DEFAULT_LOCAL_CAP = 64

_UNDECIDED = 0
_IN = 1
_OUT = 2


@dataclass(frozen=True)
class CycleCertificate:
    """
    An edge set claimed to be a Hamiltonian cycle. Use `verify_cycle` to check
    the claim.
    """

    edges: frozenset[Edge]

    @staticmethod
    def from_edges(edges: Iterable[tuple[Coord, Coord]]) -> CycleCertificate:
        return CycleCertificate(frozenset(make_edge(u, v) for u, v in edges))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=edge_key)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class VerificationResult:
    """
    The outcome of `verify_cycle`.

    ## Attributes

    `passed`: Whether the certificate is a Hamiltonian cycle.

    `reason`: Which check failed: `"edge"`, `"degree"` or `"disconnected"`.
        `None` if the certificate passed.

    `detail`: A human-readable description of the failure.
    """

    passed: bool
    reason: Literal["edge", "degree", "disconnected"] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class HamResult:
    """
    The outcome of a Hamiltonicity search.

    `"exhausted"` means the search ran out of budget. It never stands in for a
    definite answer.

    ## Attributes

    `status`: `"found"`, `"none"` or `"exhausted"`.

    `certificate`: The Hamiltonian cycle, if one was found.

    `expansions`: How many branching decisions the search made.
    """

    status: Literal["found", "none", "exhausted"]
    certificate: CycleCertificate | None = None
    expansions: int = 0

    @property
    def is_definite(self) -> bool:
        return self.status != "exhausted"


def verify_cycle(g: GridGraph, cert: CycleCertificate) -> VerificationResult:
    """
    Checks whether a certificate is a Hamiltonian cycle of `g`: every edge
    must be a graph edge, every vertex must have exactly two certificate edges,
    and the edges must form a single cycle.
    """
    for u, v in cert.sorted_edges():
        if not g.has_edge(u, v):
            return VerificationResult(
                False,
                "edge",
                f"{tuple(u)}-{tuple(v)} is not an edge of the graph",
            )

    incident: dict[Coord, list[Coord]] = {v: [] for v in g.vertices}
    for u, v in cert.edges:
        incident[u].append(v)
        incident[v].append(u)

    for v in g.vertices:
        if len(incident[v]) != 2:
            return VerificationResult(
                False,
                "degree",
                f"{tuple(v)} has {len(incident[v])} certificate edges instead"
                f" of 2",
            )

    if not g.vertices:
        return VerificationResult(
            False,
            "disconnected",
            "The graph has no vertices",
        )

    # Walk the cycle
    start = g.vertices[0]
    previous, current = start, incident[start][0]
    length = 1

    while current != start:
        a, b = incident[current]
        previous, current = current, (b if a == previous else a)
        length += 1

    if length != len(g.vertices):
        return VerificationResult(
            False,
            "disconnected",
            f"The cycle through {tuple(start)} only covers {length} of"
            f" {len(g.vertices)} vertices",
        )

    return VerificationResult(True)


class _Search:
    """
    Mutable search state shared by the oracle and the local enumerator.

    All modifications are recorded on a trail, so any state can be restored by
    undoing back to an earlier trail length.
    """

    def __init__(
        self,
        g: GridGraph,
        edges: list[Edge],
        exact: set[int],
    ) -> None:
        self.graph = g
        self.index = {v: ii for ii, v in enumerate(g.vertices)}
        self.vertex_count = len(g.vertices)

        self.ends = [(self.index[u], self.index[v]) for u, v in edges]
        self.edges = edges
        self.edge_of_pair = {
            frozenset(pair): ii for ii, pair in enumerate(self.ends)
        }

        self.incident: list[list[int]] = [[] for _ in g.vertices]
        for ii, (u, v) in enumerate(self.ends):
            self.incident[u].append(ii)
            self.incident[v].append(ii)

        # Vertices which need exactly two edges. All others need at most two
        self.exact = exact

        self.state = [_UNDECIDED] * len(edges)
        self.deg_in = [0] * self.vertex_count
        self.deg_open = [len(inc) for inc in self.incident]

        # Path fragments formed by chosen edges. `partner[v]` is the other end
        # of the fragment `v` ends, `size[v]` its number of vertices
        self.partner = list(range(self.vertex_count))
        self.size = [1] * self.vertex_count

        self.trail: list[tuple[list[int], int, int]] = []
        self.queue: list[int] = []

    def _set(self, array: list[int], index: int, value: int) -> None:
        self.trail.append((array, index, array[index]))
        array[index] = value

    def undo(self, mark: int) -> None:
        trail = self.trail

        while len(trail) > mark:
            array, index, value = trail.pop()
            array[index] = value

        self.queue.clear()

    def assign(self, edge: int, value: int) -> bool:
        """
        Decides an edge and propagates the consequences. Returns `False` if a
        contradiction was found. The caller is responsible for undoing.
        """
        if not self._decide(edge, value):
            return False

        return self.propagate()

    def _decide(self, edge: int, value: int) -> bool:
        current = self.state[edge]

        if current != _UNDECIDED:
            return current == value

        u, v = self.ends[edge]
        self._set(self.state, edge, value)
        self._set(self.deg_open, u, self.deg_open[u] - 1)
        self._set(self.deg_open, v, self.deg_open[v] - 1)

        if value == _IN:
            self._set(self.deg_in, u, self.deg_in[u] + 1)
            self._set(self.deg_in, v, self.deg_in[v] + 1)

            if self.deg_in[u] > 2 or self.deg_in[v] > 2:
                return False

            if not self._join(u, v):
                return False

        self.queue.append(u)
        self.queue.append(v)
        return True

    def _join(self, u: int, v: int) -> bool:
        pu = self.partner[u]
        pv = self.partner[v]

        # Closing a fragment into a cycle
        if pu == v:
            return self._closing_allowed(self.size[u])

        size = self.size[u] + self.size[v]
        self._set(self.partner, pu, pv)
        self._set(self.partner, pv, pu)
        self._set(self.size, pu, size)
        self._set(self.size, pv, size)

        # The edge between the new fragment's ends would close it prematurely
        if size < self.vertex_count:
            closing = self.edge_of_pair.get(frozenset((pu, pv)))

            if closing is not None and self.state[closing] == _UNDECIDED:
                if not self._closing_allowed(size):
                    return self._decide(closing, _OUT)

        return True

    def _closing_allowed(self, size: int) -> bool:
        return size == self.vertex_count

    def propagate(self) -> bool:
        queue = self.queue

        while queue:
            v = queue.pop()
            deg_in = self.deg_in[v]
            deg_open = self.deg_open[v]

            if deg_in > 2:
                return False

            if deg_in == 2:
                if deg_open == 0:
                    continue

                for edge in self.incident[v]:
                    if self.state[edge] == _UNDECIDED:
                        if not self._decide(edge, _OUT):
                            return False

            elif v in self.exact:
                if deg_in + deg_open < 2:
                    return False

                if deg_in + deg_open == 2 and deg_open > 0:
                    for edge in self.incident[v]:
                        if self.state[edge] == _UNDECIDED:
                            if not self._decide(edge, _IN):
                                return False

        return True

    def choose(self) -> int | None:
        """
        Picks the next edge to branch on: an undecided edge at the vertex with
        the fewest undecided edges, ties broken by canonical vertex order.
        """
        best_vertex = -1
        best_open = 1 << 30

        for v in range(self.vertex_count):
            deg_open = self.deg_open[v]

            if deg_open == 0 or self.deg_in[v] >= 2:
                continue

            if deg_open < best_open:
                best_open = deg_open
                best_vertex = v

                if deg_open == 1:
                    break

        if best_vertex < 0:
            return None

        for edge in self.incident[best_vertex]:
            if self.state[edge] == _UNDECIDED:
                return edge

        raise InvariantViolation("Open vertex without an undecided edge")

    def chosen_edges(self) -> list[Edge]:
        return [
            self.edges[ii]
            for ii, state in enumerate(self.state)
            if state == _IN
        ]


class _HamiltonSearch(_Search):
    def __init__(self, g: GridGraph, *, probing: bool = True) -> None:
        edges = sorted(g.edges, key=edge_key)
        super().__init__(g, edges, exact=set(range(len(g.vertices))))
        self.probing = probing

    def biconnected(self) -> bool:
        """
        Whether the edges which aren't excluded still form a 2-connected
        graph spanning all vertices. A Hamiltonian cycle can't pass through
        an articulation point.
        """
        n = self.vertex_count

        if n == 0:
            return True

        disc = [0] * n
        low = [0] * n
        cursor = [0] * n
        parent = [-1] * n
        parent_edge = [-1] * n

        time = 1
        disc[0] = low[0] = 1
        stack = [0]
        root_children = 0

        while stack:
            v = stack[-1]
            incident = self.incident[v]

            if cursor[v] < len(incident):
                edge = incident[cursor[v]]
                cursor[v] += 1

                if self.state[edge] == _OUT or edge == parent_edge[v]:
                    continue

                a, b = self.ends[edge]
                w = b if a == v else a

                if not disc[w]:
                    time += 1
                    disc[w] = low[w] = time
                    parent[w] = v
                    parent_edge[w] = edge
                    stack.append(w)

                    if v == 0:
                        root_children += 1

                elif disc[w] < low[v]:
                    low[v] = disc[w]

                continue

            stack.pop()
            p = parent[v]

            if p >= 0:
                if low[v] < low[p]:
                    low[p] = low[v]

                if p != 0 and low[v] >= disc[p]:
                    return False

        return time == n and root_children <= 1

    def probe(self) -> bool:
        """
        Failed-literal probing: tentatively decides every undecided edge both
        ways. If one way contradicts propagation, the other way is forced.
        Repeats until nothing changes. Returns `False` if some edge can go
        neither way.
        """
        changed = True

        while changed:
            changed = False

            for edge in range(len(self.state)):
                if self.state[edge] != _UNDECIDED:
                    continue

                for value, opposite in ((_IN, _OUT), (_OUT, _IN)):
                    mark = len(self.trail)
                    ok = self.assign(edge, value)
                    self.undo(mark)

                    if ok:
                        continue

                    if not (self.assign(edge, opposite) and self.biconnected()):
                        return False

                    changed = True
                    break

        return True

    def apply(self, edge: int, value: int) -> bool:
        return self.refine(self.assign(edge, value))

    def refine(self, ok: bool) -> bool:
        ok = ok and self.biconnected()

        if ok and self.probing:
            ok = self.probe()

        return ok


def _parity_ok(g: GridGraph) -> bool:
    classes = [lattice.color_class(g.kind, v) for v in g.vertices]

    if classes and classes[0] is None:
        return True

    return classes.count(0) == classes.count(1)


def find_hamiltonian(
    g: GridGraph,
    budget: int = DEFAULT_BUDGET,
    *,
    probing: bool = True,
) -> HamResult:
    """
    Searches for a Hamiltonian cycle.

    The result is `"found"` together with a verified certificate, `"none"`
    once the whole search space has been ruled out, or `"exhausted"` if the
    budget ran out first.


    ## Parameters

    `g`: The graph to search. Disconnected graphs and graphs with a vertex of
        degree below 2 are answered `"none"` without search.

    `budget`: The maximum number of branching decisions.

    `probing`: Whether to probe undecided edges after every decision. Probing
        makes each decision more expensive, but prunes gadget-built graphs
        down to a handful of decisions.


    ## Raises

    `InvariantViolation`: If the search produced a certificate which fails
        verification. This is a bug.
    """
    if len(g.vertices) < 3 or not g.is_connected():
        return HamResult("none")

    if any(g.degree(v) < 2 for v in g.vertices):
        return HamResult("none")

    if not _parity_ok(g):
        _logger.debug("Color classes differ in size, no Hamiltonian cycle")
        return HamResult("none")

    search = _HamiltonSearch(g, probing=probing)
    search.queue.extend(range(search.vertex_count))
    result = _backtrack(search, budget)

    if result.status == "found":
        assert result.certificate is not None
        verdict = verify_cycle(g, result.certificate)

        if not verdict:
            raise InvariantViolation(
                f"The search produced an invalid cycle: {verdict.detail}"
            )

    _logger.debug(
        f"Hamiltonicity search on {len(g.vertices)} vertices: {result.status}"
        f" after {result.expansions} expansions"
    )
    return result


def _backtrack(search: _HamiltonSearch, budget: int) -> HamResult:
    expansions = 0
    stack: list[tuple[int, int, int]] = []
    ok = search.refine(search.propagate())

    while True:
        if ok:
            edge = search.choose()

            if edge is None:
                # Everything is decided and consistent, so the chosen edges
                # form a single spanning cycle
                cert = CycleCertificate.from_edges(search.chosen_edges())
                return HamResult("found", cert, expansions)

            if expansions >= budget:
                return HamResult("exhausted", None, expansions)

            expansions += 1
            stack.append((len(search.trail), edge, _IN))
            ok = search.apply(edge, _IN)
            continue

        # Backtrack to the most recent decision with an untried branch
        while not ok:
            if not stack:
                return HamResult("none", None, expansions)

            mark, edge, value = stack.pop()
            search.undo(mark)

            if value == _IN:
                stack.append((mark, edge, _OUT))
                ok = search.apply(edge, _OUT)


def count_hamiltonian_cycles(
    g: GridGraph,
    *,
    limit: int = 1000,
    budget: int = DEFAULT_BUDGET,
) -> list[CycleCertificate]:
    """
    Enumerates Hamiltonian cycles of a small graph, stopping after `limit`
    cycles.


    ## Raises

    `CapacityError`: If the budget runs out before the enumeration completes.
    """
    if len(g.vertices) < 3 or not g.is_connected() or not _parity_ok(g):
        return []

    if any(g.degree(v) < 2 for v in g.vertices):
        return []

    search = _HamiltonSearch(g)
    search.queue.extend(range(search.vertex_count))
    found: list[CycleCertificate] = []
    expansions = 0
    stack: list[tuple[int, int, int]] = []
    ok = search.refine(search.propagate())

    while True:
        if ok:
            edge = search.choose()

            if edge is None:
                found.append(CycleCertificate.from_edges(search.chosen_edges()))

                if len(found) >= limit:
                    return found

                ok = False
                continue

            if expansions >= budget:
                raise CapacityError(
                    f"Enumerating Hamiltonian cycles needed more than {budget}"
                    f" expansions"
                )

            expansions += 1
            stack.append((len(search.trail), edge, _IN))
            ok = search.apply(edge, _IN)
            continue

        while not ok:
            if not stack:
                return found

            mark, edge, value = stack.pop()
            search.undo(mark)

            if value == _IN:
                stack.append((mark, edge, _OUT))
                ok = search.apply(edge, _OUT)


def brute_force_hamiltonian(g: GridGraph) -> bool:
    """
    Decides Hamiltonicity by trying every vertex order. Only usable for tiny
    graphs, as a reference for the real search.
    """
    vertices = list(g.vertices)

    if len(vertices) < 3:
        return False

    first, rest = vertices[0], vertices[1:]

    for order in itertools.permutations(rest):
        # Each cycle is visited in both directions, so skip one of them
        if vertex_key(order[0]) > vertex_key(order[-1]):
            continue

        path = (first, *order, first)

        if all(g.has_edge(a, b) for a, b in itertools.pairwise(path)):
            return True

    return False


@dataclass(frozen=True)
class LocalSolutionSpec:
    """
    A window of a grid graph, within which local solutions are enumerated.

    ## Attributes

    `window`: The vertices which must have exactly two chosen edges.

    `forced_in`: Edges every solution must contain.

    `forced_out`: Edges no solution may contain.

    `port_edges`: The edges crossing the window boundary. Filled in by
        `with_ports` if not given.
    """

    window: frozenset[Coord]
    forced_in: frozenset[Edge] = frozenset()
    forced_out: frozenset[Edge] = frozenset()
    port_edges: frozenset[Edge] = field(default=frozenset())

    def __post_init__(self) -> None:
        overlap = self.forced_in & self.forced_out
        if overlap:
            raise InvariantViolation(
                f"Edges can't be both forced in and out: {sorted(overlap)}"
            )

        for u, v in self.forced_in | self.forced_out:
            if u not in self.window and v not in self.window:
                raise InvariantViolation(
                    f"The forced edge {tuple(u)}-{tuple(v)} doesn't touch the"
                    f" window"
                )

    @staticmethod
    def with_ports(
        g: GridGraph,
        window: Iterable[Coord],
        forced_in: Iterable[Edge] = (),
        forced_out: Iterable[Edge] = (),
    ) -> LocalSolutionSpec:
        window_set = frozenset(window)
        ports = frozenset(
            (u, v) for u, v in g.edges if (u in window_set) != (v in window_set)
        )

        return LocalSolutionSpec(
            window=window_set,
            forced_in=frozenset(make_edge(u, v) for u, v in forced_in),
            forced_out=frozenset(make_edge(u, v) for u, v in forced_out),
            port_edges=ports,
        )


class _LocalSearch(_Search):
    def __init__(self, g: GridGraph, spec: LocalSolutionSpec) -> None:
        window = spec.window
        edges = sorted(
            (e for e in g.edges if e[0] in window or e[1] in window),
            key=edge_key,
        )

        index = {v: ii for ii, v in enumerate(g.vertices)}
        super().__init__(g, edges, exact={index[v] for v in window})
        self.window_index = {index[v] for v in window}

    def _join(self, u: int, v: int) -> bool:
        if self.partner[u] == v:
            return not self._cycle_inside(u)

        pu = self.partner[u]
        pv = self.partner[v]
        size = self.size[u] + self.size[v]
        self._set(self.partner, pu, pv)
        self._set(self.partner, pv, pu)
        self._set(self.size, pu, size)
        self._set(self.size, pv, size)
        return True

    def _cycle_inside(self, start: int) -> bool:
        # Walk the freshly closed cycle
        previous, current = -1, start

        while True:
            if current not in self.window_index:
                return False

            following = -1
            for edge in self.incident[current]:
                if self.state[edge] != _IN:
                    continue

                a, b = self.ends[edge]
                other = b if a == current else a

                if other != previous:
                    following = other
                    break

            if following < 0:
                return False

            previous, current = current, following

            if current == start:
                return True


def enumerate_local_solutions(
    g: GridGraph,
    spec: LocalSolutionSpec,
    *,
    cap: int = DEFAULT_LOCAL_CAP,
    limit: int | None = None,
) -> list[frozenset[Edge]]:
    """
    Enumerates all ways a cycle cover can pass through a window.

    The candidate edges are all edges touching the window. A local solution is
    a subset of them in which every window vertex has exactly two chosen edges
    and every vertex outside of the window at most two, which contains all
    forced-in edges and no forced-out edges, and which has no cycle lying
    entirely inside the window.

    Solutions are returned in a deterministic order.


    ## Parameters

    `g`: The graph containing the window.

    `spec`: The window and its forced edges.

    `cap`: The maximum number of window vertices left undecided after the
        initial propagation.

    `limit`: Stop after this many solutions.


    ## Raises

    `CapacityError`: If more than `cap` window vertices remain undecided after
        the initial propagation.
    """
    if not spec.window:
        return [frozenset()]

    search = _LocalSearch(g, spec)
    edge_index = {e: ii for ii, e in enumerate(search.edges)}
    search.queue.extend(search.window_index)
    ok = True

    for e in sorted(spec.forced_in, key=edge_key):
        ok = ok and e in edge_index and search.assign(edge_index[e], _IN)

    for e in sorted(spec.forced_out, key=edge_key):
        if ok and e in edge_index:
            ok = search.assign(edge_index[e], _OUT)

    ok = ok and search.propagate()

    if not ok:
        return []

    free = sum(
        1 for v in search.window_index if search.deg_open[v] > 0
    )
    if free > cap:
        raise CapacityError(
            f"The window has {free} undecided vertices, more than the cap"
            f" of {cap}"
        )

    solutions: list[frozenset[Edge]] = []
    stack: list[tuple[int, int, int]] = []

    while True:
        if ok:
            edge = _first_undecided(search)

            if edge is None:
                solutions.append(frozenset(search.chosen_edges()))

                if limit is not None and len(solutions) >= limit:
                    return solutions

                ok = False
                continue

            stack.append((len(search.trail), edge, _IN))
            ok = search.assign(edge, _IN)
            continue

        while not ok:
            if not stack:
                return solutions

            mark, edge, value = stack.pop()
            search.undo(mark)

            if value == _IN:
                stack.append((mark, edge, _OUT))
                ok = search.assign(edge, _OUT)


def _first_undecided(search: _Search) -> int | None:
    for ii, state in enumerate(search.state):
        if state == _UNDECIDED:
            return ii

    return None
