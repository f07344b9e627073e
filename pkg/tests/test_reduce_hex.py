import pytest

from hamgrid import grid_graph, ham_core, reduce_hex, trvb
from hamgrid.errors import LayoutError, ParameterError
from hamgrid.lattice import GridKind
from hamgrid.reduce_hex import HexCorrespondence
from hamgrid.trvb import Multigraph


def parallel(*, breakable: bool = True, planar: bool = True) -> Multigraph:
    """
    Two vertices joined by six parallel edges. Breaking either one leaves a
    star.
    """
    return Multigraph.from_edges(
        {0: breakable, 1: True},
        [(0, 1)] * 6,
        rotation={
            0: list(range(6)),
            1: list(range(5, -1, -1)) if planar else list(range(6)),
        },
    )


# A single vertex with three nested self-loops. Never a tree.
LOOPS = Multigraph.from_edges(
    {0: True},
    [(0, 0)] * 3,
    rotation={0: [0, 0, 1, 1, 2, 2]},
)


def tripled_cycle(n: int) -> Multigraph:
    """
    A cycle of `n` vertices with every edge tripled. Breaking a vertex turns
    its six edge-ends into leaves, so a tree would need `5k = 2n + 1` for the
    number `k` of broken vertices. Three and four vertices are never enough.
    """
    bundles = [[3 * ii, 3 * ii + 1, 3 * ii + 2] for ii in range(n)]

    return Multigraph.from_edges(
        {ii: True for ii in range(n)},
        [(ii, (ii + 1) % n) for ii in range(n) for _ in range(3)],
        rotation={
            ii: bundles[ii] + bundles[ii - 1][::-1] for ii in range(n)
        },
    )


def test_cell_distance() -> None:
    assert reduce_hex.cell_distance((0, 0), (0, 0)) == 0
    assert reduce_hex.cell_distance((0, 0), (1, 1)) == 1
    assert reduce_hex.cell_distance((0, 0), (2, 2)) == 2
    assert reduce_hex.cell_distance((0, 0), (3, 0)) == 2


def test_instances_are_planar() -> None:
    assert trvb.is_planar_rotation(parallel())
    assert trvb.is_planar_rotation(LOOPS)
    assert not trvb.is_planar_rotation(parallel(planar=False))

    assert trvb.solve(parallel()).status == "yes"
    assert trvb.solve(LOOPS).status == "no"


@pytest.mark.parametrize("n", [3, 4])
def test_tripled_cycles_are_no_instances(n: int) -> None:
    m = tripled_cycle(n)

    assert trvb.is_planar_rotation(m)
    assert trvb.solve(m).status == "no"


@pytest.mark.parametrize(
    "m",
    [
        Multigraph.from_edges({0: True, 1: True}, [(0, 1)], {0: [0], 1: [0]}),
        parallel(breakable=False),
        Multigraph.from_edges({0: True, 1: True}, [(0, 1)] * 6),
        parallel(planar=False),
    ],
    ids=["degree", "unbreakable", "no-rotation", "not-planar"],
)
def test_instance_checks(m: Multigraph) -> None:
    with pytest.raises(ParameterError):
        reduce_hex.compile(m)


def test_negative_spacing() -> None:
    with pytest.raises(ParameterError):
        reduce_hex.layout(parallel(), spacing=-1)


def test_attempts_must_be_positive() -> None:
    with pytest.raises(ParameterError):
        reduce_hex.layout(parallel(), attempts=0)


def test_layout_gives_up() -> None:
    # Every stub tip on top of a gadget lies outside a zero margin
    with pytest.raises(LayoutError):
        reduce_hex.layout(parallel(), margin=0, attempts=2)


def test_self_loops_stay_on_one_side() -> None:
    placed = reduce_hex.layout(LOOPS)

    for (_, first), (_, second) in placed.ports.values():
        assert first // 2 == second // 2


def _check_compiled(m: Multigraph) -> None:
    g, corr = reduce_hex.compile(m)
    report = grid_graph.classify(g)

    assert g.kind is GridKind.HEXAGONAL
    assert report.connected
    assert report.thin
    assert report.min_degree_ok

    assert [region.id for region in corr.gadgets] == m.vertices
    assert sorted(region.id for region in corr.wires) == sorted(m.edges)

    # Wires and gadgets never share a cell
    gadget_cells = {
        tuple(c) for region in corr.gadgets for c in region.anchors
    }
    for wire in corr.wires:
        assert len(wire) > 0
        assert not gadget_cells & {tuple(c) for c in wire.anchors}


@pytest.mark.parametrize("m", [parallel(), LOOPS], ids=["parallel", "loops"])
def test_compile(m: Multigraph) -> None:
    _check_compiled(m)


@pytest.mark.slow
@pytest.mark.parametrize("n", [3, 4])
def test_compile_tripled_cycle(n: int) -> None:
    _check_compiled(tripled_cycle(n))


@pytest.mark.slow
def test_gadgets_fill_a_square() -> None:
    placed = reduce_hex.layout(tripled_cycle(4))
    anchors = {v: p.anchor.anchor for v, p in placed.placement.items()}

    assert len({a.b for a in anchors.values()}) == 2
    assert len(set(anchors.values())) == 4

    # Consecutive vertices of the cycle sit next to each other, never across
    # a diagonal of the square
    def gap(u: int, v: int) -> int:
        return reduce_hex.cell_distance(anchors[u], anchors[v])

    diagonal = max(gap(0, 2), gap(1, 3))
    for ii in range(4):
        assert gap(ii, (ii + 1) % 4) < diagonal


def test_layout_is_deterministic() -> None:
    first = reduce_hex.layout(parallel())
    second = reduce_hex.layout(parallel())

    assert first.routes == second.routes
    assert first.placement == second.placement


def test_correspondence_round_trips() -> None:
    _, corr = reduce_hex.compile(parallel())
    doc = corr.as_json()

    assert HexCorrespondence.from_json(doc) == corr


@pytest.mark.slow
def test_breakable_instance_is_hamiltonian() -> None:
    g, corr = reduce_hex.compile(parallel())
    result = ham_core.find_hamiltonian(g)

    assert result.status == "found"
    assert result.certificate is not None

    broken = reduce_hex.extract_breaking_set(corr, result.certificate)

    assert len(broken) == 1
    assert trvb.is_tree(trvb.break_vertices(parallel(), broken))


@pytest.mark.slow
@pytest.mark.parametrize(
    "m",
    [LOOPS, tripled_cycle(3), tripled_cycle(4)],
    ids=["loops", "tripled-3", "tripled-4"],
)
def test_no_instances_are_not_hamiltonian(m: Multigraph) -> None:
    assert trvb.solve(m).status == "no"

    g, _ = reduce_hex.compile(m)
    assert ham_core.find_hamiltonian(g).status == "none"
