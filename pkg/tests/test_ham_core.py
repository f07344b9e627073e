import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamgrid import ham_core
from hamgrid.grid_graph import GridGraph, build, make_edge
from hamgrid.ham_core import (
    CycleCertificate,
    HamResult,
    LocalSolutionSpec,
    enumerate_local_solutions,
    find_hamiltonian,
    verify_cycle,
)
from hamgrid.lattice import Cell, Coord, GridKind

SQUARE = GridKind.SQUARE


def box(width: int, height: int) -> GridGraph:
    return build(SQUARE, [(x, y) for x in range(width) for y in range(height)])


def perimeter(
    x0: int, y0: int, x1: int, y1: int
) -> list[tuple[Coord, Coord]]:
    corners = [(x, y0) for x in range(x0, x1)]
    corners += [(x1, y) for y in range(y0, y1)]
    corners += [(x, y1) for x in range(x1, x0, -1)]
    corners += [(x0, y) for y in range(y1, y0, -1)]

    return [
        make_edge(corners[ii], corners[(ii + 1) % len(corners)])
        for ii in range(len(corners))
    ]


def test_single_pixel_cycle() -> None:
    g = box(2, 2)
    result = find_hamiltonian(g)

    assert result.status == "found"
    assert result.is_definite
    assert result.certificate is not None
    assert len(result.certificate) == 4
    assert verify_cycle(g, result.certificate)


def test_single_triangle() -> None:
    g = GridGraph.from_cells(
        GridKind.TRIANGULAR,
        [Cell(GridKind.TRIANGULAR, Coord(0, 0), "up")],
    )
    result = find_hamiltonian(g)

    assert result.status == "found"
    assert result.certificate is not None
    assert len(result.certificate) == 3


@pytest.mark.parametrize(
    "graph",
    [
        box(3, 3),  # Odd number of vertices on a bipartite lattice
        build(SQUARE, [(0, 0), (1, 0), (2, 0)]),
        build(SQUARE, [(0, 0), (1, 0), (0, 1), (1, 1), (5, 5)]),
    ],
    ids=["odd-block", "path", "disconnected"],
)
def test_non_hamiltonian(graph: GridGraph) -> None:
    assert find_hamiltonian(graph).status == "none"


@pytest.mark.parametrize(
    "width, height, count",
    [
        (3, 2, 1),
        (4, 3, 2),
        (4, 4, 6),
        (6, 3, 4),
    ],
)
def test_cycle_counts(width: int, height: int, count: int) -> None:
    g = box(width, height)
    cycles = ham_core.count_hamiltonian_cycles(g)

    assert len(cycles) == count
    assert len(set(cycles)) == count

    for cert in cycles:
        assert verify_cycle(g, cert)


def test_count_respects_the_limit() -> None:
    assert len(ham_core.count_hamiltonian_cycles(box(4, 4), limit=2)) == 2


def test_verification_failures() -> None:
    g = box(3, 2)

    foreign = CycleCertificate.from_edges([((0, 0), (1, 1))])
    assert verify_cycle(g, foreign).reason == "edge"

    short = CycleCertificate.from_edges(perimeter(0, 0, 1, 1))
    verdict = verify_cycle(g, short)
    assert not verdict
    assert verdict.reason == "degree"

    full = CycleCertificate.from_edges(perimeter(0, 0, 2, 1))
    assert verify_cycle(g, full)


def test_two_cycles_are_not_one() -> None:
    # A 4x4 ring of pixels: outer and inner boundary cover every vertex
    g = build(
        SQUARE,
        [(x, y) for x in range(5) for y in range(5) if (x, y) != (2, 2)],
    )
    cert = CycleCertificate.from_edges(
        perimeter(0, 0, 4, 4) + perimeter(1, 1, 3, 3)
    )
    verdict = verify_cycle(g, cert)

    assert not verdict
    assert verdict.reason == "disconnected"


def test_exhausted_is_never_definite() -> None:
    assert not HamResult("exhausted").is_definite
    assert HamResult("none").is_definite


def test_local_solutions_of_a_pixel_next_to_a_wire() -> None:
    g = box(3, 2)
    window = [Coord(0, 0), Coord(1, 0), Coord(0, 1), Coord(1, 1)]
    spec = LocalSolutionSpec.with_ports(g, window)

    solutions = enumerate_local_solutions(g, spec)

    # Closing the left pixel into a cycle of its own is not allowed
    assert solutions == [
        frozenset(
            {
                make_edge((0, 0), (1, 0)),
                make_edge((0, 0), (0, 1)),
                make_edge((0, 1), (1, 1)),
                make_edge((1, 0), (2, 0)),
                make_edge((1, 1), (2, 1)),
            }
        )
    ]
    assert spec.port_edges == {
        make_edge((1, 0), (2, 0)),
        make_edge((1, 1), (2, 1)),
    }


def test_forced_edges() -> None:
    g = box(3, 2)
    window = [Coord(0, 0), Coord(1, 0), Coord(0, 1), Coord(1, 1)]
    spec = LocalSolutionSpec.with_ports(
        g,
        window,
        forced_out=[((1, 0), (2, 0))],
    )

    assert enumerate_local_solutions(g, spec) == []


def test_contradictory_forcing() -> None:
    with pytest.raises(ham_core.InvariantViolation):
        edge = make_edge((0, 0), (1, 0))
        LocalSolutionSpec(
            window=frozenset({Coord(0, 0)}),
            forced_in=frozenset({edge}),
            forced_out=frozenset({edge}),
        )


@given(
    st.sets(
        st.tuples(st.integers(0, 2), st.integers(0, 2)),
        min_size=3,
        max_size=9,
    )
)
@settings(max_examples=50, deadline=None)
def test_search_agrees_with_brute_force(
    coords: set[tuple[int, int]],
) -> None:
    g = build(SQUARE, coords)
    result = find_hamiltonian(g)

    assert result.is_definite
    assert (result.status == "found") == ham_core.brute_force_hamiltonian(g)


@given(
    st.sets(
        st.tuples(st.integers(0, 3), st.integers(0, 2)),
        min_size=3,
        max_size=9,
    )
)
@settings(max_examples=40, deadline=None)
def test_triangular_search_agrees_with_brute_force(
    coords: set[tuple[int, int]],
) -> None:
    g = build(GridKind.TRIANGULAR, coords)
    result = find_hamiltonian(g, probing=False)

    assert (result.status == "found") == ham_core.brute_force_hamiltonian(g)
