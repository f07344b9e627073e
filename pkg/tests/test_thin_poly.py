import pytest

from hamgrid import grid_graph, ham_core, thin_poly
from hamgrid.errors import ClassificationError
from hamgrid.generate import Shape, generate
from hamgrid.grid_graph import GridGraph
from hamgrid.lattice import Cell, Coord, GridKind

SQUARE = GridKind.SQUARE
HEXAGONAL = GridKind.HEXAGONAL


def square_cells(*anchors: tuple[int, int]) -> GridGraph:
    return GridGraph.from_cells(
        SQUARE, [Cell(SQUARE, Coord(*a)) for a in anchors]
    )


def hex_cells(*anchors: tuple[int, int]) -> GridGraph:
    return GridGraph.from_cells(
        HEXAGONAL, [Cell(HEXAGONAL, Coord(*a)) for a in anchors]
    )


SQUARE_RING = square_cells(
    *[(x, y) for x in range(4) for y in range(4) if x in (0, 3) or y in (0, 3)]
)

# Nine hexagons around a hole of three. Every pixel has two neighbors.
HEX_RING = hex_cells(
    (-1, 2), (-2, 1), (-1, -1), (1, -2), (2, 2),
    (0, 3), (3, 0), (3, -3), (4, -2),
)


def test_square_ring() -> None:
    cert = thin_poly.solve_square(SQUARE_RING)

    assert len(cert) == 24
    assert ham_core.verify_cycle(SQUARE_RING, cert)


def test_square_strip_without_pixel_cycles() -> None:
    g = square_cells((0, 0), (1, 0), (2, 0), (2, 1))
    cert = thin_poly.solve_square(g)

    assert len(cert) == len(g)
    assert ham_core.verify_cycle(g, cert)


def test_removable_pixel_of_a_ring() -> None:
    pixels = grid_graph.pixel_graph(SQUARE_RING)
    witness = thin_poly.find_removable_pixel(SQUARE_RING, pixels)

    assert len(witness.cycle) == 12
    assert witness.removable == Cell(SQUARE, Coord(0, 1))


@pytest.mark.parametrize(
    "graph",
    [
        square_cells((0, 0), (1, 0), (0, 1), (1, 1)),
        square_cells((0, 0), (1, 1)),
        hex_cells((0, 0)),
    ],
    ids=["not-thin", "not-polygonal", "hexagonal"],
)
def test_square_solver_checks_its_input(graph: GridGraph) -> None:
    with pytest.raises(ClassificationError) as info:
        thin_poly.solve_square(graph)

    assert info.value.report.kind is graph.kind


def test_single_hexagon() -> None:
    g = hex_cells((0, 0))

    assert thin_poly.hex_to_trvb(g) is None

    cert = thin_poly.solve_hex(g)
    assert cert is not None
    assert len(cert) == 6


def test_hex_strip() -> None:
    g = hex_cells((0, 0), (2, -1), (4, -2))
    converted = thin_poly.hex_to_trvb(g)

    assert converted is not None
    m, corr = converted
    assert len(m.vertices) == 3
    assert len(m.edges) == 2
    assert corr.breakable_ids == frozenset()

    cert = thin_poly.solve_hex(g)
    assert cert is not None
    assert ham_core.verify_cycle(g, cert)


def test_hex_ring_is_not_hamiltonian() -> None:
    report = grid_graph.classify(HEX_RING)

    assert report.thin
    assert report.polygonal
    assert report.hole_count == 1

    assert thin_poly.solve_hex(HEX_RING) is None
    assert ham_core.find_hamiltonian(HEX_RING).status == "none"
    assert not thin_poly.pixel_tree_condition(
        HEX_RING, HEX_RING.face_decomposition.pixels
    )


def test_hexagon_with_three_arms() -> None:
    # The middle pixel has three neighbors but none of its neighbors does, so
    # it must stay in the tree
    g = hex_cells((0, 0), (1, 1), (-2, 1), (1, -2))
    converted = thin_poly.hex_to_trvb(g)

    assert converted is not None
    _, corr = converted
    assert len(corr.breakable_ids) == 1

    cert = thin_poly.solve_hex(g)
    assert cert is not None
    assert ham_core.verify_cycle(g, cert)


def test_triangular_goes_to_the_oracle() -> None:
    g = GridGraph.from_cells(
        GridKind.TRIANGULAR,
        [
            Cell(GridKind.TRIANGULAR, Coord(0, 0), "up"),
            Cell(GridKind.TRIANGULAR, Coord(0, 0), "down"),
        ],
    )
    result = thin_poly.solve_triangular(g)

    assert result.status == "found"

    with pytest.raises(ClassificationError):
        thin_poly.solve_triangular(SQUARE_RING)


def _check_square(seed: int) -> None:
    g = generate(SQUARE, seed, min_pixels=10, max_pixels=200)
    cert = thin_poly.solve_square(g)
    assert ham_core.verify_cycle(g, cert)


@pytest.mark.parametrize("seed", range(1, 21))
def test_generated_square_instances(seed: int) -> None:
    _check_square(seed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(21, 201))
def test_generated_square_instances_sweep(seed: int) -> None:
    _check_square(seed)


@pytest.mark.parametrize("seed", range(1, 51))
def test_small_square_instances_agree_with_the_oracle(seed: int) -> None:
    g = generate(SQUARE, seed, min_pixels=1, max_pixels=12)
    result = ham_core.find_hamiltonian(g)

    assert result.status == "found"


def _check_hex(seed: int, shape: Shape) -> None:
    g = generate(
        HEXAGONAL, seed, min_pixels=1, max_pixels=12, shape=shape
    )
    cert = thin_poly.solve_hex(g)
    oracle = ham_core.find_hamiltonian(g)

    assert oracle.is_definite
    assert (cert is not None) == (oracle.status == "found")

    if cert is not None:
        assert ham_core.verify_cycle(g, cert)


@pytest.mark.parametrize("seed", range(1, 21))
def test_hex_agrees_with_the_oracle(seed: int) -> None:
    _check_hex(seed, "tree")


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(21, 101))
@pytest.mark.parametrize("shape", ["tree", "ring"])
def test_hex_agrees_with_the_oracle_sweep(seed: int, shape: Shape) -> None:
    _check_hex(seed, shape)
