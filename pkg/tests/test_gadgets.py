import dataclasses

import pytest

from hamgrid import gadgets, reduce_hex, reduce_sq
from hamgrid.errors import ParameterError, TemplateInvalidError
from hamgrid.gadgets import GadgetTemplate, Port
from hamgrid.grid_graph import make_edge
from hamgrid.lattice import Cell, Coord, GridKind

SQUARE = GridKind.SQUARE


def test_shipped_gadgets() -> None:
    assert gadgets.available() == [
        "degree6",
        "one_enforcer",
        "turn",
        "two_enforcer",
    ]

    # Loading is cached
    assert gadgets.load("turn") is gadgets.load("turn")


@pytest.mark.parametrize(
    "name, count",
    [
        ("turn", 11),
        ("one_enforcer", 2),
        ("two_enforcer", 7),
    ],
)
def test_square_resources_keep_their_contracts(name: str, count: int) -> None:
    assert len(gadgets.load(name).validate()) == count


def test_breakable_vertex() -> None:
    sols = reduce_hex.vertex_gadget_template().validate()

    assert len(sols) == 2
    assert sorted(sols.region_groups(s) for s in sols) == [1, 6]


def test_hexagonal_wire_follows_its_boundary() -> None:
    sols = reduce_hex.wire_template(3).validate()
    assert len(sols) == 1


def test_square_wire() -> None:
    sols = reduce_sq.gadget("wire", length=5).validate()
    assert len(sols) == 10


def test_one_enforcer_shifts_parity() -> None:
    enforcer = gadgets.load("one_enforcer").validate()
    plain = reduce_sq.gadget("wire", length=4).validate()

    one_rail = {
        plain.patterns(s)
        for s in plain
        if all(p in gadgets.contracts.ONE_RAIL for p in plain.patterns(s))
    }

    assert {enforcer.patterns(s) for s in enforcer} == {("10", "10")}
    assert one_rail == {("01", "10"), ("10", "01")}


def test_variable() -> None:
    reduce_sq.gadget("variable", width=7).validate()


@pytest.mark.slow
def test_clause() -> None:
    sols = reduce_sq.gadget("clause").validate()
    assert len(sols) == 215


@pytest.mark.parametrize(
    "kwargs",
    [
        {"name": "variable", "width": 8},
        {"name": "variable", "width": 5},
        {"name": "clause", "legs": (3, 5, 11)},
        {"name": "clause", "bumps": (6, 9, 6)},
        {"name": "wire", "length": 0},
        {"name": "spiral"},
    ],
)
def test_invalid_gadget_parameters(kwargs: dict) -> None:
    with pytest.raises(ParameterError):
        reduce_sq.gadget(**kwargs)


def test_contracts_catch_misbehaving_gadgets() -> None:
    turn = gadgets.load("turn")

    with pytest.raises(TemplateInvalidError):
        dataclasses.replace(
            turn, contract=gadgets.contracts.one_enforcer
        ).validate()

    with pytest.raises(TemplateInvalidError):
        dataclasses.replace(turn, contract=None).validate()


def test_instantiate_moves_cells_and_ports() -> None:
    turn = gadgets.load("turn")
    placed = turn.instantiate((10, 20), rotation=1)

    assert len(placed.cells) == len(turn.cells)
    assert Cell(SQUARE, Coord(9, 20)) in placed.cells
    assert [p.direction for p in placed.ports] == [3, 2]
    assert placed.port(0).cell == Cell(SQUARE, Coord(9, 19))

    mirrored = turn.instantiate(mirror=True)
    assert Cell(SQUARE, Coord(3, -4)) in mirrored.cells
    assert mirrored.port(1).direction == 3


def test_hexagonal_offsets_must_be_cell_steps() -> None:
    template = reduce_hex.vertex_gadget_template()

    with pytest.raises(ParameterError):
        template.instantiate((1, 0))

    template.instantiate((3, 0))


def test_template_checks() -> None:
    cell = Cell(SQUARE, Coord(0, 0))

    with pytest.raises(ParameterError):
        GadgetTemplate(
            "twins",
            SQUARE,
            frozenset({cell}),
            (Port(0, Cell(SQUARE, Coord(1, 0)), 0),) * 2,
        )

    # The stub runs back into the body
    with pytest.raises(ParameterError):
        GadgetTemplate(
            "loop",
            SQUARE,
            frozenset({cell}),
            (Port(0, Cell(SQUARE, Coord(-1, 0)), 0),),
        )

    with pytest.raises(ParameterError):
        gadgets.cell_step(GridKind.TRIANGULAR, 0)


def test_rungs_and_modes() -> None:
    run = [Cell(SQUARE, Coord(x, 0)) for x in range(3)]

    assert gadgets.rungs(run) == [
        make_edge((1, 0), (1, 1)),
        make_edge((2, 0), (2, 1)),
    ]

    assert gadgets.wire_mode([True, True, True]) == "one"
    assert gadgets.wire_mode([False, False, False]) == "two"

    # A U-turn over two rungs is still a two-enforced wire
    assert gadgets.wire_mode([False, True, True, False]) == "two"
    assert gadgets.wire_mode([False, True, False, False]) is None
