from itertools import combinations, combinations_with_replacement

import pytest

from hamgrid import grid_graph, ham_core, reduce_sq
from hamgrid.errors import (
    CertificateInconsistencyError,
    ParameterError,
    PlanarityError,
)
from hamgrid.gadgets import rungs
from hamgrid.ham_core import CycleCertificate
from hamgrid.lattice import GridKind
from hamgrid.reduce_sq import SquareCorrespondence
from hamgrid.sat import Clause, SatEmbedding

SATISFIABLE = SatEmbedding(1, (Clause(True, 1, (1, 1, 1)),))

UNSATISFIABLE = SatEmbedding(
    1,
    (
        Clause(True, 1, (1, 1, 1)),
        Clause(False, 1, (1, 1, 1)),
    ),
)

NEGATIVE = SatEmbedding(1, (Clause(False, 1, (1, 1, 1)),))

# (x1 v x2 v x3) (x1 v x3 v x4) (-x1 v -x2 v -x4) (-x2 v -x3 v -x3)
# (-x2 v -x3 v -x4)
FOUR_VARIABLES = SatEmbedding(
    4,
    (
        Clause(True, 1, (1, 2, 3)),
        Clause(True, 2, (1, 3, 4)),
        Clause(False, 3, (1, 2, 4)),
        Clause(False, 1, (2, 3, 3)),
        Clause(False, 2, (2, 3, 4)),
    ),
)

NESTED = SatEmbedding(
    4,
    (
        Clause(True, 2, (1, 2, 4)),
        Clause(True, 1, (2, 3, 3)),
        Clause(False, 1, (1, 2, 3)),
    ),
)


def formula_family() -> list[SatEmbedding]:
    """
    Every planar formula over one or two variables with at most two clauses,
    nesting same-side clauses either way round.
    """
    result: list[SatEmbedding] = []

    for n in (1, 2):
        clauses = [
            Clause(positive, 1, variables)
            for variables in combinations_with_replacement(range(1, n + 1), 3)
            for positive in (True, False)
        ]

        result.append(SatEmbedding(n, ()))
        result.extend(SatEmbedding(n, (c,)) for c in clauses)

        for a, b in combinations(clauses, 2):
            levels = [(1, 1)]
            if a.positive == b.positive:
                levels += [(1, 2), (2, 1)]

            for first, second in levels:
                e = SatEmbedding(
                    n,
                    (
                        Clause(a.positive, first, a.variables),
                        Clause(b.positive, second, b.variables),
                    ),
                )

                try:
                    e.validate()
                except PlanarityError:
                    continue

                result.append(e)

    return result


@pytest.mark.parametrize(
    "e",
    [SATISFIABLE, UNSATISFIABLE, NEGATIVE, NESTED, FOUR_VARIABLES],
    ids=["satisfiable", "unsatisfiable", "negative", "nested", "four"],
)
def test_compiled_graphs_are_polygonal(e: SatEmbedding) -> None:
    g, corr = reduce_sq.compile(e)
    report = grid_graph.classify(g)

    assert g.kind is GridKind.SQUARE
    assert report.connected
    assert report.polygonal
    assert report.min_degree_ok

    assert [v.id for v in corr.variables] == list(e.variables)
    assert [c.id for c in corr.clauses] == list(range(len(e.clauses)))
    assert len(corr.enforcers) == e.variable_count + e.variable_count % 2
    assert len(corr.parity) == len(corr.enforcers)
    assert all(parity == 0 for _, parity in corr.parity)


def test_odd_loops_get_an_extra_enforcer() -> None:
    _, corr = reduce_sq.compile(SATISFIABLE)
    (variable,) = corr.variables

    # One enforcer in front of the variable, one on the return wire
    first, extra = corr.enforcers
    assert max(x for x, _ in first.anchors) < variable.x
    assert min(x for x, _ in extra.anchors) > variable.x + variable.width

    two = SatEmbedding(2, (Clause(True, 1, (1, 1, 2)),))
    _, corr = reduce_sq.compile(two)
    last = corr.variables[-1]

    assert len(corr.enforcers) == 2
    for enforcer in corr.enforcers:
        assert max(x for x, _ in enforcer.anchors) < last.x


def test_family_is_large_enough() -> None:
    assert len(formula_family()) >= 20


def test_variable_width_grows_with_its_legs() -> None:
    _, corr = reduce_sq.compile(SATISFIABLE)
    (variable,) = corr.variables

    assert variable.width == 15
    assert len(variable.top_wire) == 13
    assert corr.variable(1) is variable

    with pytest.raises(KeyError):
        corr.variable(2)


def test_clause_legs_touch_their_branches() -> None:
    _, corr = reduce_sq.compile(NESTED)

    for clause in corr.clauses:
        rows = {y for _, y in clause.junctions}

        if clause.positive:
            assert rows == {reduce_sq.VARIABLE_TOP + 1}
        else:
            assert rows == {-reduce_sq.VARIABLE_TOP}


def test_compile_checks_its_input() -> None:
    crossing = SatEmbedding(
        4,
        (
            Clause(True, 1, (1, 2, 3)),
            Clause(True, 2, (2, 3, 4)),
        ),
    )

    with pytest.raises(PlanarityError):
        reduce_sq.compile(crossing)

    with pytest.raises(ParameterError):
        reduce_sq.compile(SATISFIABLE, spacing=-1)


def test_correspondence_round_trips() -> None:
    _, corr = reduce_sq.compile(NESTED)
    assert SquareCorrespondence.from_json(corr.as_json()) == corr


def test_extract_assignment_reads_the_top_branches() -> None:
    _, corr = reduce_sq.compile(SATISFIABLE)
    (variable,) = corr.variables
    top = rungs(variable.top_cells())

    # Zigzagging over every rung means the top branch is one-enforced
    zigzag = CycleCertificate(frozenset(top))
    assert reduce_sq.extract_assignment(corr, zigzag).values == {1: False}

    # Running along both rails uses no rung at all
    rails = CycleCertificate(frozenset())
    assert reduce_sq.extract_assignment(corr, rails).values == {1: True}

    broken = CycleCertificate(frozenset(top[1:2]))
    with pytest.raises(CertificateInconsistencyError):
        reduce_sq.extract_assignment(corr, broken)


@pytest.mark.slow
def test_satisfiable_formula_compiles_to_a_hamiltonian_graph() -> None:
    g, corr = reduce_sq.compile(SATISFIABLE)
    result = ham_core.find_hamiltonian(g)

    assert result.status == "found"
    assert result.certificate is not None

    assignment = reduce_sq.extract_assignment(corr, result.certificate)
    assert assignment.satisfies(SATISFIABLE)


@pytest.mark.slow
def test_negative_clause_extracts_false() -> None:
    g, corr = reduce_sq.compile(NEGATIVE)
    result = ham_core.find_hamiltonian(g)

    assert result.status == "found"
    assert result.certificate is not None

    assignment = reduce_sq.extract_assignment(corr, result.certificate)
    assert assignment.values == {1: False}
    assert assignment.satisfies(NEGATIVE)


@pytest.mark.slow
@pytest.mark.parametrize("e", formula_family())
def test_hamiltonian_exactly_if_satisfiable(e: SatEmbedding) -> None:
    g, corr = reduce_sq.compile(e)
    result = ham_core.find_hamiltonian(g, 2_000_000)

    assert result.status != "exhausted"
    satisfiable = reduce_sq.solve_formula_brute_force(e) is not None
    assert (result.status == "found") == satisfiable

    if result.certificate is not None:
        assignment = reduce_sq.extract_assignment(corr, result.certificate)
        assert assignment.satisfies(e)


@pytest.mark.slow
def test_unsatisfiable_formula_compiles_to_a_non_hamiltonian_graph() -> None:
    assert reduce_sq.solve_formula_brute_force(UNSATISFIABLE) is None

    g, _ = reduce_sq.compile(UNSATISFIABLE)
    assert ham_core.find_hamiltonian(g).status == "none"
