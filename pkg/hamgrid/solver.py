"""
Picks the best available algorithm for a grid graph and runs it.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import *  # type: ignore

from . import ham_core, thin_poly
from .errors import BudgetExhaustedError
from .grid_graph import ClassificationReport, GridGraph, classify
from .ham_core import HamResult
from .lattice import GridKind
from .warnings import (
    HamgridOracleFallbackWarning,
    HamgridPotentialMistakeWarning,
)

__all__ = ["Method", "SolveOutcome", "solve"]


_logger = logging.getLogger(__name__)


Method = Literal["trivial", "square", "hex", "oracle"]


@dataclass(frozen=True)
class SolveOutcome:
    """
    The answer of `solve`, together with how it was reached.

    ## Attributes

    `result`: The outcome of the search. Certificates returned by the
        polynomial algorithms are already verified.

    `method`: `"trivial"` if the graph can't be Hamiltonian for structural
        reasons, `"square"` or `"hex"` for the thin polygonal algorithms and
        `"oracle"` for the exact search.

    `report`: The classification the route was picked from.
    """

    result: HamResult
    method: Method
    report: ClassificationReport

    @property
    def status(self) -> Literal["found", "none", "exhausted"]:
        return self.result.status


def solve(
    g: GridGraph,
    budget: int = ham_core.DEFAULT_BUDGET,
) -> SolveOutcome:
    """
    Decides whether a grid graph has a Hamiltonian cycle.

    Thin polygonal square graphs are always Hamiltonian and solved directly.
    Thin polygonal hexagonal graphs go through Tree-Residue Vertex-Breaking.
    Everything else falls back to the exact oracle, which emits a
    `HamgridOracleFallbackWarning`. Disconnected graphs and graphs with a
    vertex of degree below 2 are answered without any search. The latter also
    trigger a `HamgridPotentialMistakeWarning`.


    ## Parameters

    `g`: The graph to solve.

    `budget`: The search budget, used by the oracle and by the TRVB step.
    """
    report = classify(g)

    if report.connected and not report.min_degree_ok:
        vertex = tuple(report.witnesses["min_degree"])
        warnings.warn(
            f"The vertex {vertex} has degree below 2, so the graph can't have"
            f" a Hamiltonian cycle. Is a vertex missing from the input?",
            HamgridPotentialMistakeWarning,
        )

    if report.trivially_non_hamiltonian or report.vertex_count < 3:
        _logger.debug("Structurally non-Hamiltonian, skipping the search")
        return SolveOutcome(HamResult("none"), "trivial", report)

    if report.thin and report.polygonal:
        if report.kind is GridKind.SQUARE:
            _logger.debug("Routing to the thin polygonal square algorithm")
            cert = thin_poly.solve_square(g)
            return SolveOutcome(HamResult("found", cert), "square", report)

        if report.kind is GridKind.HEXAGONAL:
            _logger.debug("Routing to the thin polygonal hexagonal algorithm")

            try:
                found = thin_poly.solve_hex(g, budget=budget)
            except BudgetExhaustedError:
                return SolveOutcome(HamResult("exhausted"), "hex", report)

            if found is None:
                return SolveOutcome(HamResult("none"), "hex", report)

            return SolveOutcome(HamResult("found", found), "hex", report)

    warnings.warn(
        f"No polynomial algorithm applies to this {report.kind.value} grid"
        f" graph (thin {report.thin}, polygonal {report.polygonal}). Falling"
        f" back to the exact search, which may take exponential time.",
        HamgridOracleFallbackWarning,
    )

    result = ham_core.find_hamiltonian(g, budget)
    return SolveOutcome(result, "oracle", report)
