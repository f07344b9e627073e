"""
Monotone rectilinear 3SAT embeddings.

Variables sit on the x axis, numbered from 1 left to right. Every clause is a
horizontal segment at some nesting level, either above the axis (only positive
literals) or below it (only negative ones), and connects to its three
variables through vertical legs.

Several legs can attach to the same variable. Each leg occupies a slot along
the variable, so a leg's position on the axis is the pair `(variable, slot)`.
Slots are either given explicitly or assigned automatically, in which case
they are ordered so that no leg crosses a clause segment whenever that is
possible for the given levels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import *  # type: ignore

from .errors import ParameterError, PlanarityError

__all__ = [
    "Clause",
    "SatEmbedding",
    "Assignment",
    "LegPosition",
    "solve_formula_brute_force",
]


LegPosition = tuple[int, int]


@dataclass(frozen=True)
class Clause:
    """
    A clause of a monotone formula.

    ## Attributes

    `positive`: Whether the clause lies above the axis. Positive clauses
        contain only positive literals, negative clauses only negated ones.

    `level`: The nesting depth of the clause segment, starting at 1 next to
        the axis.

    `variables`: The variables of the three literals, 1-based. Repetitions are
        allowed.

    `slots`: Optionally, the slot each leg occupies at its variable, in the
        same order as `variables`. Filled in automatically if `None`.
    """

    positive: bool
    level: int
    variables: tuple[int, int, int]
    slots: tuple[int, int, int] | None = None

    def __post_init__(self) -> None:
        if len(self.variables) != 3:
            raise ParameterError(
                f"Clauses have exactly three literals, not"
                f" {len(self.variables)}"
            )

        if self.level < 1:
            raise ParameterError(
                f"Clause levels start at 1, but {self.level} was given"
            )

        if self.slots is not None:
            if len(self.slots) != 3:
                raise ParameterError("Clauses need exactly three leg slots")

            if any(slot < 0 for slot in self.slots):
                raise ParameterError("Leg slots can't be negative")

    @property
    def sign(self) -> Literal["+", "-"]:
        return "+" if self.positive else "-"

    def satisfied_by(self, values: Mapping[int, bool]) -> bool:
        return any(values[v] == self.positive for v in self.variables)

    def __str__(self) -> str:
        prefix = "" if self.positive else "¬"
        literals = " ∨ ".join(f"{prefix}x{v}" for v in self.variables)
        return f"({literals})"


@dataclass
class Assignment:
    """
    A truth value for every variable, keyed by the 1-based variable index.
    """

    values: dict[int, bool] = field(default_factory=dict)

    def __getitem__(self, variable: int) -> bool:
        return self.values[variable]

    def __len__(self) -> int:
        return len(self.values)

    def satisfies(self, embedding: SatEmbedding) -> bool:
        return all(c.satisfied_by(self.values) for c in embedding.clauses)

    def __str__(self) -> str:
        return ", ".join(
            f"x{v}={'true' if value else 'false'}"
            for v, value in sorted(self.values.items())
        )


@dataclass(frozen=True)
class SatEmbedding:
    """
    A monotone rectilinear embedding of a 3-CNF formula.

    Construction checks that the variable indices exist. Call `validate` to
    also check that no leg crosses a clause segment.

    ## Attributes

    `variable_count`: The number of variables, which are numbered from 1.

    `clauses`: All clauses, in input order.
    """

    variable_count: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self) -> None:
        if self.variable_count < 1:
            raise ParameterError("An embedding needs at least one variable")

        for clause in self.clauses:
            for v in clause.variables:
                if not 1 <= v <= self.variable_count:
                    raise ParameterError(
                        f"{clause} references x{v}, but only"
                        f" x1..x{self.variable_count} exist"
                    )

    @property
    def variables(self) -> range:
        return range(1, self.variable_count + 1)

    def side(self, positive: bool) -> list[int]:
        """
        The indices of all clauses on one side of the axis.
        """
        return [
            ii
            for ii, clause in enumerate(self.clauses)
            if clause.positive == positive
        ]

    def leg_slots(self) -> dict[int, tuple[int, int, int]]:
        """
        Returns the slot of every leg, keyed by clause index. Legs are listed
        in the order of the clause's variables.

        Clauses with explicit slots keep them. For all others, the legs at
        each variable are ordered left to right as follows: clauses ending at
        the variable from the left, lowest level first; clauses lying
        entirely at the variable; clauses passing through with their middle
        leg; clauses starting at the variable, highest level first.
        """
        result: dict[int, tuple[int, int, int]] = {}

        for positive in (True, False):
            per_variable: dict[int, list[tuple[int, int, int, int]]] = {
                v: [] for v in self.variables
            }

            for ii in self.side(positive):
                clause = self.clauses[ii]

                if clause.slots is not None:
                    result[ii] = clause.slots
                    continue

                lo = min(clause.variables)
                hi = max(clause.variables)

                for k, v in enumerate(clause.variables):
                    if lo == hi:
                        category, key = 1, 0
                    elif v == hi:
                        category, key = 0, clause.level
                    elif v == lo:
                        category, key = 3, -clause.level
                    else:
                        category, key = 2, 0

                    per_variable[v].append((category, key, ii, k))

            # Slots taken by explicit legs are skipped
            taken: dict[int, set[int]] = {v: set() for v in self.variables}
            for ii in self.side(positive):
                clause = self.clauses[ii]

                if clause.slots is not None:
                    for v, slot in zip(clause.variables, clause.slots):
                        taken[v].add(slot)

            assigned: dict[int, list[int]] = {}

            for v, legs in per_variable.items():
                legs.sort()
                free = (s for s in itertools.count() if s not in taken[v])

                for (_, _, ii, k), slot in zip(legs, free):
                    assigned.setdefault(ii, [0, 0, 0])[k] = slot

            for ii, slots in assigned.items():
                result[ii] = (slots[0], slots[1], slots[2])

        return dict(sorted(result.items()))

    def leg_positions(self) -> dict[int, list[LegPosition]]:
        """
        Returns the `(variable, slot)` position of every leg, sorted left to
        right, keyed by clause index.
        """
        return {
            ii: sorted(zip(self.clauses[ii].variables, slots))
            for ii, slots in self.leg_slots().items()
        }

    def slot_counts(self, positive: bool) -> dict[int, int]:
        """
        How many slots each variable needs on one side of the axis.
        """
        counts = {v: 0 for v in self.variables}
        positions = self.leg_positions()

        for ii in self.side(positive):
            for v, slot in positions[ii]:
                counts[v] = max(counts[v], slot + 1)

        return counts

    def max_level(self, positive: bool) -> int:
        return max(
            (self.clauses[ii].level for ii in self.side(positive)),
            default=0,
        )

    def validate(self) -> None:
        """
        Makes sure no leg crosses a clause segment and no two legs share a
        position.

        Two clauses on the same side must either be disjoint, or one must be
        nested inside the other. A nested clause must lie at a lower level,
        and the outer clause can't have a leg inside the inner one's span.


        ## Raises

        `PlanarityError`: If the embedding isn't planar.
        """
        positions = self.leg_positions()

        for positive in (True, False):
            indices = self.side(positive)
            seen: dict[LegPosition, int] = {}

            for ii in indices:
                for pos in positions[ii]:
                    if pos in seen:
                        raise PlanarityError(
                            f"Clauses {seen[pos] + 1} and {ii + 1} both place"
                            f" a leg at slot {pos[1]} of x{pos[0]}"
                        )

                    seen[pos] = ii

            for ii, jj in itertools.combinations(indices, 2):
                self._check_pair(ii, jj, positions)

    def _check_pair(
        self,
        ii: int,
        jj: int,
        positions: dict[int, list[LegPosition]],
    ) -> None:
        a_legs, b_legs = positions[ii], positions[jj]

        # Disjoint spans never interfere
        if a_legs[2] < b_legs[0] or b_legs[2] < a_legs[0]:
            return

        if a_legs[0] < b_legs[0] and b_legs[2] < a_legs[2]:
            outer, inner = ii, jj
        elif b_legs[0] < a_legs[0] and a_legs[2] < b_legs[2]:
            outer, inner = jj, ii
        else:
            raise PlanarityError(
                f"The segments of clauses {ii + 1} and {jj + 1} cross"
            )

        if self.clauses[inner].level >= self.clauses[outer].level:
            raise PlanarityError(
                f"Clause {inner + 1} is nested inside clause {outer + 1}, so"
                f" it must lie at a lower level"
            )

        lo, hi = positions[inner][0], positions[inner][2]
        for pos in positions[outer]:
            if lo < pos < hi:
                raise PlanarityError(
                    f"A leg of clause {outer + 1} crosses the segment of"
                    f" clause {inner + 1}"
                )

    def evaluate(self, values: Mapping[int, bool]) -> bool:
        return all(c.satisfied_by(values) for c in self.clauses)


def solve_formula_brute_force(e: SatEmbedding) -> Assignment | None:
    """
    Finds a satisfying assignment by trying all of them, or returns `None` if
    the formula is unsatisfiable. Assignments are tried in binary counting
    order with x1 as the lowest bit, starting from all false.
    """
    for mask in range(1 << e.variable_count):
        values = {v: bool(mask >> (v - 1) & 1) for v in e.variables}

        if e.evaluate(values):
            return Assignment(values)

    return None
