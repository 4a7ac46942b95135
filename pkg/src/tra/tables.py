"""Tables: sets of solved-form substitutions sharing one heading.

A row is stored as the tuple of right-hand sides, aligned with the heading.
Every variable inside a row entry is local to that row (it is never one of
the heading variables), so rows are canonicalised on construction by renaming
those locals to ``_R1, _R2, ...`` in first-occurrence order over the heading
sorted by name.  Two tables are then equal exactly when their headings agree
as sets and their canonical rows agree, with every empty table equal to
every other one.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .terms import (
    Term,
    Universe,
    Var,
    format_term,
    iter_vars,
    rename_apart,
    resolve,
    substitute,
    unify,
)
from .errors import UniverseRequired

Row = tuple


def _local_names(heading):
    taken = {v.name for v in heading}
    for i in itertools.count(1):
        name = f"_R{i}"
        if name not in taken:
            yield Var(name)


def canonical_row(heading: Sequence[Var], row: Sequence[Term]) -> Row:
    order = sorted(range(len(heading)), key=lambda i: heading[i].name)
    names = _local_names(heading)
    mapping = {}
    for i in order:
        for v in iter_vars(row[i]):
            if v not in mapping:
                mapping[v] = next(names)
    return tuple(substitute(t, mapping) for t in row)


@dataclass(frozen=True, eq=False)
class Table:
    heading: tuple
    rows: frozenset

    def __post_init__(self):
        heading = tuple(self.heading)
        if len(set(heading)) != len(heading) or not all(isinstance(v, Var) for v in heading):
            raise ValueError(f"table heading must be distinct variables: {heading}")
        rows = set()
        for row in self.rows:
            row = tuple(row)
            if len(row) != len(heading):
                raise ValueError(f"row {row} does not cover heading {heading}")
            rows.add(canonical_row(heading, row))
        object.__setattr__(self, "heading", heading)
        object.__setattr__(self, "rows", frozenset(rows))

    @classmethod
    def from_substitutions(cls, heading: Sequence[Var], substs: Iterable[Mapping]) -> "Table":
        """Restrict each substitution to ``heading``.

        Heading variables a substitution leaves unbound become row-local
        unknowns, so ``{X: Y}`` over heading ``(X, Y)`` is the row ``(_R1, _R1)``.
        """
        heading = tuple(heading)
        return cls(heading, frozenset(tuple(resolve(v, s) for v in heading) for s in substs))

    @property
    def is_empty(self) -> bool:
        return not self.rows

    def substitutions(self) -> list:
        return [dict(zip(self.heading, row)) for row in self.rows]

    @cached_property
    def _key(self):
        if not self.rows:
            return None
        order = sorted(range(len(self.heading)), key=lambda i: self.heading[i].name)
        return (
            tuple(self.heading[i] for i in order),
            frozenset(tuple(row[i] for i in order) for row in self.rows),
        )

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return table_equal(self, other)

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.rows)

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=lambda r: tuple(format_term(t) for t in r))

    def __str__(self):
        return format_table(self)

    def __repr__(self):
        return f"Table(heading={self.heading!r}, rows={len(self.rows)})"


def top() -> Table:
    return Table((), frozenset({()}))


def bottom() -> Table:
    return Table((), frozenset())


def table_equal(s: Table, t: Table) -> bool:
    if s.is_empty or t.is_empty:
        return s.is_empty and t.is_empty
    return s._key == t._key


def intersect(s: Table, t: Table) -> Table:
    """Solved forms of ``s_row ∪ t_row`` for every solvable pair of rows."""
    heading = s.heading + tuple(v for v in t.heading if v not in s.heading)
    left = [rename_apart(row) for row in s.rows]
    right = [rename_apart(row) for row in t.rows]
    out = []
    for srow in left:
        s_eqs = list(zip(s.heading, srow))
        for trow in right:
            solved = unify(s_eqs + list(zip(t.heading, trow)))
            if solved is not None:
                out.append(solved)
    return Table.from_substitutions(heading, out)


def intersect_all(tables: Iterable[Table]) -> Table:
    out = top()
    for t in tables:
        out = intersect(out, t)
    return out


# ---------------------------------------------------------------- cylinders

@dataclass(frozen=True)
class Cylinder:
    """Explicit cylinder over a domain product; ``selector`` holds 0-based positions."""

    selector: tuple
    tuples: frozenset

    def __and__(self, other: "Cylinder") -> "Cylinder":
        return Cylinder(tuple(sorted(set(self.selector) | set(other.selector))),
                        self.tuples & other.tuples)

    def project(self, positions: Sequence[int]) -> frozenset:
        return frozenset(tuple(tup[p] for p in positions) for tup in self.tuples)


def to_cylinder(table: Table, universe: Universe, enumeration: Sequence[Var]) -> Cylinder:
    """Materialise the cylinder a table denotes, by brute-force enumeration of the domain product."""
    enumeration = tuple(enumeration)
    missing = [v for v in table.heading if v not in enumeration]
    if missing:
        raise ValueError(f"enumeration does not cover heading variables {missing}")
    selector = tuple(sorted(enumeration.index(v) for v in table.heading))
    if table.is_empty:
        return Cylinder(selector, frozenset())
    if universe is None:
        raise UniverseRequired("cylinder")
    positions = [enumeration.index(v) for v in table.heading]
    rows = [rename_apart(row) for row in table.rows]
    tuples = set()
    for full in itertools.product(universe.terms, repeat=len(enumeration)):
        values = [full[p] for p in positions]
        if any(unify(zip(row, values)) is not None for row in rows):
            tuples.add(full)
    return Cylinder(selector, frozenset(tuples))


# ---------------------------------------------------------------- output

def format_table(table: Table) -> str:
    if table.is_empty:
        return "<empty>"
    if not table.heading:
        return "<unit>"
    header = [v.name for v in table.heading]
    body = [[format_term(t) for t in row] for row in table.sorted_rows()]
    widths = [max(len(h), *(len(r[i]) for r in body)) for i, h in enumerate(header)]

    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([line(header), sep] + [line(r) for r in body])


def table_to_json(table: Table) -> dict:
    return {
        "heading": [v.name for v in table.heading],
        "rows": [[format_term(t) for t in row] for row in table.sorted_rows()],
    }


def table_json_dumps(table: Table) -> str:
    return json.dumps(table_to_json(table))
