"""First-class relation values with application (``:``) and projection (``/``)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import ArityMismatch, TraError
from .tables import Table
from .terms import (
    Const,
    Term,
    Universe,
    format_term,
    format_tuple,
    ground_instances,
    is_ground,
    rename_apart,
    substitute,
    unify,
    variables,
)


@dataclass(frozen=True)
class Extensional:
    arity: int
    tuples: frozenset

    def __post_init__(self):
        tuples = frozenset(tuple(t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise ArityMismatch(f"tuple {format_tuple(t)} in a relation of arity {self.arity}")
            if not is_ground(t):
                raise TraError(f"relation tuple {format_tuple(t)} is not ground")
        object.__setattr__(self, "tuples", tuples)

    @classmethod
    def empty(cls, arity: int) -> "Extensional":
        return cls(arity, frozenset())

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.sorted_tuples())

    def __contains__(self, tup):
        return tuple(tup) in self.tuples

    def sorted_tuples(self) -> list:
        return sorted(self.tuples, key=lambda t: tuple(format_term(x) for x in t))

    def __str__(self):
        return format_relation(self)


@dataclass(frozen=True, eq=False)
class Intensional:
    """The relation a predicate denotes in a program, evaluated on demand."""

    program: object
    predicate: str
    arity: int

    def __str__(self):
        return f"<relation {self.predicate}/{self.arity} of {self.program.name}>"


Relation = Union[Extensional, Intensional]


def relation(rows: Iterable[Sequence], arity: int = None) -> Extensional:
    """Build an extensional relation; plain strings and ints become constants."""
    tuples = [tuple(x if not isinstance(x, (str, int)) else Const(x) for x in r) for r in rows]
    if arity is None:
        if not tuples:
            raise ValueError("arity is needed for an empty relation")
        arity = len(tuples[0])
    return Extensional(arity, frozenset(tuples))


def apply(r: Relation, args: Sequence[Term], limits=None, env=None) -> Table:
    """``r : args`` -- the table of solved matches of ``args`` against the tuples of ``r``."""
    args = tuple(args)
    if len(args) != r.arity:
        raise ArityMismatch(f"apply: relation of arity {r.arity} applied to {format_tuple(args)}")
    if isinstance(r, Intensional):
        from .engine import Atom, Query, where
        return where(Query((Atom(r.predicate, args),)), r.program, env=env, limits=limits)
    heading = variables(args)
    substs = (unify(zip(args, e)) for e in r.tuples)
    return Table.from_substitutions(heading, (s for s in substs if s is not None))


def project(args: Sequence[Term], table: Table, universe: Universe = None) -> Extensional:
    """``args / table`` -- every ground instance of ``args`` under some row of ``table``."""
    args = tuple(args)
    out = set()
    for row in table.rows:
        row = rename_apart(row)
        mapping = dict(zip(table.heading, row))
        inst = tuple(substitute(t, mapping) for t in args)
        out |= ground_instances(inst, universe)
    return Extensional(len(args), frozenset(out))


def materialize(r: Relation, limits=None, universe: Universe = None, env=None) -> Extensional:
    if isinstance(r, Extensional):
        return r
    from .engine import least_model
    model = least_model(r.program, env=env, limits=limits, universe=universe)
    found = model.get(r.predicate)
    if found is None:
        return Extensional.empty(r.arity)
    if found.arity != r.arity:
        raise ArityMismatch(f"{r.predicate} has arity {found.arity}, not {r.arity}")
    return found


def _check_arity(r1: Relation, r2: Relation, op: str):
    if r1.arity != r2.arity:
        raise ArityMismatch(f"{op}: arities {r1.arity} and {r2.arity} differ")


def rel_union(r1: Relation, r2: Relation, limits=None, universe=None) -> Extensional:
    _check_arity(r1, r2, "union")
    a = materialize(r1, limits, universe)
    b = materialize(r2, limits, universe)
    return Extensional(a.arity, a.tuples | b.tuples)


def rel_subset(r1: Relation, r2: Relation, limits=None, universe=None) -> bool:
    _check_arity(r1, r2, "subset")
    return materialize(r1, limits, universe).tuples <= materialize(r2, limits, universe).tuples


def format_relation(r: Extensional) -> str:
    return "{" + ",".join(format_tuple(t) for t in r.sorted_tuples()) + "}"


def relation_to_json(r: Extensional) -> dict:
    return {"arity": r.arity, "tuples": [[format_term(x) for x in t] for t in r.sorted_tuples()]}


def relation_json_dumps(r: Extensional) -> str:
    return json.dumps(relation_to_json(r))
