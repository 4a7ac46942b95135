"""Definite-clause programs: SLD resolution for ``where``, a bottom-up least-model
oracle, and translation between clauses and TRA inclusions.

Every goal on the resolution stack carries the program it is resolved in, so a
relation imported from another program is solved inside that program's own
namespace and predicates never leak between programs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    Incomplete,
    ResourceExceeded,
    TraError,
    TypeMismatch,
    UnboundIdentifier,
    UnsupportedExpression,
)
from .expr import (
    ApplyE,
    BottomE,
    Inclusion,
    IntersectE,
    ProgLit,
    ProjectE,
    RelLit,
    TopE,
    UnionE,
    VarE,
    WhereE,
)
from .relations import Extensional, Intensional, materialize
from .tables import Table, canonical_row
from .terms import (
    Universe,
    Var,
    format_term,
    ground_instances,
    renaming,
    resolve,
    substitute,
    unify_sequences,
    variables,
)


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        if not self.args:
            return self.predicate
        return self.predicate + "(" + ",".join(format_term(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple = ()

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))

    @property
    def variables(self) -> tuple:
        return variables([*self.head.args, *(a for b in self.body for a in b.args)])

    def renamed(self) -> "Clause":
        mapping = renaming(self.variables)
        return Clause(_subst_atom(self.head, mapping), tuple(_subst_atom(b, mapping) for b in self.body))

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- " + ", ".join(str(b) for b in self.body) + "."


def _subst_atom(atom: Atom, mapping) -> Atom:
    return Atom(atom.predicate, tuple(substitute(a, mapping) for a in atom.args))


@dataclass(frozen=True)
class Query:
    goals: tuple

    def __post_init__(self):
        if not isinstance(self.goals, tuple):
            object.__setattr__(self, "goals", tuple(self.goals))
        if not self.goals:
            raise ValueError("a query needs at least one goal")

    @property
    def variables(self) -> tuple:
        return variables([a for g in self.goals for a in g.args])

    def __str__(self):
        return "?- " + ", ".join(str(g) for g in self.goals)


@dataclass(frozen=True)
class SearchLimits:
    max_depth: int = 64
    max_answers: int = 10000

    def __post_init__(self):
        if self.max_depth < 1 or self.max_answers < 1:
            raise ValueError("search limits must be at least 1")


@dataclass(frozen=True, eq=False)
class Program:
    """Clauses plus relation variables.

    ``rel_vars`` maps each declared relation variable to its arity (or None);
    ``bindings`` holds the relation values already supplied for some of them.
    """

    clauses: tuple = ()
    rel_vars: Mapping = field(default_factory=dict)
    bindings: Mapping = field(default_factory=dict)
    name: str = "<inline>"
    universe: Universe = None

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        rel_vars = dict(self.rel_vars)
        for k in self.bindings:
            rel_vars.setdefault(k, self.bindings[k].arity)
        object.__setattr__(self, "rel_vars", rel_vars)
        object.__setattr__(self, "bindings", dict(self.bindings))
        arities = {}
        for c in self.clauses:
            p, n = c.head.predicate, len(c.head.args)
            if p in rel_vars:
                raise TraError(f"relation variable {p} cannot head a clause in {self.name}")
            if arities.setdefault(p, n) != n:
                raise ArityMismatch(f"predicate {p} used with arities {arities[p]} and {n} in {self.name}")
        object.__setattr__(self, "_arities", arities)

    @property
    def predicates(self) -> dict:
        return dict(self._arities)

    @cached_property
    def _index(self) -> dict:
        index = {}
        for c in self.clauses:
            index.setdefault(c.head.predicate, []).append(c)
        return index

    def clauses_for(self, predicate: str) -> list:
        return self._index.get(predicate, [])

    @property
    def free_rel_vars(self) -> set:
        return {v for v in self.rel_vars if v not in self.bindings}

    def bind(self, name: str, value) -> "Program":
        if not isinstance(value, (Extensional, Intensional)):
            raise TypeMismatch(f"only relations can be bound to relation variable {name}")
        if name in self._arities:
            raise TraError(f"{name} is a predicate of {self.name}, not a relation variable")
        declared = self.rel_vars.get(name)
        if declared is not None and declared != value.arity:
            raise ArityMismatch(f"{name} is declared with arity {declared}, got a relation of arity {value.arity}")
        return Program(self.clauses, self.rel_vars, {**self.bindings, name: value}, self.name, self.universe)

    def close(self, env: Mapping) -> "Program":
        """Bind every free relation variable that ``env`` supplies."""
        out = self
        for v in sorted(self.free_rel_vars):
            value = env.get(v) if env is not None else None
            if isinstance(value, (Extensional, Intensional)):
                out = out.bind(v, value)
        return out

    def __str__(self):
        return "\n".join(str(c) for c in self.clauses)

    def __repr__(self):
        return f"Program({self.name!r}, clauses={len(self.clauses)})"


def _lookup_relation(predicate: str, program: Program, env):
    if predicate in program.bindings:
        return program.bindings[predicate]
    if predicate in program.rel_vars:
        value = env.get(predicate) if env is not None else None
        if not isinstance(value, (Extensional, Intensional)):
            raise UnboundIdentifier(f"relation variable {predicate} of {program.name} is unbound")
        return value
    return None


# ---------------------------------------------------------------- SLD resolution

class _Search:
    def __init__(self, env, limits: SearchLimits, selection: str):
        if selection not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown selection rule {selection!r}")
        self.env = env
        self.limits = limits
        self.leftmost = selection == "leftmost"

    def resolvents(self, atom: Atom, program: Program, subst):
        rel = _lookup_relation(atom.predicate, program, self.env)
        if rel is not None:
            if rel.arity != len(atom.args):
                raise ArityMismatch(f"where: {atom} against a relation of arity {rel.arity}")
            if isinstance(rel, Intensional):
                yield ((Atom(rel.predicate, atom.args), rel.program),), subst
                return
            for tup in rel.tuples:
                s = unify_sequences(atom.args, tup, subst)
                if s is not None:
                    yield (), s
            return
        for clause in program.clauses_for(atom.predicate):
            if len(clause.head.args) != len(atom.args):
                continue
            c = clause.renamed()
            s = unify_sequences(c.head.args, atom.args, subst)
            if s is not None:
                yield tuple((b, program) for b in c.body), s

    def run(self, goals, heading, bound):
        """Depth-bounded DFS. Returns (rows, cut) where cut means some branch hit the bound."""
        rows = set()
        cut = False
        stack = [(goals, {}, 0)]
        while stack:
            goals, subst, d = stack.pop()
            if not goals:
                rows.add(canonical_row(heading, tuple(resolve(v, subst) for v in heading)))
                if len(rows) > self.limits.max_answers:
                    raise ResourceExceeded(f"where: more than {self.limits.max_answers} answers")
                continue
            if d >= bound:
                cut = True
                continue
            i = 0 if self.leftmost else len(goals) - 1
            atom, program = goals[i]
            children = [(goals[:i] + body + goals[i + 1:], s, d + 1)
                        for body, s in self.resolvents(atom, program, subst)]
            stack.extend(reversed(children))
        return rows, cut


def where(query, program: Program, env: Mapping = None, limits: SearchLimits = None,
          selection: str = "leftmost") -> Table:
    """Table of the answer substitutions of every success leaf of the SLD tree.

    The tree is explored by iterative deepening (bounds doubling up to
    ``limits.max_depth``); if the deepest pass still leaves branches
    unexplored, :class:`Incomplete` is raised instead of returning a partial table.
    """
    if not isinstance(query, Query):
        query = Query(tuple(query))
    limits = limits or SearchLimits()
    search = _Search(env, limits, selection)
    heading = query.variables
    goals = tuple((g, program) for g in query.goals)
    bound = min(8, limits.max_depth)
    while True:
        rows, cut = search.run(goals, heading, bound)
        if not cut:
            return Table(heading, frozenset(rows))
        if bound >= limits.max_depth:
            raise Incomplete(bound)
        bound = min(bound * 2, limits.max_depth)


# ---------------------------------------------------------------- least model

def least_model(program: Program, env: Mapping = None, limits: SearchLimits = None,
                universe: Universe = None, max_iterations: int = 1000) -> dict:
    """Naive bottom-up iteration of the immediate-consequence step, from the empty interpretation."""
    limits = limits or SearchLimits()
    universe = universe or program.universe
    arities = program.predicates
    imported = {}

    def tuples_for(predicate, model):
        if predicate in model:
            return model[predicate]
        if predicate not in imported:
            rel = _lookup_relation(predicate, program, env)
            imported[predicate] = (frozenset() if rel is None
                                   else materialize(rel, limits, universe, env).tuples)
        return imported[predicate]

    def matches(body, subst, model):
        if not body:
            yield subst
            return
        atom, rest = body[0], body[1:]
        for tup in tuples_for(atom.predicate, model):
            s = unify_sequences(atom.args, tup, subst)
            if s is not None:
                yield from matches(rest, s, model)

    model = {p: frozenset() for p in arities}
    for _ in range(max_iterations):
        step = {p: set() for p in arities}
        size = 0
        for clause in program.clauses:
            out = step[clause.head.predicate]
            for s in matches(clause.body, {}, model):
                head = tuple(resolve(a, s) for a in clause.head.args)
                before = len(out)
                out |= ground_instances(head, universe)
                size += len(out) - before
                if size > limits.max_answers:
                    raise ResourceExceeded(f"least_model: more than {limits.max_answers} facts")
        step = {p: frozenset(ts) for p, ts in step.items()}
        if step == model:
            return {p: Extensional(arities[p], ts) for p, ts in model.items()}
        model = step
    raise ResourceExceeded(f"least_model: no fixpoint after {max_iterations} iterations")


# ---------------------------------------------------------------- clauses <-> TRA

def _conjunction(parts: Sequence):
    if not parts:
        return TopE()
    out = parts[0]
    for p in parts[1:]:
        out = IntersectE(out, p)
    return out


def clause_to_tra(clause: Clause, rel_vars: Iterable[str] = None, program=None) -> Inclusion:
    """``head ⊇ (head args) / (body tables intersected)``.

    Body atoms over ``rel_vars`` become applications ``R:(args)``; every other
    atom becomes a one-goal ``where`` against ``program`` (a Program, or a
    name to be resolved when the inclusion is evaluated).
    """
    if rel_vars is None:
        rel_vars = {clause.head.predicate}
        if isinstance(program, Program):
            rel_vars |= set(program.rel_vars)
    rel_vars = set(rel_vars)
    progref = ProgLit(program) if isinstance(program, Program) else VarE(program or "P")
    parts = []
    for atom in clause.body:
        if atom.predicate in rel_vars:
            parts.append(ApplyE(VarE(atom.predicate), atom.args))
        else:
            parts.append(WhereE(Query((atom,)), progref))
    return Inclusion(clause.head.predicate, ProjectE(clause.head.args, _conjunction(parts)))


def program_to_tra(program: Program, predicates: Iterable[str] = None) -> tuple:
    """One inclusion per predicate, the clauses for it combined with ∪.

    The translated predicates become relation variables; atoms over any other
    predicate stay ``where`` queries against ``program`` itself.
    """
    preds = list(program.predicates) if predicates is None else list(predicates)
    rel_vars = set(preds) | set(program.rel_vars)
    out = []
    for p in preds:
        rhs = None
        for c in program.clauses_for(p):
            part = clause_to_tra(c, rel_vars, program).rhs
            rhs = part if rhs is None else UnionE(rhs, part)
        if rhs is not None:
            out.append(Inclusion(p, rhs))
    return tuple(out)


def _arity_of_rhs(e):
    if isinstance(e, ProjectE):
        return len(e.args)
    if isinstance(e, RelLit):
        return e.relation.arity
    if isinstance(e, UnionE):
        left = _arity_of_rhs(e.left)
        return left if left is not None else _arity_of_rhs(e.right)
    return None


def tra_to_clauses(inclusions: Sequence[Inclusion], resolve_value: Callable,
                   name: str = "<mu>") -> Program:
    """Program whose least model gives the least solution of ``inclusions``.

    Each inclusion variable becomes a predicate of the new program.  Every
    other operand (a ``where`` goal, a relation-valued subexpression) is
    evaluated once with ``resolve_value`` and bound to a fresh relation
    variable, so predicates of sub-programs stay local to their own program.
    """
    mu_names = {inc.name for inc in inclusions}
    arities = {}
    for inc in inclusions:
        n = _arity_of_rhs(inc.rhs)
        if n is not None and arities.setdefault(inc.name, n) != n:
            raise ArityMismatch(f"{inc.name} is defined with arities {arities[inc.name]} and {n}")
    bindings = {}
    counter = itertools.count(1)

    def bind(value, hint):
        for k, v in bindings.items():
            if v is value:
                return k
        label = hint if hint not in mu_names and hint not in bindings else f"_r{next(counter)}"
        while label in bindings or label in mu_names:
            label = f"_r{next(counter)}"
        bindings[label] = value
        return label

    def relation_value(e):
        value = resolve_value(e)
        if not isinstance(value, (Extensional, Intensional)):
            raise TypeMismatch(f"expected a relation, got {type(value).__name__}")
        return value

    def conjuncts(e):
        """Body atoms for a table expression, or None when the table is empty."""
        if isinstance(e, TopE):
            return []
        if isinstance(e, BottomE):
            return None
        if isinstance(e, IntersectE):
            left, right = conjuncts(e.left), conjuncts(e.right)
            return None if left is None or right is None else left + right
        if isinstance(e, ApplyE):
            if isinstance(e.rel, VarE) and e.rel.name in mu_names:
                return [Atom(e.rel.name, e.args)]
            _check_closed(e.rel, mu_names)
            value = relation_value(e.rel)
            hint = e.rel.name if isinstance(e.rel, VarE) else "_r"
            return [Atom(bind(value, hint), e.args)]
        if isinstance(e, WhereE):
            _check_closed(e.program, mu_names)
            prog = resolve_value(e.program)
            if not isinstance(prog, Program):
                raise TypeMismatch("where needs a program")
            return [Atom(bind(Intensional(prog, g.predicate, len(g.args)), "_w"), g.args)
                    for g in e.query.goals]
        raise UnsupportedExpression(f"cannot translate table expression {type(e).__name__} into clause bodies")

    clauses = []

    def translate(head_name, e):
        if isinstance(e, UnionE):
            translate(head_name, e.left)
            translate(head_name, e.right)
        elif isinstance(e, ProjectE):
            body = conjuncts(e.table)
            if body is not None:
                clauses.append(Clause(Atom(head_name, e.args), tuple(body)))
        elif isinstance(e, RelLit):
            clauses.extend(Clause(Atom(head_name, t)) for t in e.relation.tuples)
        elif isinstance(e, VarE):
            n = arities.get(head_name)
            if n is None:
                raise UnsupportedExpression(f"arity of {head_name} is not determined")
            xs = tuple(Var(f"X{i}") for i in range(1, n + 1))
            if e.name in mu_names:
                clauses.append(Clause(Atom(head_name, xs), (Atom(e.name, xs),)))
            else:
                clauses.append(Clause(Atom(head_name, xs), (Atom(bind(relation_value(e), e.name), xs),)))
        else:
            raise UnsupportedExpression(f"cannot translate relation expression {type(e).__name__} into clauses")

    for inc in inclusions:
        translate(inc.name, inc.rhs)
    return Program(tuple(clauses), {k: v.arity for k, v in bindings.items()}, bindings, name)


def _check_closed(e, names):
    from .lang import free_names
    bad = free_names(e) & names
    if bad:
        raise UnsupportedExpression(
            f"inclusion variable(s) {', '.join(sorted(bad))} may only appear as R:(...) operands")
