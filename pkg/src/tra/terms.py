"""Herbrand terms, substitutions and unification to solved form.

A substitution is a plain ``dict`` mapping :class:`Var` to terms.  Inside the
resolution engine substitutions are kept in triangular form (bindings may
mention other bound variables) and :func:`resolve` reads them back; anything
returned by :func:`unify` is already idempotent.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import UniverseRequired


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Const:
    value: Union[str, int]

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, slots=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError(f"compound {self.functor!r} needs at least one argument")

    def __str__(self):
        return format_term(self)


Term = Union[Var, Const, Compound]
Substitution = dict
Equation = tuple  # (lhs, rhs)

NIL = Const("[]")


def cons(head: Term, tail: Term) -> Compound:
    return Compound(".", (head, tail))


def make_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = cons(item, out)
    return out


def pair(left: Term, right: Term) -> Compound:
    return Compound("-", (left, right))


# ---------------------------------------------------------------- printing

_PLAIN_NAME = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def _format_name(name) -> str:
    if isinstance(name, int):
        return str(name)
    if name == "[]" or _PLAIN_NAME.match(name):
        return name
    return "'" + name.replace("'", "\\'") + "'"


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return _format_name(t.value)
    if t.functor == "." and len(t.args) == 2:
        items = []
        while isinstance(t, Compound) and t.functor == "." and len(t.args) == 2:
            items.append(format_term(t.args[0]))
            t = t.args[1]
        inner = ",".join(items)
        if t == NIL:
            return f"[{inner}]"
        return f"[{inner}|{format_term(t)}]"
    if t.functor == "-" and len(t.args) == 2:
        left, right = t.args
        rs = format_term(right)
        if isinstance(right, Compound) and right.functor == "-" and len(right.args) == 2:
            rs = f"({rs})"
        return f"{format_term(left)}-{rs}"
    return _format_name(t.functor) + "(" + ",".join(format_term(a) for a in t.args) + ")"


def format_tuple(ts: Sequence[Term]) -> str:
    return "(" + ",".join(format_term(t) for t in ts) + ")"


# ---------------------------------------------------------------- inspection

def iter_vars(t: Term) -> Iterator[Var]:
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            yield x
        elif isinstance(x, Compound):
            stack.extend(reversed(x.args))


def variables(ts: Union[Term, Iterable[Term]]) -> tuple:
    """Distinct variables in first-occurrence order."""
    if isinstance(ts, (Var, Const, Compound)):
        ts = (ts,)
    seen = {}
    for t in ts:
        for v in iter_vars(t):
            seen.setdefault(v, None)
    return tuple(seen)


def is_ground(t: Union[Term, Iterable[Term]]) -> bool:
    return not variables(t)


def depth(t: Term) -> int:
    if isinstance(t, Compound):
        return 1 + max(depth(a) for a in t.args)
    return 0


# ---------------------------------------------------------------- substitution

def walk(t: Term, subst: Mapping) -> Term:
    while isinstance(t, Var) and t in subst:
        t = subst[t]
    return t


def resolve(t: Term, subst: Mapping) -> Term:
    """Apply ``subst`` exhaustively (handles triangular bindings)."""
    t = walk(t, subst)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(resolve(a, subst) for a in t.args))
    return t


def substitute(t: Term, mapping: Mapping) -> Term:
    """Apply ``mapping`` once, without chasing bindings."""
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(substitute(a, mapping) for a in t.args))
    return t


def _occurs(v: Var, t: Term, subst: Mapping) -> bool:
    stack = [t]
    while stack:
        x = walk(stack.pop(), subst)
        if x == v:
            return True
        if isinstance(x, Compound):
            stack.extend(x.args)
    return False


def _unify_into(a: Term, b: Term, subst: dict) -> bool:
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x = walk(x, subst)
        y = walk(y, subst)
        if x == y:
            continue
        if isinstance(x, Var):
            if _occurs(x, y, subst):
                return False
            subst[x] = y
        elif isinstance(y, Var):
            if _occurs(y, x, subst):
                return False
            subst[y] = x
        elif isinstance(x, Compound) and isinstance(y, Compound):
            if x.functor != y.functor or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        else:
            return False
    return True


def unify_terms(a: Term, b: Term, subst: Mapping = None):
    """Extend ``subst`` (triangular) so that ``a`` and ``b`` become equal, or return None."""
    s = dict(subst) if subst else {}
    return s if _unify_into(a, b, s) else None


def unify_sequences(xs: Sequence[Term], ys: Sequence[Term], subst: Mapping = None):
    if len(xs) != len(ys):
        return None
    s = dict(subst) if subst else {}
    for x, y in zip(xs, ys):
        if not _unify_into(x, y, s):
            return None
    return s


def unify(equations: Iterable[Equation]):
    """Most general solved form of an equation set, or None when it is unsolvable.

    The occurs check is always on, so the result is idempotent: no bound
    variable occurs in any right-hand side.
    """
    s = {}
    for lhs, rhs in equations:
        if not _unify_into(lhs, rhs, s):
            return None
    return {v: resolve(v, s) for v in s}


def is_solved_form(equations: Iterable[Equation]) -> bool:
    eqs = list(equations)
    lhs = [l for l, _ in eqs]
    if not all(isinstance(l, Var) for l in lhs) or len(set(lhs)) != len(lhs):
        return False
    bound = set(lhs)
    return not any(v in bound for _, r in eqs for v in iter_vars(r))


# ---------------------------------------------------------------- renaming

# next() on itertools.count is atomic under the GIL, so concurrent callers
# always receive distinct names.
_fresh_counter = itertools.count(1)


def fresh_var(avoid=()) -> Var:
    while True:
        v = Var(f"_G{next(_fresh_counter)}")
        if v not in avoid:
            return v


def renaming(vs: Iterable[Var], avoid=()) -> dict:
    return {v: fresh_var(avoid) for v in vs}


def rename_apart(x, avoid=(), protect=()):
    """Replace every variable of ``x`` outside ``protect`` by a fresh one not in ``avoid``.

    ``x`` is a term, a tuple of terms, or an equation set given as a list of
    ``(lhs, rhs)`` pairs; the result has the same shape.
    """
    if isinstance(x, (Var, Const, Compound)):
        terms = [x]
    elif isinstance(x, list):
        terms = [t for eq in x for t in eq]
    else:
        terms = list(x)
    protect = set(protect)
    mapping = renaming((v for v in variables(terms) if v not in protect), set(avoid))
    if isinstance(x, (Var, Const, Compound)):
        return substitute(x, mapping)
    if isinstance(x, list):
        return [(substitute(l, mapping), substitute(r, mapping)) for l, r in x]
    return tuple(substitute(t, mapping) for t in x)


# ---------------------------------------------------------------- universe

@dataclass(frozen=True)
class Universe:
    """Finite slice of a Herbrand universe: constants plus functors up to a nesting depth."""

    constants: frozenset
    functors: frozenset = frozenset()
    depth_bound: int = 2

    def __post_init__(self):
        object.__setattr__(self, "constants", frozenset(
            c if isinstance(c, Const) else Const(c) for c in self.constants))
        object.__setattr__(self, "functors", frozenset(self.functors))
        if self.depth_bound < 0:
            raise ValueError("depth_bound must be non-negative")
        if any(n < 1 for _, n in self.functors):
            raise ValueError("functor arity must be at least 1")

    @classmethod
    def of(cls, *names, functors=(), depth_bound=2):
        return cls(frozenset(Const(n) for n in names), frozenset(functors), depth_bound)

    @cached_property
    def terms(self) -> tuple:
        """All ground terms of nesting depth at most ``depth_bound``, in a fixed order."""
        level = set(self.constants)
        if self.functors:
            for _ in range(self.depth_bound):
                nxt = set(self.constants)
                for f, n in self.functors:
                    for args in itertools.product(sorted(level, key=format_term), repeat=n):
                        nxt.add(Compound(f, args))
                if nxt == level:
                    break
                level = nxt
        return tuple(sorted(level, key=lambda t: (depth(t), format_term(t))))

    @cached_property
    def term_set(self) -> frozenset:
        return frozenset(self.terms)

    def __contains__(self, t):
        return t in self.term_set


def ground_instances(ts: Sequence[Term], universe: Universe = None) -> set:
    """Every variable-free instance of the tuple ``ts`` over ``universe``.

    Shared variables are instantiated consistently; a ground tuple is its own
    only instance and never needs a universe.
    """
    ts = tuple(ts)
    vs = variables(ts)
    if not vs:
        return {ts}
    if universe is None:
        raise UniverseRequired(format_tuple(ts))
    out = set()
    for values in itertools.product(universe.terms, repeat=len(vs)):
        mapping = dict(zip(vs, values))
        out.add(tuple(substitute(t, mapping) for t in ts))
    return out
