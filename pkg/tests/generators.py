"""Random instance generators and brute-force oracles shared by the test modules.

Generators take a ``random.Random`` so the same code serves hypothesis
(``st.randoms()``) and the fixed-seed loops of the acceptance suite.
"""
import itertools
import random
from pathlib import Path

from tra.engine import Atom, Clause, Program
from tra.relations import Extensional
from tra.tables import Table
from tra.terms import Compound, Const, Universe, Var, substitute, variables

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

CONSTS = [Const(c) for c in "abcd"]
X, Y, Z, W = (Var(n) for n in "XYZW")
HEADING_POOL = [X, Y, Z, W]
LOCALS = [Var("L1"), Var("L2")]


def universe_of(consts, functors=(), depth_bound=1):
    return Universe(frozenset(consts), frozenset(functors), depth_bound)


def random_term(rng: random.Random, vars_, consts, functor_p=0.15, depth=1):
    r = rng.random()
    if depth > 0 and r < functor_p:
        return Compound("f", (random_term(rng, vars_, consts, functor_p, depth - 1),))
    if vars_ and r < 0.55:
        return rng.choice(vars_)
    return rng.choice(consts)


def random_table(rng, consts=CONSTS[:3], pool=HEADING_POOL, max_heading=3, max_rows=4,
                 functor_p=0.1, heading=None):
    """Table whose rows mix constants and row-local variables (shared locals encode equalities)."""
    if heading is None:
        k = rng.randint(0, max_heading)
        heading = tuple(rng.sample(pool, k))
    rows = set()
    for _ in range(rng.randint(0, max_rows)):
        rows.add(tuple(random_term(rng, LOCALS, consts, functor_p) for _ in heading))
    return Table(tuple(heading), frozenset(rows))


def random_relation(rng, consts=CONSTS[:3], arity=None, max_tuples=6):
    arity = rng.randint(0, 3) if arity is None else arity
    universe = list(itertools.product(consts, repeat=arity))
    k = rng.randint(0, min(max_tuples, len(universe)))
    return Extensional(arity, frozenset(rng.sample(universe, k)))


def random_term_tuple(rng, arity, vars_=(X, Y, Z), consts=CONSTS[:3], functor_p=0.15):
    return tuple(random_term(rng, list(vars_), consts, functor_p) for _ in range(arity))


def tuple_covering(rng, heading, consts=CONSTS[:3], extra=(0, 2)):
    """Term tuple whose variables are exactly ``heading``."""
    items = []
    for v in heading:
        items.append(Compound("f", (v,)) if rng.random() < 0.2 else v)
    for _ in range(rng.randint(*extra)):
        items.append(random_term(rng, list(heading), consts, 0.15))
    rng.shuffle(items)
    return tuple(items)


# ---------------------------------------------------------------- programs

def random_program(rng, consts=CONSTS, n_preds=3, max_clauses=6, recursive=False, name="R"):
    """Random Datalog program over ``p0..p{n-1}``.

    ``p0`` is purely extensional.  With ``recursive=False`` rule bodies only
    use lower-numbered predicates, which keeps every SLD tree finite.
    """
    arities = {f"p{i}": rng.randint(1, 2) for i in range(n_preds)}
    vars_ = [X, Y, Z]
    clauses = []
    for _ in range(rng.randint(2, 3)):
        clauses.append(Clause(Atom("p0", tuple(rng.choice(consts) for _ in range(arities["p0"])))))
    while len(clauses) < max_clauses and rng.random() < 0.85:
        i = rng.randint(1, n_preds - 1)
        head_pred = f"p{i}"
        pool = list(arities) if recursive else [f"p{j}" for j in range(i)]
        body = []
        for _ in range(rng.randint(0, 2)):
            q = rng.choice(pool)
            body.append(Atom(q, tuple(random_term(rng, vars_, consts, 0.0) for _ in range(arities[q]))))
        head = Atom(head_pred, tuple(random_term(rng, vars_, consts, 0.0) for _ in range(arities[head_pred])))
        clauses.append(Clause(head, tuple(body)))
    return Program(tuple(clauses), name=name)


def random_goals(rng, program, consts=CONSTS, k=None, vars_=(X, Y, Z)):
    arities = program.predicates
    preds = sorted(arities) or ["p0"]
    k = rng.randint(1, 2) if k is None else k
    goals = []
    for _ in range(k):
        p = rng.choice(preds)
        goals.append(Atom(p, tuple(random_term(rng, list(vars_), consts, 0.0) for _ in range(arities.get(p, 1)))))
    return tuple(goals)


# ---------------------------------------------------------------- oracles

def ground_table(table: Table, universe: Universe) -> Table:
    """Replace every row by all of its ground instances over ``universe``."""
    rows = set()
    for row in table.rows:
        vs = variables(row)
        for values in itertools.product(universe.terms, repeat=len(vs)):
            m = dict(zip(vs, values))
            rows.add(tuple(substitute(t, m) for t in row))
    return Table(table.heading, frozenset(rows))


def assignments(vs, universe: Universe):
    for values in itertools.product(universe.terms, repeat=len(vs)):
        yield dict(zip(vs, values))


def ground_rows(table: Table, universe: Universe) -> set:
    """Ground heading assignments a table denotes, as frozensets of (var, value) pairs."""
    return {frozenset(zip(table.heading, row)) for row in ground_table(table, universe).rows}


def brute_closure(edges) -> set:
    """Transitive closure by repeated squaring until nothing new appears."""
    closure = set(edges)
    while True:
        new = {(a, d) for (a, b) in closure for (c, d) in closure if b == c} - closure
        if not new:
            return closure
        closure |= new
