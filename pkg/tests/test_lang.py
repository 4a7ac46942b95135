import pytest
from hypothesis import given, settings, strategies as st

from tra.engine import Program, SearchLimits, least_model, program_to_tra
from tra.errors import NonMonotone, ParseError, TypeMismatch, UnboundIdentifier
from tra.expr import ApplyE, IntersectE, MuE, ProjectE, format_expr
from tra.lang import (
    Abstraction,
    Config,
    check_inclusion,
    evaluate,
    parse,
    parse_inclusion,
    solve_bottom_up,
    solve_mu,
    solve_mu_group,
)
from tra.relations import Extensional, Intensional, apply, materialize, project, relation
from tra.syntax import load_program
from tra.tables import Table, bottom, top
from tra.terms import Const, Universe, Var, make_list

from generators import CONSTS, PROGRAMS, brute_closure, ground_table, random_program

X, Y, Z, S = Var("X"), Var("Y"), Var("Z"), Var("S")
R = relation([("a", "b"), ("b", "c"), ("c", "a")])
COMPOSED = relation([("a", "c"), ("b", "a"), ("c", "b")])
UNIVERSE = Universe(frozenset(CONSTS), frozenset(), 0)

QSORT_MU = (
    "mu qsort . qsort >= ([],U-U)/top"
    " \\/ ([X|Xs],U-W)/((?- partition(X,Xs,Y1,Y2) where (lam order.P)(nu {ORDER}.Orderings))"
    " /\\ qsort:(Y1,U-[X|V]) /\\ qsort:(Y2,V-W))"
)


@pytest.fixture(scope="module")
def sort_env():
    p, _ = load_program(PROGRAMS / "P.tra")
    o, _ = load_program(PROGRAMS / "Orderings.tra")
    return {"P": p, "Orderings": o}


def ints(*xs):
    return make_list([Const(x) for x in xs])


# ---------------------------------------------------------------- parsing

def test_parse_composition_formula():
    e = parse("(X,Z)/(q:(X,Y) /\\ r:(Y,Z))")
    assert isinstance(e, ProjectE)
    assert isinstance(e.table, IntersectE)
    assert isinstance(e.table.left, ApplyE) and isinstance(e.table.right, ApplyE)


def test_parse_mu():
    e = parse("mu q . q >= (X,Z)/(e:(X,Y) /\\ q:(Y,Z)) \\/ (X,Y)/(e:(X,Y))")
    assert isinstance(e, MuE) and e.name == "q"


def test_parse_error_at_end_of_input():
    with pytest.raises(ParseError) as info:
        parse("q : (X")
    assert info.value.line == 1 and info.value.column == 7
    assert ")" in info.value.expected


def test_unicode_spellings():
    assert parse("(X,Z)/(q:(X,Y) ∩ r:(Y,Z))") == parse("(X,Z)/(q:(X,Y) /\\ r:(Y,Z))")
    assert parse("μ t . t ⊇ (X)/⊤ ∪ {(a)}") == parse("mu t . t >= (X)/top \\/ {(a)}")
    assert parse_inclusion("p ⊃ (X)/top") == parse_inclusion("p >= (X)/top")


def test_empty_relation_literal_is_rejected():
    with pytest.raises(ParseError):
        parse("{}")


@pytest.mark.parametrize("src", [
    "(X,Z)/(q:(X,Y) /\\ r:(Y,Z))",
    "mu t . t >= (X,Y)/e:(X,Y) \\/ (X,Z)/(e:(X,Y) /\\ t:(Y,Z))",
    "(?- q(X,Y), q(Y,Z) where P)",
    "(lam order . P)(nu leq . Orderings)",
    "{(a,b),(b,c)} : (X,Y) /\\ top",
    "(a)/top \\/ bot",
    QSORT_MU.format(ORDER="leq"),
])
def test_format_round_trip(src):
    e = parse(src)
    assert parse(format_expr(e)) == e
    assert parse(format_expr(e, unicode=True)) == e


# ---------------------------------------------------------------- evaluation

def test_eval_composition():
    got = evaluate(parse("(X,Z)/(q:(X,Y) /\\ r:(Y,Z))"), {"q": R, "r": R})
    assert got == COMPOSED


def test_eval_constants():
    assert evaluate(parse("top")) == top()
    assert evaluate(parse("bot")) == bottom()
    assert evaluate(parse("(c,d)/({(a,b)}:(c,d))")) == Extensional.empty(2)


def test_eval_where_and_nu():
    prog, _ = load_program(PROGRAMS / "chain.tra")
    env = {"chain": prog}
    t3 = evaluate(parse("(?- q(X,Y), q(Y,Z) where chain)"), env)
    assert t3 == apply(relation([("a", "b", "c"), ("b", "c", "d"), ("c", "d", "e")]), (X, Y, Z))
    q = evaluate(parse("nu q . chain"), env)
    assert isinstance(q, Intensional)
    assert materialize(q) == relation([("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")])


def test_eval_lambda_binds_relation_variable(sort_env):
    fn = evaluate(parse("(lam order . P)"), sort_env)
    assert isinstance(fn, Abstraction)
    prog = evaluate(parse("(lam order . P)(nu leq . Orderings)"), sort_env)
    assert isinstance(prog, Program) and "order" in prog.bindings


def test_type_errors():
    with pytest.raises(TypeMismatch):
        evaluate(parse("top /\\ {(a)}"))
    with pytest.raises(TypeMismatch):
        evaluate(parse("(X)/{(a)}"))
    with pytest.raises(TypeMismatch):
        evaluate(parse("top : (X)"))
    with pytest.raises(UnboundIdentifier):
        evaluate(parse("nowhere : (X)"))


def test_nonmonotone_use_is_rejected():
    with pytest.raises(NonMonotone):
        evaluate(parse("mu t . t >= (X)/(?- q(X) where (lam s . {q(a).})(t))"))


def test_arity_is_checked_per_inclusion():
    with pytest.raises(Exception):
        evaluate(parse("mu t . t >= {(a)} \\/ {(a,b)}"))


# ---------------------------------------------------------------- mu

TC = "mu t . t >= (X,Y)/(e:(X,Y)) \\/ (X,Z)/(e:(X,Y) /\\ t:(Y,Z))"


@pytest.mark.parametrize("strategy", ["bottom-up", "goal-directed", "auto"])
def test_transitive_closure(strategy):
    e = relation([("a", "b"), ("b", "c")])
    got = evaluate(parse(TC), {"e": e}, Config(mu_strategy=strategy))
    assert materialize(got) == relation([("a", "b"), ("b", "c"), ("a", "c")])


def test_rhs_ignoring_the_variable():
    e = relation([("a", "b"), ("b", "c")])
    assert solve_mu("q", "(X,Y)/(e:(X,Y))", {"e": e}) == e


def test_mutual_recursion_group():
    e = relation([("a", "b"), ("b", "c"), ("c", "d")])
    src = ("mu even . even >= (X,X)/(e:(X,Y)) \\/ (X,Z)/(e:(X,Y) /\\ odd:(Y,Z));"
           " odd >= (X,Z)/(e:(X,Y) /\\ even:(Y,Z))")
    got = evaluate(parse(src), {"e": e}, Config(universe=Universe.of("a", "b", "c", "d")))
    assert (Const("a"), Const("c")) in got.tuples
    assert (Const("a"), Const("b")) not in got.tuples


def test_iterates_grow_and_fixpoint_satisfies_inclusion():
    e = relation([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    mu = parse(TC)
    seen = []
    result = solve_bottom_up(mu.inclusions, {"e": e}, Config(), on_step=lambda cur: seen.append(cur["t"]))["t"]
    assert len(seen) > 2 and not seen[0].tuples
    assert all(r.tuples <= s.tuples for r, s in zip(seen, seen[1:]))
    rhs = evaluate(mu.inclusions[0].rhs, {"e": e, "t": result})
    assert check_inclusion(result, rhs)
    assert result.tuples == brute_closure(e.tuples)


def test_check_inclusion_examples():
    composed = evaluate(parse("(X,Z)/(r:(X,Y) /\\ r:(Y,Z))"), {"r": R})
    assert check_inclusion(COMPOSED, composed)
    assert not check_inclusion(Extensional.empty(2), composed)
    assert check_inclusion(Extensional.empty(2), evaluate(parse("(X,Y)/bot")))


def _round_trip(prog: Program, strategy: str):
    model = least_model(prog, universe=UNIVERSE)
    incs = program_to_tra(prog)
    solved = solve_mu_group(incs, {}, Config(universe=UNIVERSE, limits=SearchLimits(64, 5000)), strategy)
    for p, expected in model.items():
        value = solved[p]
        if isinstance(value, Intensional):
            vs = tuple(Var(f"V{i}") for i in range(value.arity))
            value = project(vs, ground_table(apply(value, vs), UNIVERSE))
        assert value == expected, (str(prog), p)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_mu_round_trip_bottom_up(rng):
    _round_trip(random_program(rng, recursive=rng.random() < 0.5), "bottom-up")


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_mu_round_trip_goal_directed(rng):
    _round_trip(random_program(rng, recursive=False), "goal-directed")


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_random_closure(rng):
    nodes = [Const(f"n{i}") for i in range(5)]
    edges = {(x, y) for x in nodes for y in nodes if rng.random() < 0.25}
    e = Extensional(2, frozenset(edges))
    got = solve_mu("t", parse(TC).inclusions[0].rhs, {"e": e}, strategy="bottom-up")
    assert got.tuples == brute_closure(edges)


# ---------------------------------------------------------------- lam: ascending / descending

def _sorted(env, order, xs, strategy="goal-directed"):
    expr = parse(f"({QSORT_MU.format(ORDER=order)}) : ({format_expr_list(xs)}, S-[])")
    return evaluate(expr, env, Config(mu_strategy=strategy))


def format_expr_list(xs):
    return "[" + ",".join(str(x) for x in xs) + "]"


@pytest.mark.parametrize("strategy", ["goal-directed", "auto"])
def test_qsort_ascending(sort_env, strategy):
    got = _sorted(sort_env, "leq", [2, 1, 3], strategy)
    assert got == Table((S,), frozenset({(ints(1, 2, 3),)}))


def test_qsort_descending(sort_env):
    assert _sorted(sort_env, "geq", [2, 1, 3]) == Table((S,), frozenset({(ints(3, 2, 1),)}))


@pytest.mark.parametrize("xs", [[], [1], [3, 3, 1], [1, 2, 3, 2]])
def test_orders_are_reverses(sort_env, xs):
    (asc,) = _sorted(sort_env, "leq", xs).rows
    (desc,) = _sorted(sort_env, "geq", xs).rows
    assert asc[0] == ints(*sorted(xs))
    assert desc[0] == ints(*sorted(xs, reverse=True))
