"""Parser and evaluator for TRA expressions.

Concrete syntax (ASCII spellings; the Unicode symbols are accepted too)::

    expr      := union
    union     := proj { "\\/" proj }
    proj      := tuple "/" inter | inter
    inter     := postfix { "/\\" postfix }
    postfix   := primary { ":" tuple }
    primary   := "top" | "bot" | ident | "{" [tuple {"," tuple}] "}"
               | "(" "?-" atom {"," atom} "where" progref ")"
               | "mu" ident "." ident ">=" expr {";" ident ">=" expr}
               | "nu" ident "." progref
               | "(" "lam" ident "." progref ")" ["(" expr ")"]
               | "(" expr ")"
    progref   := ident | "{" clauses "}" | "(" "lam" ident "." progref ")" "(" expr ")"

Values are tables, relations (:class:`Extensional` / :class:`Intensional`),
programs, and program abstractions produced by ``lam``.
"""
from __future__ import annotations

from collections import ChainMap
from dataclasses import dataclass, field
from typing import Mapping

from .engine import Program, SearchLimits, tra_to_clauses, where
from .errors import (
    NonMonotone,
    ParseError,
    ResourceExceeded,
    TypeMismatch,
    UnboundIdentifier,
    UniverseRequired,
)
from .expr import (
    AppE,
    ApplyE,
    BottomE,
    Expr,
    Inclusion,
    IntersectE,
    LamE,
    MuE,
    NuE,
    ProgLit,
    ProjectE,
    RelLit,
    TopE,
    UnionE,
    VarE,
    WhereE,
)
from .relations import (
    Extensional,
    Intensional,
    apply,
    materialize,
    project,
    rel_subset,
    rel_union,
)
from .syntax import Parser
from .tables import Table, bottom, intersect, top
from .terms import Universe, is_ground

_KEYWORDS = {"top", "bot", "mu", "nu", "lam", "where"}


# ---------------------------------------------------------------- parsing

class ExprParser(Parser):
    def expr(self):
        left = self.proj()
        while self.at("\\/"):
            self.advance()
            left = UnionE(left, self.proj())
        return left

    def proj(self):
        if self.at("("):
            start = self.pos
            try:
                args, tuple_error = self.tuple_(), None
            except ParseError as exc:
                args, tuple_error = None, exc
            if args is not None and self.at("/"):
                self.advance()
                return ProjectE(args, self.inter())
            self.pos = start
            try:
                return self.inter()
            except ParseError as exc:
                # report whichever reading got further into the input
                if tuple_error is None:
                    raise
                here, there = (exc.line, exc.column), (tuple_error.line, tuple_error.column)
                if there > here:
                    raise tuple_error from None
                if there == here:
                    raise ParseError(exc.message, exc.line, exc.column,
                                     exc.expected | tuple_error.expected) from None
                raise
        return self.inter()

    def inter(self):
        left = self.postfix()
        while self.at("/\\"):
            self.advance()
            left = IntersectE(left, self.postfix())
        return left

    def postfix(self):
        e = self.primary()
        while self.at(":"):
            self.advance()
            e = ApplyE(e, self.tuple_(allow_empty=True))
        return e

    def ident(self) -> str:
        if self.tok.kind not in ("name", "var") or (self.tok.kind == "name" and self.tok.value in _KEYWORDS):
            self.error({"identifier"})
        return self.advance().value

    def primary(self):
        t = self.tok
        if t.kind == "name" and t.value == "top":
            self.advance()
            return TopE()
        if t.kind == "name" and t.value == "bot":
            self.advance()
            return BottomE()
        if t.kind == "name" and t.value == "mu":
            return self.mu()
        if t.kind == "name" and t.value == "nu":
            self.advance()
            pred = self.ident()
            self.expect(".")
            return NuE(pred, self.progref())
        if t.kind in ("name", "var") and t.value not in _KEYWORDS:
            self.advance()
            return VarE(t.value)
        if self.at("{"):
            return self.rel_literal()
        if self.at("("):
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.value == "?-":
                return self.where_expr()
            if nxt.kind == "name" and nxt.value == "lam":
                return self.lam()
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.error({"expression"})

    def mu(self):
        self.expect("mu", "name")
        name = self.ident()
        self.expect(".")
        incs = [self.inclusion()]
        while self.at(";"):
            self.advance()
            incs.append(self.inclusion())
        if name not in {i.name for i in incs}:
            raise ParseError(f"mu {name} has no inclusion for {name}", self.tok.line, self.tok.column)
        return MuE(name, tuple(incs))

    def inclusion(self) -> Inclusion:
        name = self.ident()
        self.expect(">=")
        return Inclusion(name, self.expr())

    def where_expr(self):
        self.expect("(")
        q = self.query()
        self.expect("where", "name")
        prog = self.progref()
        self.expect(")")
        return WhereE(q, prog)

    def lam(self):
        self.expect("(")
        self.expect("lam", "name")
        param = self.ident()
        self.expect(".")
        body = self.progref()
        self.expect(")")
        fn = LamE(param, body)
        if self.at("("):
            self.advance()
            arg = self.expr()
            self.expect(")")
            return AppE(fn, arg)
        return fn

    def progref(self):
        if self.at("{"):
            self.advance()
            program, _ = self.program_body(closer="}")
            self.expect("}")
            return ProgLit(program)
        if self.at("(") and self.peek().kind == "name" and self.peek().value == "lam":
            return self.lam()
        return VarE(self.ident())

    def rel_literal(self):
        start = self.tok
        self.expect("{")
        tuples = []
        if not self.at("}"):
            tuples.append(self.tuple_(allow_empty=True))
            while self.at(","):
                self.advance()
                tuples.append(self.tuple_(allow_empty=True))
        self.expect("}")
        if not tuples:
            raise ParseError("empty relation literal has no arity; write bot-based expressions instead",
                             start.line, start.column, {"tuple"})
        arities = {len(t) for t in tuples}
        if len(arities) != 1:
            raise ParseError("relation literal mixes tuple lengths", start.line, start.column)
        if not all(is_ground(t) for t in tuples):
            raise ParseError("relation literal tuples must be ground", start.line, start.column)
        return RelLit(Extensional(arities.pop(), frozenset(tuples)))


def parse(src: str) -> Expr:
    p = ExprParser(src)
    e = p.expr()
    p.expect_eof()
    return e


def parse_inclusion(src: str) -> Inclusion:
    p = ExprParser(src)
    inc = p.inclusion()
    p.expect_eof()
    return inc


# ---------------------------------------------------------------- static checks

def free_names(e) -> set:
    """Identifiers an expression reads from its environment."""
    if isinstance(e, VarE):
        return {e.name}
    if isinstance(e, (TopE, BottomE, RelLit)):
        return set()
    if isinstance(e, ProgLit):
        return set(e.program.free_rel_vars)
    if isinstance(e, (IntersectE, UnionE)):
        return free_names(e.left) | free_names(e.right)
    if isinstance(e, ApplyE):
        return free_names(e.rel)
    if isinstance(e, ProjectE):
        return free_names(e.table)
    if isinstance(e, WhereE):
        return free_names(e.program)
    if isinstance(e, NuE):
        return free_names(e.program)
    if isinstance(e, LamE):
        return free_names(e.program) - {e.param}
    if isinstance(e, AppE):
        return free_names(e.fn) | free_names(e.arg)
    if isinstance(e, MuE):
        bound = {i.name for i in e.inclusions}
        return set().union(*(free_names(i.rhs) for i in e.inclusions)) - bound
    raise TypeError(f"not an expression: {e!r}")


def check_positive(inclusions) -> None:
    """Reject inclusion variables used anywhere but as ∪/∩/:/ operands."""

    def visit(e, names):
        if isinstance(e, (IntersectE, UnionE)):
            visit(e.left, names)
            visit(e.right, names)
        elif isinstance(e, ApplyE):
            visit(e.rel, names)
        elif isinstance(e, ProjectE):
            visit(e.table, names)
        elif isinstance(e, MuE):
            inner = names - {i.name for i in e.inclusions}
            for i in e.inclusions:
                visit(i.rhs, inner)
        elif isinstance(e, (WhereE, NuE, LamE, AppE, ProgLit)):
            bad = free_names(e) & names
            if bad:
                raise NonMonotone(f"{', '.join(sorted(bad))} occurs inside a program position")

    names = {i.name for i in inclusions}
    for inc in inclusions:
        visit(inc.rhs, names)


class Abstraction:
    """Value of ``lam param . program``: a program awaiting a relation for ``param``."""

    def __init__(self, param: str, program: Program):
        self.param = param
        self.program = program

    def __call__(self, value) -> Program:
        return self.program.bind(self.param, value)

    def __repr__(self):
        return f"<lam {self.param} . {self.program.name}>"


def sort_of_value(v) -> str:
    if isinstance(v, Table):
        return "table"
    if isinstance(v, (Extensional, Intensional)):
        return "relation"
    if isinstance(v, Program):
        return "program"
    if isinstance(v, Abstraction):
        return "lambda"
    raise TypeMismatch(f"not a TRA value: {v!r}")


def typecheck(e, env: Mapping = None) -> str:
    """Sort of ``e`` ('table', 'relation', 'program' or 'lambda'); raises TypeMismatch."""
    env = env if env is not None else {}

    def sort(e, scope):
        if isinstance(e, (TopE, BottomE, WhereE)):
            if isinstance(e, WhereE):
                want(e.program, "program", scope, "where")
            return "table"
        if isinstance(e, RelLit):
            return "relation"
        if isinstance(e, ProgLit):
            return "program"
        if isinstance(e, VarE):
            if e.name in scope:
                return scope[e.name]
            if e.name not in env:
                raise UnboundIdentifier(f"unbound identifier {e.name}")
            return sort_of_value(env[e.name])
        if isinstance(e, IntersectE):
            want(e.left, "table", scope, "/\\")
            want(e.right, "table", scope, "/\\")
            return "table"
        if isinstance(e, UnionE):
            want(e.left, "relation", scope, "\\/")
            want(e.right, "relation", scope, "\\/")
            return "relation"
        if isinstance(e, ApplyE):
            want(e.rel, "relation", scope, ":")
            return "table"
        if isinstance(e, ProjectE):
            want(e.table, "table", scope, "/")
            return "relation"
        if isinstance(e, MuE):
            inner = {**scope, **{i.name: "relation" for i in e.inclusions}}
            for i in e.inclusions:
                want(i.rhs, "relation", inner, f"{i.name} >=")
            return "relation"
        if isinstance(e, NuE):
            want(e.program, "program", scope, "nu")
            return "relation"
        if isinstance(e, LamE):
            want(e.program, "program", {**scope, e.param: "relation"}, "lam")
            return "lambda"
        if isinstance(e, AppE):
            want(e.fn, "lambda", scope, "application")
            want(e.arg, "relation", scope, "application")
            return "program"
        raise TypeError(f"not an expression: {e!r}")

    def want(e, expected, scope, op):
        got = sort(e, scope)
        if got != expected:
            raise TypeMismatch(f"'{op}' expects a {expected}, got a {got}")

    return sort(e, {})


# ---------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class Config:
    universe: Universe = None
    limits: SearchLimits = field(default_factory=SearchLimits)
    fix_cap: int = 1000
    mu_strategy: str = "auto"  # auto | bottom-up | goal-directed

    def __post_init__(self):
        if self.fix_cap < 1:
            raise ValueError("fix_cap must be at least 1")
        if self.mu_strategy not in ("auto", "bottom-up", "goal-directed"):
            raise ValueError(f"unknown mu strategy {self.mu_strategy!r}")


def _as_env(env) -> ChainMap:
    if env is None:
        return ChainMap()
    return env if isinstance(env, ChainMap) else ChainMap(dict(env))


def evaluate(e: Expr, env: Mapping = None, config: Config = None):
    """Type-check ``e`` against ``env`` and evaluate it."""
    env = _as_env(env)
    config = config or Config()
    typecheck(e, env)
    return _eval(e, env, config)


def _relation(v, op):
    if not isinstance(v, (Extensional, Intensional)):
        raise TypeMismatch(f"{op}: expected a relation, got {type(v).__name__}")
    return v


def _table(v, op):
    if not isinstance(v, Table):
        raise TypeMismatch(f"{op}: expected a table, got {type(v).__name__}")
    return v


def _program(v, env, op) -> Program:
    if not isinstance(v, Program):
        raise TypeMismatch(f"{op}: expected a program, got {type(v).__name__}")
    return v.close(env)


def _eval(e, env: ChainMap, config: Config):
    if isinstance(e, TopE):
        return top()
    if isinstance(e, BottomE):
        return bottom()
    if isinstance(e, RelLit):
        return e.relation
    if isinstance(e, ProgLit):
        return e.program.close(env)
    if isinstance(e, VarE):
        if e.name not in env:
            raise UnboundIdentifier(f"unbound identifier {e.name}")
        return env[e.name]
    if isinstance(e, WhereE):
        prog = _program(_eval(e.program, env, config), env, "where")
        return where(e.query, prog, env, config.limits)
    if isinstance(e, IntersectE):
        return intersect(_table(_eval(e.left, env, config), "/\\"),
                         _table(_eval(e.right, env, config), "/\\"))
    if isinstance(e, ApplyE):
        rel = _relation(_eval(e.rel, env, config), ":")
        return apply(rel, e.args, config.limits, env)
    if isinstance(e, ProjectE):
        return project(e.args, _table(_eval(e.table, env, config), "/"), config.universe)
    if isinstance(e, UnionE):
        left = _relation(_eval(e.left, env, config), "\\/")
        right = _relation(_eval(e.right, env, config), "\\/")
        if isinstance(left, Extensional) and isinstance(right, Extensional):
            return rel_union(left, right)
        return rel_union(left, right, config.limits, config.universe)
    if isinstance(e, MuE):
        return solve_mu_group(e.inclusions, env, config)[e.name]
    if isinstance(e, NuE):
        prog = _program(_eval(e.program, env, config), env, "nu")
        arity = prog.predicates.get(e.predicate)
        if arity is None:
            arity = prog.rel_vars.get(e.predicate)
        if arity is None:
            raise UnboundIdentifier(f"nu: {e.predicate} is not defined in {prog.name}")
        return Intensional(prog, e.predicate, arity)
    if isinstance(e, LamE):
        prog = _eval(e.program, env.new_child({e.param: None}), config)
        if not isinstance(prog, Program):
            raise TypeMismatch(f"lam: expected a program, got {type(prog).__name__}")
        return Abstraction(e.param, prog)
    if isinstance(e, AppE):
        fn = _eval(e.fn, env, config)
        if not isinstance(fn, Abstraction):
            raise TypeMismatch("application: expected a lam abstraction")
        return fn(_relation(_eval(e.arg, env, config), "application")).close(env)
    raise TypeError(f"not an expression: {e!r}")


def _infer_arity(e, known: Mapping):
    if isinstance(e, ProjectE):
        return len(e.args)
    if isinstance(e, RelLit):
        return e.relation.arity
    if isinstance(e, VarE):
        return known.get(e.name)
    if isinstance(e, UnionE):
        left = _infer_arity(e.left, known)
        return left if left is not None else _infer_arity(e.right, known)
    if isinstance(e, MuE):
        inner = dict(known)
        for _ in e.inclusions:
            for i in e.inclusions:
                if inner.get(i.name) is None:
                    inner[i.name] = _infer_arity(i.rhs, inner)
        return inner.get(e.name)
    return None


def _arities(inclusions, env) -> dict:
    known = {k: v.arity for k, v in env.items() if isinstance(v, (Extensional, Intensional))}
    arities = {i.name: None for i in inclusions}
    for _ in inclusions:
        for i in inclusions:
            if arities[i.name] is None:
                arities[i.name] = _infer_arity(i.rhs, {**known, **{k: a for k, a in arities.items() if a is not None}})
    missing = [k for k, a in arities.items() if a is None]
    if missing:
        raise TypeMismatch(f"mu: cannot determine the arity of {', '.join(missing)}")
    return arities


def solve_bottom_up(inclusions, env: Mapping, config: Config, on_step=None) -> dict:
    """Kleene iteration from empty relations until the iterates stop growing.

    ``on_step`` (if given) is called with each iterate, starting from the empty one.
    """
    env = _as_env(env)
    arities = _arities(inclusions, env)
    current = {n: Extensional.empty(a) for n, a in arities.items()}
    for _ in range(config.fix_cap):
        if on_step is not None:
            on_step(current)
        scope = env.new_child(dict(current))
        nxt = {n: set() for n in arities}
        for inc in inclusions:
            value = _relation(_eval(inc.rhs, scope, config), f"{inc.name} >=")
            if value.arity != arities[inc.name]:
                raise TypeMismatch(f"{inc.name} has arity {arities[inc.name]}, inclusion gives {value.arity}")
            nxt[inc.name] |= materialize(value, config.limits, config.universe, scope).tuples
        nxt = {n: Extensional(arities[n], frozenset(ts)) for n, ts in nxt.items()}
        for n in arities:
            if not current[n].tuples <= nxt[n].tuples:
                raise NonMonotone(f"mu: iterate for {n} shrank")
        if nxt == current:
            return current
        current = nxt
    raise ResourceExceeded(f"mu: no fixpoint within {config.fix_cap} iterations")


def solve_goal_directed(inclusions, env: Mapping, config: Config) -> dict:
    """Translate the inclusions back into clauses and hand them to SLD resolution."""
    env = _as_env(env)
    arities = _arities(inclusions, env)
    names = {i.name for i in inclusions}
    shadowed = env.new_child({n: None for n in names})

    def resolve_value(sub):
        return _eval(sub, shadowed, config)

    program = tra_to_clauses(inclusions, resolve_value, name="mu " + "/".join(sorted(names)))
    return {n: Intensional(program, n, a) for n, a in arities.items()}


def solve_mu_group(inclusions, env: Mapping = None, config: Config = None, strategy: str = None) -> dict:
    """Least solution of a group of inclusions, one relation per inclusion variable."""
    env = _as_env(env)
    config = config or Config()
    strategy = strategy or config.mu_strategy
    check_positive(inclusions)
    if strategy == "bottom-up":
        return solve_bottom_up(inclusions, env, config)
    if strategy == "goal-directed":
        return solve_goal_directed(inclusions, env, config)
    try:
        return solve_bottom_up(inclusions, env, config)
    except (UniverseRequired, ResourceExceeded):
        return solve_goal_directed(inclusions, env, config)


def solve_mu(name: str, rhs, env: Mapping = None, config: Config = None, strategy: str = None):
    """Least relation ``name`` with ``name ⊇ rhs``; ``rhs`` may be an expression or source text."""
    if isinstance(rhs, str):
        rhs = ExprParser(rhs).expr()
    return solve_mu_group((Inclusion(name, rhs),), env, config, strategy)[name]


def check_inclusion(lhs, rhs_value, config: Config = None) -> bool:
    """Whether ``lhs ⊇ rhs_value`` holds."""
    config = config or Config()
    return rel_subset(_relation(rhs_value, ">="), _relation(lhs, ">="), config.limits, config.universe)
