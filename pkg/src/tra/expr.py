"""AST of the TRA expression language and its printer.

``format_expr`` emits the ASCII concrete syntax accepted by :func:`tra.lang.parse`;
``unicode=True`` uses the mathematical symbols instead.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import format_tuple


@dataclass(frozen=True)
class WhereE:
    query: object  # engine.Query
    program: "Expr"


@dataclass(frozen=True)
class IntersectE:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class ApplyE:
    rel: "Expr"
    args: tuple


@dataclass(frozen=True)
class ProjectE:
    args: tuple
    table: "Expr"


@dataclass(frozen=True)
class UnionE:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class TopE:
    pass


@dataclass(frozen=True)
class BottomE:
    pass


@dataclass(frozen=True)
class RelLit:
    relation: object  # relations.Extensional


@dataclass(frozen=True)
class VarE:
    name: str


@dataclass(frozen=True)
class Inclusion:
    name: str
    rhs: "Expr"


@dataclass(frozen=True)
class MuE:
    """Least solution of a group of inclusions; the value is the relation bound to ``name``."""

    name: str
    inclusions: tuple


@dataclass(frozen=True)
class NuE:
    predicate: str
    program: "Expr"


@dataclass(frozen=True)
class LamE:
    param: str
    program: "Expr"


@dataclass(frozen=True)
class AppE:
    fn: "Expr"
    arg: "Expr"


@dataclass(frozen=True)
class ProgLit:
    program: object  # engine.Program


Expr = Union[WhereE, IntersectE, ApplyE, ProjectE, UnionE, TopE, BottomE, RelLit,
             VarE, MuE, NuE, LamE, AppE, ProgLit]

_ASCII = {"and": "/\\", "or": "\\/", "incl": ">=", "top": "top", "bot": "bot",
          "mu": "mu", "nu": "nu", "lam": "lam", "query": "?-"}
_UNICODE = {"and": "∩", "or": "∪", "incl": "⊇", "top": "⊤", "bot": "⊥",
            "mu": "μ", "nu": "ν", "lam": "λ", "query": "←"}


def format_expr(e: Expr, unicode: bool = False) -> str:
    sym = _UNICODE if unicode else _ASCII

    def fmt(e):
        if isinstance(e, TopE):
            return sym["top"]
        if isinstance(e, BottomE):
            return sym["bot"]
        if isinstance(e, VarE):
            return e.name
        if isinstance(e, RelLit):
            from .relations import format_relation
            return format_relation(e.relation)
        if isinstance(e, ProgLit):
            return format_program_ref(e.program)
        if isinstance(e, WhereE):
            goals = ", ".join(str(a) for a in e.query.goals)
            return f"({sym['query']} {goals} where {fmt(e.program)})"
        if isinstance(e, IntersectE):
            return f"{operand(e.left, IntersectE)} {sym['and']} {operand(e.right, IntersectE)}"
        if isinstance(e, UnionE):
            return f"{operand(e.left, UnionE, ProjectE)} {sym['or']} {operand(e.right, UnionE, ProjectE)}"
        if isinstance(e, ApplyE):
            rel = e.rel
            rs = fmt(rel) if isinstance(rel, (VarE, RelLit)) else f"({fmt(rel)})"
            return f"{rs}:{format_tuple(e.args)}"
        if isinstance(e, ProjectE):
            tab = e.table
            ts = fmt(tab) if isinstance(tab, (TopE, BottomE, WhereE)) else f"({fmt(tab)})"
            return f"{format_tuple(e.args)}/{ts}"
        if isinstance(e, MuE):
            incs = "; ".join(format_inclusion(i, unicode) for i in e.inclusions)
            return f"{sym['mu']} {e.name} . {incs}"
        if isinstance(e, NuE):
            return f"{sym['nu']} {e.predicate} . {fmt(e.program)}"
        if isinstance(e, LamE):
            return f"({sym['lam']} {e.param} . {fmt(e.program)})"
        if isinstance(e, AppE):
            fn = fmt(e.fn) if isinstance(e.fn, LamE) else f"({fmt(e.fn)})"
            return f"{fn}({fmt(e.arg)})"
        raise TypeError(f"not an expression: {e!r}")

    def operand(e, *same):
        # chains of one associative operator print flat; mu swallows everything
        # to its right, so it is always bracketed
        if isinstance(e, (*same, ApplyE, VarE, RelLit, TopE, BottomE, WhereE, NuE, AppE, LamE)):
            return fmt(e)
        return f"({fmt(e)})"

    return fmt(e)


def format_inclusion(inc: Inclusion, unicode: bool = False) -> str:
    op = "⊇" if unicode else ">="
    return f"{inc.name} {op} {format_expr(inc.rhs, unicode)}"


def format_program_ref(program) -> str:
    if program.name and program.name != "<inline>":
        return program.name
    return "{" + " ".join(str(c) for c in program.clauses) + "}"
