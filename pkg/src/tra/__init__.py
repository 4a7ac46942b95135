"""Table/Relation Algebra: relations, tables and definite-clause programs as values."""
from .engine import (
    Atom,
    Clause,
    Program,
    Query,
    SearchLimits,
    clause_to_tra,
    least_model,
    program_to_tra,
    tra_to_clauses,
    where,
)
from .errors import (
    ArityMismatch,
    Incomplete,
    NonMonotone,
    ParseError,
    ResourceExceeded,
    TraError,
    TypeMismatch,
    UnboundIdentifier,
    UniverseRequired,
    UnsupportedExpression,
)
from .lang import Config, check_inclusion, evaluate, parse, solve_mu, solve_mu_group
from .relations import (
    Extensional,
    Intensional,
    apply,
    materialize,
    project,
    rel_subset,
    rel_union,
    relation,
)
from .syntax import parse_program, parse_query, parse_term, parse_tuple
from .tables import Cylinder, Table, bottom, intersect, table_equal, to_cylinder, top
from .terms import Compound, Const, Universe, Var, ground_instances, rename_apart, unify

__all__ = [
    "Atom",
    "Clause",
    "Program",
    "Query",
    "SearchLimits",
    "clause_to_tra",
    "least_model",
    "program_to_tra",
    "tra_to_clauses",
    "where",
    "ArityMismatch",
    "Incomplete",
    "NonMonotone",
    "ParseError",
    "ResourceExceeded",
    "TraError",
    "TypeMismatch",
    "UnboundIdentifier",
    "UniverseRequired",
    "UnsupportedExpression",
    "Config",
    "check_inclusion",
    "evaluate",
    "parse",
    "solve_mu",
    "solve_mu_group",
    "Extensional",
    "Intensional",
    "apply",
    "materialize",
    "project",
    "rel_subset",
    "rel_union",
    "relation",
    "parse_program",
    "parse_query",
    "parse_term",
    "parse_tuple",
    "Cylinder",
    "Table",
    "bottom",
    "intersect",
    "table_equal",
    "to_cylinder",
    "top",
    "Compound",
    "Const",
    "Universe",
    "Var",
    "ground_instances",
    "rename_apart",
    "unify",
]
