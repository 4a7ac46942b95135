"""Tokenizer and recursive-descent parser for terms, clauses and program files.

Program files are Prolog-like::

    % comment
    #rel order/2.              relation variable (bound later, e.g. by lam)
    #universe a, b, c, f/1.    constants and functors of the declared universe
    #depth 2.                  nesting bound for the universe
    q(a,b).
    p(X,Z) :- q(X,Y), q(Y,Z).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .engine import Atom, Clause, Program, Query
from .errors import ParseError
from .terms import NIL, Compound, Const, Universe, Var, cons, fresh_var, pair

_TOKEN = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<punct>:-|\?-|>=|/\\|\\/|[()\[\]{},|.:/;#-])
  | (?P<alias>[∩∪⊇⊃⊤⊥μνλ←])
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
""", re.VERBOSE)

_ALIASES = {"∩": ("punct", "/\\"), "∪": ("punct", "\\/"), "⊇": ("punct", ">="), "⊃": ("punct", ">="),
            "⊤": ("name", "top"), "⊥": ("name", "bot"), "μ": ("name", "mu"),
            "ν": ("name", "nu"), "λ": ("name", "lam"), "←": ("punct", "?-")}


@dataclass(frozen=True)
class Token:
    kind: str  # punct | int | var | name | eof
    value: object
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(str(self.value))


def tokenize(src: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "alias":
            kind, value = _ALIASES[text]
        elif kind == "quoted":
            kind, value = "name", re.sub(r"\\(.)", r"\1", text[1:-1])
        elif kind == "int":
            value = int(text)
        else:
            value = text
        if kind != "ws":
            tokens.append(Token(kind, value, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", None, line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, src: str):
        self.tokens = tokenize(src)
        self.pos = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset=1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, value, kind="punct") -> bool:
        return self.tok.kind == kind and self.tok.value == value

    def at_name(self, value) -> bool:
        return self.at(value, "name")

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, expected, message=None):
        t = self.tok
        raise ParseError(message or f"unexpected {t.describe()}", t.line, t.column, expected)

    def expect(self, value, kind="punct") -> Token:
        if not self.at(value, kind):
            self.error({str(value)})
        return self.advance()

    def expect_ident(self) -> str:
        if self.tok.kind not in ("name", "var"):
            self.error({"identifier"})
        return self.advance().value

    def expect_eof(self):
        if self.tok.kind != "eof":
            self.error({"end of input"})

    # -- terms

    def term(self):
        t = self.primary_term()
        while self.at("-"):
            self.advance()
            t = pair(t, self.primary_term())
        return t

    def primary_term(self):
        t = self.tok
        if t.kind == "var":
            self.advance()
            return fresh_var() if t.value == "_" else Var(t.value)
        if t.kind == "int":
            self.advance()
            return Const(t.value)
        if t.kind == "name":
            self.advance()
            if self.at("("):
                self.advance()
                return Compound(t.value, self.term_list(")"))
            return Const(t.value)
        if self.at("["):
            return self.list_term()
        if self.at("("):
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        self.error({"term"})

    def term_list(self, closer) -> tuple:
        items = [self.term()]
        while self.at(","):
            self.advance()
            items.append(self.term())
        if not self.at(closer):
            self.error({",", closer, "-"})
        self.advance()
        return tuple(items)

    def list_term(self):
        self.expect("[")
        if self.at("]"):
            self.advance()
            return NIL
        items = [self.term()]
        while self.at(","):
            self.advance()
            items.append(self.term())
        tail = NIL
        if self.at("|"):
            self.advance()
            tail = self.term()
        if not self.at("]"):
            self.error({",", "|", "]"})
        self.advance()
        out = tail
        for item in reversed(items):
            out = cons(item, out)
        return out

    def tuple_(self, allow_empty=False) -> tuple:
        self.expect("(")
        if allow_empty and self.at(")"):
            self.advance()
            return ()
        return self.term_list(")")

    # -- atoms and clauses

    def atom(self) -> Atom:
        if self.tok.kind != "name":
            self.error({"predicate name"})
        name = self.advance().value
        if self.at("("):
            self.advance()
            return Atom(name, self.term_list(")"))
        return Atom(name, ())

    def atoms(self) -> tuple:
        out = [self.atom()]
        while self.at(","):
            self.advance()
            out.append(self.atom())
        return tuple(out)

    def query(self) -> Query:
        self.expect("?-")
        return Query(self.atoms())

    def clause(self) -> Clause:
        head = self.atom()
        body = ()
        if self.at(":-"):
            self.advance()
            body = self.atoms()
        self.expect(".")
        return Clause(head, body)

    def program_body(self, closer=None, name="<inline>") -> Program:
        clauses, rel_vars = [], {}
        constants, functors, depth = [], [], None
        while not (self.tok.kind == "eof" if closer is None else self.at(closer)):
            if self.tok.kind == "eof":
                self.error({closer})
            if self.at("#"):
                self.advance()
                if self.tok.kind != "name":
                    self.error({"rel", "universe", "depth"})
                directive = self.advance().value
                if directive == "rel":
                    while True:
                        rv = self.expect_ident()
                        arity = None
                        if self.at("/"):
                            self.advance()
                            if self.tok.kind != "int":
                                self.error({"arity"})
                            arity = self.advance().value
                        rel_vars[rv] = arity
                        if not self.at(","):
                            break
                        self.advance()
                elif directive == "universe":
                    while True:
                        t = self.tok
                        if t.kind not in ("name", "int"):
                            self.error({"constant", "functor/arity"})
                        self.advance()
                        if t.kind == "name" and self.at("/"):
                            self.advance()
                            if self.tok.kind != "int":
                                self.error({"arity"})
                            functors.append((t.value, self.advance().value))
                        else:
                            constants.append(Const(t.value))
                        if not self.at(","):
                            break
                        self.advance()
                elif directive == "depth":
                    if self.tok.kind != "int":
                        self.error({"integer"})
                    depth = self.advance().value
                else:
                    raise ParseError(f"unknown directive #{directive}", self.tok.line, self.tok.column,
                                     {"rel", "universe", "depth"})
                self.expect(".")
            else:
                clauses.append(self.clause())
        universe = None
        if constants or functors:
            universe = Universe(frozenset(constants), frozenset(functors), 2 if depth is None else depth)
        return Program(tuple(clauses), rel_vars, {}, name, universe), depth


def parse_term(src: str):
    p = Parser(src)
    t = p.term()
    p.expect_eof()
    return t


def parse_tuple(src: str) -> tuple:
    p = Parser(src)
    t = p.tuple_(allow_empty=True)
    p.expect_eof()
    return t


def parse_atom(src: str) -> Atom:
    p = Parser(src)
    a = p.atom()
    p.expect_eof()
    return a


def parse_query(src: str) -> Query:
    p = Parser(src)
    if not p.at("?-"):
        q = Query(p.atoms())
    else:
        q = p.query()
    p.expect_eof()
    return q


def parse_program(src: str, name: str = "<inline>") -> Program:
    p = Parser(src)
    program, _ = p.program_body(name=name)
    return program


def load_program(path) -> tuple:
    """Parse a program file; returns the program (named after the file stem) and its ``#depth``."""
    path = Path(path)
    p = Parser(path.read_text())
    return p.program_body(name=path.stem)
