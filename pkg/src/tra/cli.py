"""Command-line front end.

    tra eval [-p file.tra]... [-e EXPR | exprfile] [--json] [limit flags]
    tra repl [-p file.tra]...
    tra check -p file.tra -e "IDENT >= EXPR"

``eval`` exits 0 on success, 1 on an evaluation error and 2 on a parse error.
``check`` exits 0 when the inclusion holds and 1 when it does not (or cannot
be decided); parse errors exit 2.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import ChainMap
from dataclasses import dataclass, field, replace
from pathlib import Path

from .engine import Program, SearchLimits
from .errors import ParseError, TraError
from .lang import Abstraction, Config, check_inclusion, evaluate, parse, parse_inclusion
from .relations import Extensional, Intensional, format_relation, materialize, relation_to_json
from .syntax import Parser, load_program
from .tables import Table, format_table, table_to_json
from .terms import Universe

PROMPT = "tra> "


@dataclass
class Session:
    programs: dict = field(default_factory=dict)
    lets: dict = field(default_factory=dict)
    config: Config = field(default_factory=Config)
    universe_depth: int = None

    @property
    def env(self) -> ChainMap:
        """User bindings shadow program names, which shadow predicates of loaded programs."""
        preds, owners = {}, {}
        for prog in self.programs.values():
            for p, n in prog.predicates.items():
                owners.setdefault(p, []).append(prog)
        for p, progs in owners.items():
            if len(progs) == 1:
                preds[p] = Intensional(progs[0], p, progs[0].predicates[p])
        return ChainMap(self.lets, dict(self.programs), preds)

    def load(self, path) -> Program:
        program, depth = load_program(path)
        if program.name in self.programs:
            raise TraError(f"a program named {program.name} is already loaded")
        self.programs[program.name] = program
        if program.universe is not None or depth is not None:
            self.merge_universe(program.universe, depth)
        return program

    def merge_universe(self, declared: Universe, depth: int = None):
        current = self.config.universe
        constants = set(current.constants) if current else set()
        functors = set(current.functors) if current else set()
        if declared is not None:
            constants |= declared.constants
            functors |= declared.functors
        bound = self.universe_depth
        if bound is None:
            bound = depth if depth is not None else (current.depth_bound if current else 2)
        if constants or functors:
            self.config = replace(self.config, universe=Universe(frozenset(constants), frozenset(functors), bound))

    def evaluate(self, src: str):
        return evaluate(parse(src), self.env, self.config)

    def render(self, value, as_json=False) -> str:
        if isinstance(value, Intensional):
            try:
                value = materialize(value, self.config.limits, self.config.universe, self.env)
            except TraError:
                return json.dumps({"relation": str(value)}) if as_json else str(value)
        if isinstance(value, Table):
            return json.dumps(table_to_json(value)) if as_json else format_table(value)
        if isinstance(value, Extensional):
            return json.dumps(relation_to_json(value)) if as_json else format_relation(value)
        if isinstance(value, Program):
            return json.dumps({"program": value.name}) if as_json else f"<program {value.name}>"
        if isinstance(value, Abstraction):
            return json.dumps({"lambda": value.param}) if as_json else repr(value)
        return str(value)


def _describe(exc: Exception) -> str:
    if isinstance(exc, ParseError):
        return f"parse error at {exc}"
    if isinstance(exc, OSError) and exc.filename is not None:
        return f"cannot read {exc.filename}: {exc.strerror}"
    return f"{type(exc).__name__}: {exc}"


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("-p", "--program", action="append", default=[], metavar="FILE",
                   help="load a program file (repeatable); it is named after the file stem")
    p.add_argument("--max-depth", type=int, default=64)
    p.add_argument("--max-answers", type=int, default=10000)
    p.add_argument("--fix-cap", type=int, default=1000)
    p.add_argument("--universe-depth", type=int, default=None)
    p.add_argument("--mu-strategy", choices=["auto", "bottom-up", "goal-directed"], default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tra", description="Table/Relation Algebra evaluator")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one expression")
    _add_common(ev)
    ev.add_argument("-e", "--expr", help="expression text")
    ev.add_argument("exprfile", nargs="?", help="file holding the expression")
    ev.add_argument("--json", action="store_true", help="print the value as JSON")

    rp = sub.add_parser("repl", help="interactive loop")
    _add_common(rp)

    ck = sub.add_parser("check", help="check an inclusion IDENT >= EXPR")
    _add_common(ck)
    ck.add_argument("-e", "--expr", required=True, help='inclusion text, e.g. "p >= (X,Z)/(q:(X,Y) /\\ q:(Y,Z))"')
    return parser


def make_session(args) -> Session:
    limits = SearchLimits(args.max_depth, args.max_answers)
    session = Session(config=Config(None, limits, args.fix_cap, args.mu_strategy),
                      universe_depth=args.universe_depth)
    for path in args.program:
        session.load(path)
    return session


def run_eval(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        session = make_session(args)
        if args.expr is not None:
            src = args.expr
        elif args.exprfile is not None:
            src = Path(args.exprfile).read_text()
        else:
            print("error: give -e EXPR or an expression file", file=err)
            return 2
        expr = parse(src)
    except ParseError as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 2
    except (OSError, TraError, ValueError) as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 1
    try:
        value = evaluate(expr, session.env, session.config)
        print(session.render(value, args.json), file=out)
    except (TraError, ValueError, RecursionError) as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 1
    return 0


def run_check(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        session = make_session(args)
        inc = parse_inclusion(args.expr)
    except ParseError as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 2
    except (OSError, TraError, ValueError) as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 1
    try:
        env = session.env
        if inc.name not in env:
            raise TraError(f"check: {inc.name} is not bound")
        rhs = evaluate(inc.rhs, env, session.config)
        holds = check_inclusion(env[inc.name], rhs, session.config)
    except (TraError, ValueError, RecursionError) as exc:
        print(f"error: {_describe(exc)}", file=err)
        return 1
    print("holds" if holds else "does not hold", file=out)
    return 0 if holds else 1


REPL_HELP = """commands:
  :load FILE          load a program file
  :let NAME = EXPR    bind the value of EXPR to NAME
  :limits [k=v ...]   show or set max_depth, max_answers, fix_cap
  :universe [c, ...]  show or set the universe constants (functors as f/1)
  :quit               leave
anything else is evaluated as an expression"""


def repl(session: Session, inp=None, out=None, prompt=PROMPT) -> int:
    inp, out = inp or sys.stdin, out or sys.stdout
    interactive = inp.isatty() if hasattr(inp, "isatty") else False
    while True:
        if interactive:
            out.write(prompt)
            out.flush()
        line = inp.readline()
        if not line:
            return 0
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        try:
            if line in (":quit", ":q"):
                return 0
            if line == ":help":
                print(REPL_HELP, file=out)
            elif line.startswith(":load"):
                path = line[len(":load"):].strip()
                if not path:
                    raise TraError(":load needs a file name")
                prog = session.load(path)
                print(f"loaded {prog.name} ({len(prog.clauses)} clauses)", file=out)
            elif line.startswith(":let"):
                name, sep, src = line[len(":let"):].partition("=")
                name = name.strip()
                if not sep or not name.isidentifier():
                    raise TraError(":let NAME = EXPR")
                session.lets[name] = session.evaluate(src)
                print(f"{name} bound", file=out)
            elif line.startswith(":limits"):
                _set_limits(session, line[len(":limits"):].split())
                lim = session.config.limits
                print(f"max_depth={lim.max_depth} max_answers={lim.max_answers} "
                      f"fix_cap={session.config.fix_cap}", file=out)
            elif line.startswith(":universe"):
                rest = line[len(":universe"):].strip()
                if rest:
                    _set_universe(session, rest)
                u = session.config.universe
                if u is None:
                    print("no universe declared", file=out)
                else:
                    names = sorted(str(c) for c in u.constants) + sorted(f"{f}/{n}" for f, n in u.functors)
                    print(f"{', '.join(names)} (depth {u.depth_bound})", file=out)
            elif line.startswith(":"):
                raise TraError(f"unknown command {line.split()[0]} (try :help)")
            else:
                print(session.render(session.evaluate(line)), file=out)
        except (TraError, OSError, ValueError, RecursionError) as exc:
            print(f"error: {_describe(exc)}", file=out)


def _set_limits(session: Session, assignments):
    lim, cap = session.config.limits, session.config.fix_cap
    values = {"max_depth": lim.max_depth, "max_answers": lim.max_answers, "fix_cap": cap}
    for a in assignments:
        key, _, val = a.partition("=")
        if key not in values:
            raise TraError(f"unknown limit {key}")
        values[key] = int(val)
    session.config = replace(session.config,
                             limits=SearchLimits(values["max_depth"], values["max_answers"]),
                             fix_cap=values["fix_cap"])


def _set_universe(session: Session, src: str):
    p = Parser(f"#universe {src}.")
    program, _ = p.program_body()
    depth = session.config.universe.depth_bound if session.config.universe else 2
    if session.universe_depth is not None:
        depth = session.universe_depth
    u = program.universe
    session.config = replace(session.config, universe=Universe(u.constants, u.functors, depth))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "eval":
        return run_eval(args)
    if args.command == "check":
        return run_check(args)
    try:
        session = make_session(args)
    except (OSError, TraError, ValueError) as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return 2 if isinstance(exc, ParseError) else 1
    return repl(session)


if __name__ == "__main__":
    sys.exit(main())
