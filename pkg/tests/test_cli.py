import io
import subprocess
import sys
from dataclasses import dataclass

import pytest

from tra.cli import Session, main, repl

from generators import PROGRAMS

GOLDEN = PROGRAMS.parent / "tests" / "golden"
COMPOSITION = str(PROGRAMS / "composition.tra")
CHAIN = str(PROGRAMS / "chain.tra")
COMPOSE = "(X,Z)/(q:(X,Y) /\\ q:(Y,Z))"


@dataclass(frozen=True)
class Case:
    name: str
    argv: tuple
    code: int
    stdout: str = None  # golden file name
    stderr: str = None


CASES = [
    Case("table", ("eval", "-p", COMPOSITION, "-e", "q:(X,Y)"), 0, "q_table.txt"),
    Case("where-table", ("eval", "-p", COMPOSITION, "-e", "(?- q(X,Y) where composition)"), 0, "q_table.txt"),
    Case("table-json", ("eval", "-p", COMPOSITION, "-e", "q:(X,Y)", "--json"), 0, "q_table.json"),
    Case("relation", ("eval", "-p", COMPOSITION, "-e", COMPOSE), 0, "composition.txt"),
    Case("relation-json", ("eval", "-p", COMPOSITION, "-e", COMPOSE, "--json"), 0, "composition.json"),
    Case("where", ("eval", "-p", CHAIN, "-e", "(?- q(X,Y), q(Y,Z) where chain)"), 0, "q_chain.txt"),
    Case("bot", ("eval", "-e", "bot"), 0, "bot.txt"),
    Case("top", ("eval", "-e", "top"), 0, "top.txt"),
    Case("eval-parse-error", ("eval", "-e", "q : (X"), 2, None, "parse_error.txt"),
    Case("eval-unbound", ("eval", "-e", "nowhere : (X)"), 1),
    Case("eval-type-error", ("eval", "-e", "top : (X)"), 1),
    Case("eval-missing-program", ("eval", "-p", str(PROGRAMS / "missing.tra"), "-e", "top"), 1),
    Case("check-holds", ("check", "-p", COMPOSITION, "-e", "p >= " + COMPOSE), 0),
    Case("check-fails", ("check", "-p", COMPOSITION, "-e", "q >= " + COMPOSE), 1),
    Case("check-bot", ("check", "-p", COMPOSITION, "-e", "q >= (X,Y)/bot"), 0),
    Case("check-parse-error", ("check", "-p", COMPOSITION, "-e", "p >= (X,Z"), 2),
]


def golden(name: str) -> str:
    return (GOLDEN / name).read_text()


def run_case(case: Case, capsys) -> None:
    code = main(list(case.argv))
    out, err = capsys.readouterr()
    assert code == case.code, (case.name, out, err)
    if case.stdout:
        assert out == golden(case.stdout), case.name
    if case.stderr:
        assert err == golden(case.stderr), case.name


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_cli_case(case, capsys):
    run_case(case, capsys)


def run_repl_session() -> tuple:
    script = golden("repl_session.in").replace("{programs}", str(PROGRAMS))
    out = io.StringIO()
    code = repl(Session(), io.StringIO(script), out)
    return code, out.getvalue().replace(str(PROGRAMS), "{programs}")


def test_repl_session():
    code, out = run_repl_session()
    assert code == 0
    assert out == golden("repl_session.out")


def test_repl_let_then_compose():
    out = io.StringIO()
    script = ":let r = {(a,b),(b,c),(c,a)}\n(X,Z)/(r:(X,Y) /\\ r:(Y,Z))\n:quit\n"
    assert repl(Session(), io.StringIO(script), out) == 0
    assert out.getvalue() == "r bound\n{(a,c),(b,a),(c,b)}\n"


def test_repl_exit_code_through_main(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO("top\n:quit\n"))
    assert main(["repl"]) == 0
    assert capsys.readouterr().out == "<unit>\n"


def test_expression_file(tmp_path, capsys):
    f = tmp_path / "expr.tra"
    f.write_text(COMPOSE + "\n")
    assert main(["eval", "-p", COMPOSITION, str(f)]) == 0
    assert capsys.readouterr().out == golden("composition.txt")


def test_limit_flags_reach_the_engine(capsys):
    left = str(PROGRAMS / "chain.tra")
    code = main(["eval", "-p", left, "--max-answers", "2", "-e", "q:(X,Y)"])
    assert code == 1
    assert "ResourceExceeded" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tra.cli", "eval", "-p", COMPOSITION, "-e", COMPOSE],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == golden("composition.txt")
