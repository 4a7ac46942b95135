"""Quicksort as a TRA fixpoint, with the order supplied through lam and nu.

    python3 scripts/qsort_demo.py 3 1 2 2
"""
import argparse
import time
from pathlib import Path

from tra.lang import Config, evaluate, parse
from tra.syntax import load_program
from tra.tables import format_table

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

QSORT = (
    "(mu qsort . qsort >= ([],U-U)/top"
    " \\/ ([X|Xs],U-W)/((?- partition(X,Xs,Y1,Y2) where (lam order.P)(nu {order}.Orderings))"
    " /\\ qsort:(Y1,U-[X|V]) /\\ qsort:(Y2,V-W)))"
    " : ([{items}], S-[])"
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("items", nargs="*", type=int, default=[2, 1, 3],
                    help="integers from 1 to 3 (the range the Orderings facts cover)")
    ap.add_argument("--strategy", choices=["auto", "bottom-up", "goal-directed"], default="goal-directed")
    args = ap.parse_args()

    p, _ = load_program(PROGRAMS / "P.tra")
    o, _ = load_program(PROGRAMS / "Orderings.tra")
    env = {"P": p, "Orderings": o}
    items = ",".join(map(str, args.items))
    for order in ("leq", "geq"):
        src = QSORT.format(order=order, items=items)
        start = time.perf_counter()
        value = evaluate(parse(src), env, Config(mu_strategy=args.strategy))
        elapsed = time.perf_counter() - start
        print(f"order = {order}  ({elapsed * 1000:.1f} ms)")
        print(format_table(value))


if __name__ == "__main__":
    main()
