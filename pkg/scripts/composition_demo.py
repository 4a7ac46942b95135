"""Relational composition three ways: cylinders, TRA operators, and a clause.

    python3 scripts/composition_demo.py
"""
from tra.engine import least_model
from tra.relations import apply, format_relation, project, relation
from tra.syntax import parse_program
from tra.tables import format_table, intersect, to_cylinder
from tra.terms import Universe, Var, format_tuple

X, Y, Z = Var("X"), Var("Y"), Var("Z")


def main():
    r = relation([("a", "b"), ("b", "c"), ("c", "a")])
    universe = Universe.of("a", "b", "c")

    left, right = apply(r, (X, Y)), apply(r, (Y, Z))
    print("r : (X,Y)")
    print(format_table(left))
    for label, t in (("selector {X,Y}", left), ("selector {Y,Z}", right)):
        cyl = to_cylinder(t, universe, (X, Y, Z))
        print(f"\ncylinder on {label}: {len(cyl.tuples)} triples")
        print(" ".join(format_tuple(t) for t in sorted(cyl.tuples, key=str)))

    meet = intersect(left, right)
    print("\nr:(X,Y) /\\ r:(Y,Z)")
    print(format_table(meet))
    print("\n(X,Z) / that table =", format_relation(project((X, Z), meet)))

    prog = parse_program("q(a,b). q(b,c). q(c,a). p(X,Z) :- q(X,Y), q(Y,Z).")
    print("least model of p(X,Z) :- q(X,Y), q(Y,Z):", format_relation(least_model(prog)["p"]))


if __name__ == "__main__":
    main()
