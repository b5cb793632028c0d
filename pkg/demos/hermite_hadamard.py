"""Hermite-Hadamard type inequalities as convex-order questions.

Each inequality ``L(f) <= R(f)`` for all convex ``f`` on ``[0, 1]`` is a
statement about two measures.  The script asks the engine, prints the
criterion that settled it, and compares with the closed-form condition
where the catalog has one.
"""

from fractions import Fraction as F

from cxorder.catalog import UNIT, FamilySpec, eval_conditions, make_family, uniform01
from cxorder.measure import SignedMeasure
from cxorder.ordering import decide_order


def show(label, v):
    print(f"{label:<48} {v.status.value:<15} ({v.criterion})")


def family(label, name, params, relation=""):
    spec = FamilySpec(name, params, relation)
    lhs, rhs, n = make_family(spec)
    v = decide_order(lhs, rhs, n)
    show(label, v)
    print(f"{'':<48} closed form: {eval_conditions(spec).status}")


if __name__ == "__main__":
    print("classic chain")
    mid = SignedMeasure.dirac(UNIT, F(1, 2))
    ends = SignedMeasure.build(UNIT, [(F(0), F(1, 2)), (F(1), F(1, 2))])
    show("  f(1/2) <= mean of f", decide_order(mid, uniform01(), 1))
    show("  mean of f <= (f(0) + f(1))/2", decide_order(uniform01(), ends, 1))

    print("\nthree-node symmetric rule against the mean, alpha = 3/4")
    for a in (F(1, 2), F(1, 2) + F(1, 1000)):
        family(f"  a = {a}", "SzostokLeft2", {"a": a, "alpha": F(3, 4)}, "symmetric-vs-mean")

    print("\nT_a against the midpoint")
    for a in (2, 4, 6):
        family(f"  midpoint <= T_a, a = {a}", "TaOperator", {"a": a}, "midpoint-vs")

    print("\nthe double-integral mean between the mean and the trapezoid")
    for lam in (F(3, 4), F(3, 4) + F(1, 100)):
        family(f"  lambda = {lam}", "TaOperator", {"lam": lam}, "mean-vs-triangular-trapezoid")
