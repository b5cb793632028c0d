"""Comparing quadrature rules on [-1, 1] in higher-order convex orders.

Prints the verdict matrix for degrees 1, 3 and 5, then takes apart the
hardest 3-convex case, Chebyshev against four-point Lobatto: the second
rung of the H-ladder changes sign three times, so single-crossing tests do
not apply, and the decision comes from the value of the top rung at the
middle sign change.
"""

from cxorder.catalog import QUADRATURE_NAMES, comparability_matrix, quadrature
from cxorder.numeric import format_scalar
from cxorder.ordering import build_h_ladder, sign_changes

CELL = {"holds": "<=", "holds-reversed": ">=", "incomparable": "||", "indeterminate": "??"}


def print_matrix(n):
    m = comparability_matrix(QUADRATURE_NAMES, n)
    print(f"degree {n}")
    print("     " + "".join(f"{c:>5}" for c in QUADRATURE_NAMES))
    for r in QUADRATURE_NAMES:
        cells = ("==" if r == c else CELL[m[(r, c)].status.value] for c in QUADRATURE_NAMES)
        print(f"{r:>5}" + "".join(f"{x:>5}" for x in cells))
    print()


if __name__ == "__main__":
    for n in (1, 3, 5):
        print_matrix(n)

    C, L4 = quadrature("C").measure, quadrature("L4").measure
    ladder = build_h_ladder(C, L4, 3)
    rep = sign_changes(ladder[2])
    print("Chebyshev vs four-point Lobatto, degree 3")
    print(f"  sign changes of H2: {rep.count} at {', '.join(format_scalar(x) for x in rep.points)}")
    print(f"  H3 at the middle one: {format_scalar(ladder[3](rep.points[1]))}")
