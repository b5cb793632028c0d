"""Cross-checking a verdict by brute force.

The oracle never looks at distribution functions: it integrates truncated
powers against both measures directly.  Here it re-derives the
Chebyshev/Lobatto verdict, then throws 500 random 3-convex splines at the
pair and reports the smallest expectation gap it saw.
"""

from cxorder.catalog import quadrature
from cxorder.numeric import to_mpf
from cxorder.oracle import audit, oracle_order
from cxorder.ordering import decide_order

if __name__ == "__main__":
    C, L4, G3, L5 = (quadrature(r).measure for r in ("C", "L4", "G3", "L5"))
    for name, (mu1, mu2) in {"C vs L4": (C, L4), "G3 vs L5": (G3, L5)}.items():
        engine, oracle = decide_order(mu1, mu2, 3), oracle_order(mu1, mu2, 3)
        rep = audit(mu1, mu2, 3, count=500, seed=0)
        print(f"{name}: engine {engine.status.value}, oracle {oracle.status.value}, "
              f"smallest sampled gap {float(to_mpf(rep.min_gap)):.3e} (seed {rep.seed}, {rep.count} splines)")
        for w in engine.witnesses:
            print(f"    witness {w.describe()}")
