"""Seeded random rational measure pairs with matching moments ``0..n``.

Three kinds, chosen by seed:

* spread: ``mu2 = mu1 + c * D`` where ``D`` is the order-``n+1`` divided
  difference on ``n+2`` nodes, so ``mu1 <= mu2`` holds by construction;
* two spreads: ``mu2 = mu1 + c1 * D1 - c2 * D2``, which can go either way;
* free: a random ``mu2`` whose atoms on ``n+1`` nodes are solved from a
  Vandermonde system to match the moments of ``mu1``.

Each measure has at most five atoms and two linear segments.
"""

import random
from fractions import Fraction

from cxorder.measure import SignedMeasure
from cxorder.numeric import Polynomial

UNIT = (Fraction(0), Fraction(1))


def _rat(rng, den=24):
    return Fraction(rng.randint(0, den), den)


def _nodes(rng, k):
    return sorted(rng.sample([Fraction(i, 12) for i in range(13)], k))


def divided_difference(xs):
    """Weights of ``f[x_0, ..., x_m]``; they annihilate polynomials of degree < m."""
    out = []
    for i, x in enumerate(xs):
        den = Fraction(1)
        for j, y in enumerate(xs):
            if j != i:
                den *= x - y
        out.append((x, 1 / den))
    return out


def _segment(rng):
    lo = Fraction(rng.randint(0, 5), 6)
    hi = lo + Fraction(rng.randint(1, 6), 6) * (1 - lo)
    # nonnegative linear density: values at both ends in [0, 2]
    v0, v1 = _rat(rng, 4) * 2, _rat(rng, 4) * 2
    slope = (v1 - v0) / (hi - lo)
    return (lo, hi, Polynomial([v0 - slope * lo, slope]))


def _solve(matrix, rhs):
    n = len(rhs)
    m = [list(row) + [r] for row, r in zip(matrix, rhs)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _base(rng, max_atoms):
    k = rng.randint(0, max_atoms)
    atoms = [(x, Fraction(rng.randint(1, 6), 6)) for x in _nodes(rng, k)] if k else []
    segs = [_segment(rng) for _ in range(rng.randint(0 if atoms else 1, 1))]
    return atoms, segs


def random_pair(seed, n):
    rng = random.Random(seed)
    kind = seed % 3
    if kind in (0, 1):
        pool = _nodes(rng, 5)
        atoms, segs = _base(rng, 5)
        atoms = [(pool[i % 5], w) for i, (_, w) in enumerate(atoms)]
        mu1 = SignedMeasure.build(UNIT, atoms, segs)
        c1 = Fraction(rng.randint(1, 12), 12)
        extra = [(x, c1 * w) for x, w in divided_difference(sorted(rng.sample(pool, n + 2)))]
        scale = Fraction(1, 10**4)
        if kind == 1:
            other = divided_difference(sorted(rng.sample(pool, n + 2)))
            c2 = Fraction(rng.randint(1, 12), 12)
            extra += [(x, -c2 * w) for x, w in other]
        extra = [(x, scale * w) for x, w in extra]
        mu2 = SignedMeasure.build(UNIT, atoms + extra, segs)
        return mu1, mu2, ("spread" if kind == 0 else "two-spreads")
    atoms, segs = _base(rng, 4)
    mu1 = SignedMeasure.build(UNIT, atoms, segs)
    segs2 = [_segment(rng) for _ in range(rng.randint(1, 2))]
    partial = SignedMeasure.build(UNIT, [], segs2)
    nodes = _nodes(rng, n + 1)
    rhs = [mu1.moment(k) - partial.moment(k) for k in range(n + 1)]
    w = _solve([[x**k for x in nodes] for k in range(n + 1)], rhs)
    mu2 = SignedMeasure.build(UNIT, list(zip(nodes, w)), segs2)
    return mu1, mu2, "free"
