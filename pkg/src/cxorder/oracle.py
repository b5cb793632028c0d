"""Brute-force audit of ordering verdicts by integrating test functions.

Nothing here goes through distribution functions or the H-ladder.  The
oracle integrates truncated powers ``(x - t)_+^n`` directly against the
atoms and densities of each measure, so agreement with
:func:`cxorder.ordering.decide_order` is a genuine cross-check.

On every interval between consecutive knots the kernel gap is a single
polynomial in the shift ``t``: the binomial expansion of ``(x - t)^n``
summed over the atoms and segments to the right.  The oracle decides its
sign on each interval, which catches dips that fall between grid points.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .measure import Interval, SignedMeasure
from .numeric import (
    Polynomial,
    Sign,
    nonnegative_on,
    sign,
    to_mpf,
)
from .ordering import OrderVerdict, Status, Witness, _check_degree, _same_interval, _tol

__all__ = [
    "AuditReport",
    "ConeCombination",
    "Kernel",
    "Monomial",
    "TestFunction",
    "audit",
    "integrate",
    "oracle_order",
    "sample_convex",
]


@dataclass(frozen=True)
class Monomial:
    """``x^power``."""

    power: int

    def __call__(self, x):
        return x**self.power


@dataclass(frozen=True)
class Kernel:
    """Truncated power ``(x - shift)_+^degree``."""

    degree: int
    shift: object

    def __call__(self, x):
        d = x - self.shift
        if isinstance(d, (int, Fraction)):
            return d**self.degree if d > 0 else 0
        return d**self.degree if sign(d, 0.0) is Sign.POSITIVE else 0 * d


@dataclass(frozen=True)
class ConeCombination:
    """``sum c_i (x - t_i)_+^n + p(x)`` with ``c_i >= 0`` and ``deg p <= n``.

    Nonnegative coefficients keep the function n-convex.
    """

    degree: int
    shifts: tuple
    coefficients: tuple
    polynomial: Polynomial = field(default_factory=Polynomial)

    def __post_init__(self):
        if len(self.shifts) != len(self.coefficients):
            raise ValueError("shifts and coefficients must have the same length")
        if any(sign(c, 0.0) is Sign.NEGATIVE for c in self.coefficients):
            raise ValueError("cone coefficients must be nonnegative")
        if self.polynomial.degree > self.degree:
            raise ValueError("the polynomial part may not exceed the degree")

    def terms(self):
        return [(c, Kernel(self.degree, t)) for c, t in zip(self.coefficients, self.shifts)]

    def __call__(self, x):
        return sum((c * k(x) for c, k in self.terms()), self.polynomial(x))


TestFunction = Monomial | Kernel | ConeCombination


def integrate(f: TestFunction, mu: SignedMeasure):
    """``integral f dmu`` in closed form (exact when both inputs are)."""
    if isinstance(f, ConeCombination):
        total = _integrate_polynomial(f.polynomial, mu)
        for c, k in f.terms():
            total = total + c * integrate(k, mu)
        return total
    total = 0
    for at in mu.atoms:
        total = total + at.weight * f(at.at)
    if isinstance(f, Monomial):
        for s in mu.segments:
            total = total + _power_integral(s.density.coeffs, [(f.power, 1)], s.lo, s.hi)
        return total
    n, t = f.degree, f.shift
    # (x - t)^n = sum_j C(n, j) (-t)^(n-j) x^j
    expansion = [(j, math.comb(n, j) * (-t) ** (n - j)) for j in range(n + 1)]
    for s in mu.segments:
        if sign(s.hi - t, 0.0) is not Sign.POSITIVE:
            continue
        lo = t if sign(t - s.lo, 0.0) is Sign.POSITIVE else s.lo
        total = total + _power_integral(s.density.coeffs, expansion, lo, s.hi)
    return total


def _power_integral(coeffs, expansion, lo, hi):
    """``integral_lo^hi (sum_k coeffs[k] x^k)(sum_j c_j x^j) dx``."""
    top = len(coeffs) + max(j for j, _ in expansion)
    pl, ph = [1], [1]
    for _ in range(top):
        pl.append(pl[-1] * lo)
        ph.append(ph[-1] * hi)
    total = 0
    for k, a in enumerate(coeffs):
        for j, c in expansion:
            m = k + j + 1
            total = total + a * c * (ph[m] - pl[m]) / m
    return total


def _integrate_polynomial(p: Polynomial, mu: SignedMeasure):
    total = 0
    for k, c in enumerate(p.coeffs):
        total = total + c * integrate(Monomial(k), mu)
    return total


def _gap(f: TestFunction, mu1: SignedMeasure, mu2: SignedMeasure):
    return integrate(f, mu2) - integrate(f, mu1)


def _knots(mu1: SignedMeasure, mu2: SignedMeasure) -> list:
    pts = [mu1.interval.a, mu1.interval.b]
    for mu in (mu1, mu2):
        pts += [at.at for at in mu.atoms]
        for s in mu.segments:
            pts += [s.lo, s.hi]
    pts.sort(key=lambda x: to_mpf(x, 256))
    out = [pts[0]]
    for x in pts[1:]:
        if sign(x - out[-1], 0.0) is Sign.POSITIVE:
            out.append(x)
    return out


def _kernel_polynomial(mu: SignedMeasure, n: int, hi) -> Polynomial:
    """``integral (x - t)_+^n dmu(x)`` as a polynomial in ``t``, valid for ``t`` just left of ``hi``.

    ``hi`` must be a knot of ``mu`` and the previous knot must be one too.
    Atoms and whole segments at or right of ``hi`` are seen whole by the
    kernel; a segment straddling the interval is seen from ``t`` onwards.
    """
    T = Polynomial([Fraction(0), Fraction(1)])
    total = Polynomial()
    for at in mu.atoms:
        if sign(at.at - hi, 0.0) is not Sign.NEGATIVE:
            total = total + Polynomial([at.at, Fraction(-1)]) ** n * at.weight
    for seg in mu.segments:
        if sign(seg.hi - hi, 0.0) is Sign.NEGATIVE:
            continue
        right_of = sign(seg.lo - hi, 0.0) is not Sign.NEGATIVE
        # (x - t)^n = sum_j C(n, j) x^j (-t)^(n-j); integrate x^j rho(x) from max(lo, t) to the segment end
        for j in range(n + 1):
            prim = (seg.density * T**j).antiderivative()
            lower = Polynomial([prim(seg.lo)]) if right_of else prim
            total = total + (T * -1) ** (n - j) * math.comb(n, j) * (Polynomial([prim(seg.hi)]) - lower)
    return total


def _gap_pieces(mu1, mu2, n: int):
    """``(lo, hi, polynomial in t)`` for the kernel gap between consecutive knots."""
    knots = _knots(mu1, mu2)
    for lo, hi in zip(knots, knots[1:]):
        yield lo, hi, _kernel_polynomial(mu2, n, hi) - _kernel_polynomial(mu1, n, hi)


def _grid(interval: Interval, density: int) -> list:
    a, b = interval.a, interval.b
    count = max(2, math.ceil(density * float(to_mpf(b - a))) + 1)
    return [a + (b - a) * Fraction(j, count - 1) for j in range(count)]


def oracle_order(
    mu1: SignedMeasure,
    mu2: SignedMeasure,
    n: int = 1,
    grid_density: int = 16,
    tol: float | None = None,
) -> OrderVerdict:
    """Decide ``mu1`` versus ``mu2`` on n-convex functions by direct integration.

    Moments ``0..n`` are compared first (monomial witnesses on a mismatch).
    Kernel gaps are then sampled on a uniform grid with ``grid_density``
    points per unit length plus every knot; the minimum and maximum sampled
    gaps (in floating point) are reported under ``checked``.  The verdict itself comes from the
    sign of the exact gap polynomial on each knot interval.
    """
    n = _check_degree(n)
    if grid_density < 1:
        raise ValueError("grid_density must be at least 1")
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    for k in range(n + 1):
        g = _gap(Monomial(k), mu1, mu2)
        s = sign(g, tol)
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            w = (Witness("monomial", k, g, coefficient=1), Witness("monomial", k, -g, coefficient=-1))
            return OrderVerdict(Status.INCOMPARABLE, "oracle-moments", n, k, witnesses=w, first_bad_moment=k)

    # the grid only feeds the report, so it runs on lowered copies
    low1, low2 = mu1.lowered(), mu2.lowered()
    samples = {}
    for t in _grid(mu1.interval, grid_density) + _knots(mu1, mu2):
        t = to_mpf(t)
        samples.setdefault(float(t), (t, _gap(Kernel(n, t), low1, low2)))
    lo_t, lo_g = min(samples.values(), key=lambda p: to_mpf(p[1]))
    hi_t, hi_g = max(samples.values(), key=lambda p: to_mpf(p[1]))
    checked = (("min-gap", lo_t, lo_g), ("max-gap", hi_t, hi_g))

    neg_at = pos_at = None
    unsure = False
    for lo, hi, p in _gap_pieces(mu1, mu2, n):
        for poly, slot in ((p, "neg"), (-p, "pos")):
            if (slot == "neg" and neg_at is not None) or (slot == "pos" and pos_at is not None):
                continue
            res = nonnegative_on(poly, lo, hi, tol)
            if res.no:
                if slot == "neg":
                    neg_at = res.witness
                else:
                    pos_at = res.witness
            elif res.status == "indeterminate":
                unsure = True
    common = dict(degree=n, moments_checked=n, checked=checked)
    if neg_at is None and pos_at is None:
        if unsure:
            return OrderVerdict(Status.INDETERMINATE, "oracle", note="gap within tolerance of zero", **common)
        return OrderVerdict(Status.HOLDS, "oracle", note="measures agree on the test class" if _all_zero(lo_g, hi_g) else "", **common)
    if neg_at is not None and pos_at is not None:
        w = (_witness(mu1, mu2, n, neg_at), _witness(mu1, mu2, n, pos_at))
        return OrderVerdict(Status.INCOMPARABLE, "oracle", witnesses=w, **common)
    if unsure:
        return OrderVerdict(Status.INDETERMINATE, "oracle", note="gap within tolerance of zero", **common)
    if neg_at is None:
        return OrderVerdict(Status.HOLDS, "oracle", **common)
    return OrderVerdict(Status.HOLDS_REVERSED, "oracle", **common)


def _all_zero(*values) -> bool:
    return all(sign(v, 0.0) is Sign.ZERO for v in values)


def _witness(mu1, mu2, n: int, t) -> Witness:
    return Witness("kernel", n, _gap(Kernel(n, t), mu1, mu2), shift=t)


def sample_convex(
    n: int,
    richness: int,
    seed: int,
    interval: Interval = Interval(Fraction(0), Fraction(1)),
    polynomial: bool = False,
) -> ConeCombination:
    """A reproducible n-convex spline with ``richness`` cone terms.

    Shifts are uniform on ``interval`` and coefficients uniform on
    ``(0, 1]``, both as rationals with denominator 1000.  ``polynomial``
    adds a random polynomial part of degree at most ``n``.
    """
    _check_degree(n)
    if richness < 1:
        raise ValueError("richness must be at least 1")
    rng = random.Random(seed)
    a, b = interval.a, interval.b
    shifts = tuple(a + (b - a) * Fraction(rng.randint(0, 1000), 1000) for _ in range(richness))
    coeffs = tuple(Fraction(rng.randint(1, 1000), 1000) for _ in range(richness))
    poly = Polynomial([Fraction(rng.randint(-1000, 1000), 1000) for _ in range(n + 1)]) if polynomial else Polynomial()
    return ConeCombination(n, shifts, coeffs, poly)


@dataclass(frozen=True)
class AuditReport:
    seed: int
    count: int
    min_gap: object
    worst: ConeCombination | None


def audit(mu1: SignedMeasure, mu2: SignedMeasure, n: int, count: int = 500, seed: int = 0, richness: int = 5) -> AuditReport:
    """Smallest ``integral f d(mu2 - mu1)`` over ``count`` sampled n-convex ``f``.

    Sample ``i`` uses seed ``seed + i``.  A clearly negative minimum refutes
    ``mu1 <= mu2``.
    """
    worst, low = None, None
    for i in range(count):
        f = sample_convex(n, richness, seed + i, mu1.interval, polynomial=True)
        g = _gap(f, mu1, mu2)
        if low is None or to_mpf(g) < to_mpf(low):
            worst, low = f, g
    return AuditReport(seed, count, low, worst)
