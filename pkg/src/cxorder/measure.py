"""Finite signed measures on a compact interval and piecewise polynomials.

A :class:`SignedMeasure` is a finite list of weighted atoms plus polynomial
densities on subintervals.  Its distribution function, moments and
truncated-power transforms ``x -> integral (t - x)_+^n dmu(t)`` are all
computed in closed form as :class:`PiecewiseFunction` objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Iterable, Sequence

from .numeric import (
    DEFAULT_TOL,
    Polynomial,
    Sign,
    format_scalar,
    is_exact,
    parse_scalar,
    sign,
    to_mpf,
)


class MeasureError(ValueError):
    """Invalid measure data (bad interval, atom outside it, unparsable file)."""


def _lt(x, y) -> bool:
    return sign(y - x, 0.0) is Sign.POSITIVE


def _same(x, y, tol: float) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(to_mpf(x) - to_mpf(y)) <= tol


@dataclass(frozen=True)
class Interval:
    a: object
    b: object

    def __post_init__(self):
        if not _lt(self.a, self.b):
            raise MeasureError(f"interval needs a < b, got [{self.a}, {self.b}]")

    @property
    def length(self):
        return self.b - self.a

    def contains(self, x) -> bool:
        return not _lt(x, self.a) and not _lt(self.b, x)

    def __str__(self):
        return f"[{format_scalar(self.a)}, {format_scalar(self.b)}]"


@dataclass(frozen=True)
class Atom:
    at: object
    weight: object


@dataclass(frozen=True)
class Segment:
    lo: object
    hi: object
    density: Polynomial

    def mass(self):
        return self.density.integrate(self.lo, self.hi)


def _sorted_unique(points: Iterable, tol: float) -> list:
    points = list(points)
    exact_pts = all(is_exact(p) for p in points)
    out: list = []
    for p in sorted(points, key=_ExactKey if exact_pts else to_mpf):
        if out and _same(out[-1], p, tol):
            continue
        out.append(p)
    return out


class _ExactKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return _lt(self.v, other.v)


# ---------------------------------------------------------------------------
# Piecewise polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseFunction:
    """Right-continuous piecewise polynomial on ``[knots[0], knots[-1]]``.

    ``pieces[i]`` is the formula on ``[knots[i], knots[i+1])``; the value at
    the right end of the interval is stored separately in ``end_value``
    (a distribution function includes an atom sitting at the right end).
    """

    knots: tuple
    pieces: tuple
    end_value: object = None

    def __post_init__(self):
        if len(self.pieces) != len(self.knots) - 1:
            raise ValueError("need exactly one piece per knot gap")
        if self.end_value is None:
            object.__setattr__(self, "end_value", self.pieces[-1](self.knots[-1]))

    @property
    def a(self):
        return self.knots[0]

    @property
    def b(self):
        return self.knots[-1]

    def piece_index(self, x) -> int:
        """Index of the piece whose half-open interval holds ``x``."""
        lo, hi = 0, len(self.pieces) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if _lt(x, self.knots[mid]):
                hi = mid - 1
            else:
                lo = mid
        return lo

    def __call__(self, x):
        if _lt(x, self.a) or _lt(self.b, x):
            raise ValueError(f"{x} outside [{self.a}, {self.b}]")
        if not _lt(x, self.b):
            return self.end_value
        return self.pieces[self.piece_index(x)](x)

    def left_limit(self, x):
        if not _lt(self.a, x):
            raise ValueError("no left limit at the left end")
        i = self.piece_index(x)
        if i > 0 and not _lt(self.knots[i], x):
            i -= 1
        return self.pieces[i](x)

    def segments(self):
        """Yield ``(lo, hi, polynomial)`` triples."""
        for i, p in enumerate(self.pieces):
            yield self.knots[i], self.knots[i + 1], p

    def refine(self, knots: Sequence) -> "PiecewiseFunction":
        new_knots = _sorted_unique(list(self.knots) + list(knots), 0.0)
        pieces = []
        for i in range(len(new_knots) - 1):
            probe = new_knots[i]
            pieces.append(self.pieces[self.piece_index(probe)])
        return PiecewiseFunction(tuple(new_knots), tuple(pieces), self.end_value)

    def _binary(self, other: "PiecewiseFunction", op) -> "PiecewiseFunction":
        f = self.refine(other.knots)
        g = other.refine(self.knots)
        return PiecewiseFunction(
            f.knots,
            tuple(op(p, q) for p, q in zip(f.pieces, g.pieces)),
            op(f.end_value, g.end_value),
        )

    def __add__(self, other):
        return self._binary(other, lambda p, q: p + q)

    def __sub__(self, other):
        return self._binary(other, lambda p, q: p - q)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c) -> "PiecewiseFunction":
        return PiecewiseFunction(self.knots, tuple(p * c for p in self.pieces), self.end_value * c)

    def derivative(self) -> "PiecewiseFunction":
        return PiecewiseFunction(self.knots, tuple(p.derivative() for p in self.pieces))

    def integral_from_left(self) -> "PiecewiseFunction":
        """The continuous function ``x -> integral_a^x self``."""
        pieces = []
        acc = Fraction(0)
        for lo, hi, p in self.segments():
            prim = p.antiderivative()
            pieces.append(prim - prim(lo) + acc)
            acc = acc + prim(hi) - prim(lo)
        return PiecewiseFunction(self.knots, tuple(pieces), acc)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.pieces) and sign(self.end_value, 0.0) is Sign.ZERO

    def jumps(self) -> list[tuple[object, object]]:
        """``(knot, right value - left limit)`` for each interior discontinuity."""
        out = []
        for i in range(1, len(self.knots)):
            x = self.knots[i]
            right = self.pieces[i](x) if i < len(self.pieces) else self.end_value
            left = self.pieces[i - 1](x)
            d = right - left
            if sign(d, 0.0) is not Sign.ZERO:
                out.append((x, d))
        return out

    def lowered(self, prec: int | None = None) -> "PiecewiseFunction":
        return PiecewiseFunction(
            tuple(to_mpf(k, prec) for k in self.knots),
            tuple(p.lowered(prec) for p in self.pieces),
            to_mpf(self.end_value, prec),
        )


# ---------------------------------------------------------------------------
# Signed measures
# ---------------------------------------------------------------------------


def _zero_like(x):
    return Fraction(0) if is_exact(x) else to_mpf(0)


@dataclass(frozen=True)
class SignedMeasure:
    """Weighted atoms plus polynomial densities on ``interval``.

    Use :meth:`build` rather than the constructor: it sorts, merges atoms
    that share a location, and splits overlapping segments so that the
    stored segments are disjoint.
    """

    interval: Interval
    atoms: tuple = ()
    segments: tuple = ()
    tol: float = field(default=DEFAULT_TOL, compare=False)

    @classmethod
    def build(
        cls,
        interval: Interval | tuple,
        atoms: Iterable[tuple] = (),
        segments: Iterable[tuple] = (),
        tol: float = DEFAULT_TOL,
    ) -> "SignedMeasure":
        if not isinstance(interval, Interval):
            interval = Interval(*interval)
        merged: list[list] = []
        for at, w in atoms:
            if not interval.contains(at):
                raise MeasureError(f"atom at {format_scalar(at)} outside {interval}")
            for slot in merged:
                if _same(slot[0], at, tol):
                    slot[1] = slot[1] + w
                    break
            else:
                merged.append([at, w])
        atom_list = [
            Atom(at, w)
            for at, w in merged
            if sign(w, 0.0) is not Sign.ZERO and not (not is_exact(w) and abs(to_mpf(w)) <= tol)
        ]
        atom_list.sort(key=lambda a: _ExactKey(a.at) if is_exact(a.at) else to_mpf(a.at))
        segs = []
        for lo, hi, dens in segments:
            if not isinstance(dens, Polynomial):
                dens = Polynomial(dens)
            if not _lt(lo, hi):
                raise MeasureError("segment needs from < to")
            if not (interval.contains(lo) and interval.contains(hi)):
                raise MeasureError(f"segment [{lo}, {hi}] outside {interval}")
            segs.append(Segment(lo, hi, dens))
        return cls(interval, tuple(atom_list), tuple(_disjoint_segments(segs, tol)), tol)

    @classmethod
    def dirac(cls, interval, at, weight=Fraction(1)) -> "SignedMeasure":
        return cls.build(interval, [(at, weight)])

    @classmethod
    def uniform(cls, interval, lo=None, hi=None, mass=Fraction(1)) -> "SignedMeasure":
        if not isinstance(interval, Interval):
            interval = Interval(*interval)
        lo = interval.a if lo is None else lo
        hi = interval.b if hi is None else hi
        return cls.build(interval, segments=[(lo, hi, Polynomial([mass / (hi - lo)]))])

    @classmethod
    def zero(cls, interval) -> "SignedMeasure":
        return cls.build(interval)

    # -- basic quantities --------------------------------------------------
    def is_exact(self) -> bool:
        vals = [self.interval.a, self.interval.b]
        for at in self.atoms:
            vals += [at.at, at.weight]
        for s in self.segments:
            vals += [s.lo, s.hi, *s.density.coeffs]
        return all(is_exact(v) for v in vals)

    def total_mass(self):
        total = _zero_like(self.interval.a)
        for at in self.atoms:
            total = total + at.weight
        for s in self.segments:
            total = total + s.mass()
        return total

    def moment(self, k: int):
        """``integral x^k dmu`` in closed form."""
        if k < 0:
            raise ValueError("moment order must be non-negative")
        total = _zero_like(self.interval.a)
        for at in self.atoms:
            total = total + at.weight * at.at**k
        mono = Polynomial([0] * k + [1])
        for s in self.segments:
            total = total + (s.density * mono).integrate(s.lo, s.hi)
        return total

    def moments(self, n: int) -> list:
        return [self.moment(k) for k in range(n + 1)]

    def knots(self) -> list:
        pts = [self.interval.a, self.interval.b]
        pts += [at.at for at in self.atoms]
        for s in self.segments:
            pts += [s.lo, s.hi]
        return _sorted_unique(pts, self.tol)

    def is_nonnegative(self) -> bool:
        from .numeric import nonnegative_on

        if any(sign(at.weight, self.tol) is Sign.NEGATIVE for at in self.atoms):
            return False
        return all(nonnegative_on(s.density, s.lo, s.hi, self.tol).yes for s in self.segments)

    def integrate_polynomial(self, p: Polynomial):
        total = _zero_like(self.interval.a)
        for at in self.atoms:
            total = total + at.weight * p(at.at)
        for s in self.segments:
            total = total + (s.density * p).integrate(s.lo, s.hi)
        return total

    # -- transforms ----------------------------------------------------------
    def cdf(self) -> PiecewiseFunction:
        """Right-continuous ``F(x) = mu([a, x])``."""
        knots = self.knots()
        pieces = []
        for i in range(len(knots) - 1):
            lo, hi = knots[i], knots[i + 1]
            const = _zero_like(lo)
            for at in self.atoms:
                if not _lt(lo, at.at):
                    const = const + at.weight
            poly = Polynomial()
            for s in self.segments:
                if not _lt(lo, s.hi):
                    const = const + s.mass()
                elif not _lt(lo, s.lo) and not _lt(s.hi, hi):
                    prim = s.density.antiderivative()
                    poly = poly + prim - prim(s.lo)
            pieces.append(poly + const)
        return PiecewiseFunction(tuple(knots), tuple(pieces), self.total_mass())

    def kernel_transform(self, n: int) -> PiecewiseFunction:
        """``x -> integral (t - x)_+^n dmu(t)`` as a piecewise polynomial in x."""
        if n < 0:
            raise ValueError("kernel degree must be non-negative")
        knots = self.knots()
        pieces = []
        for i in range(len(knots) - 1):
            lo, hi = knots[i], knots[i + 1]
            poly = Polynomial()
            for at in self.atoms:
                if not _lt(at.at, hi):
                    poly = poly + Polynomial([at.at, -1]) ** n * at.weight
            for s in self.segments:
                if not _lt(s.lo, hi):
                    poly = poly + _kernel_segment(s, n, lower_is_x=False)
                elif not _lt(lo, s.lo) and not _lt(s.hi, hi):
                    poly = poly + _kernel_segment(s, n, lower_is_x=True)
            pieces.append(poly)
        return PiecewiseFunction(tuple(knots), tuple(pieces), _zero_like(knots[-1]))

    # -- algebra -------------------------------------------------------------
    def scaled(self, c) -> "SignedMeasure":
        return combine(c, self, 0, self)

    def __add__(self, other):
        return combine(1, self, 1, other)

    def __sub__(self, other):
        return combine(1, self, -1, other)

    def __neg__(self):
        return self.scaled(-1)

    def lowered(self, prec: int | None = None, tol: float | None = None) -> "SignedMeasure":
        """Float copy of this measure at ``prec`` bits."""
        iv = Interval(to_mpf(self.interval.a, prec), to_mpf(self.interval.b, prec))
        return SignedMeasure.build(
            iv,
            [(to_mpf(a.at, prec), to_mpf(a.weight, prec)) for a in self.atoms],
            [(to_mpf(s.lo, prec), to_mpf(s.hi, prec), s.density.lowered(prec)) for s in self.segments],
            tol=self.tol if tol is None else tol,
        )

    def __str__(self):
        parts = [f"{format_scalar(a.weight)}*delta({format_scalar(a.at)})" for a in self.atoms]
        for s in self.segments:
            coeffs = ", ".join(format_scalar(c) for c in s.density.coeffs)
            parts.append(f"density[{coeffs}] on [{format_scalar(s.lo)}, {format_scalar(s.hi)}]")
        return " + ".join(parts) if parts else "0"


def _kernel_segment(s: Segment, n: int, lower_is_x: bool) -> Polynomial:
    """Polynomial in x for ``integral (t - x)^n p(t) dt`` over the segment.

    The lower limit is the segment start, or ``x`` itself when ``lower_is_x``.
    """
    x = Polynomial([0, 1])
    out = Polynomial()
    for j in range(n + 1):
        prim = (s.density * Polynomial([0] * j + [1])).antiderivative()
        upper = prim(s.hi)
        inner = Polynomial([upper]) - (prim if lower_is_x else Polynomial([prim(s.lo)]))
        out = out + (x ** (n - j)) * inner * (comb(n, j) * (-1) ** (n - j))
    return out


def _disjoint_segments(segs: list[Segment], tol: float) -> list[Segment]:
    if not segs:
        return []
    cuts = _sorted_unique([s.lo for s in segs] + [s.hi for s in segs], tol)
    out: list[Segment] = []
    for lo, hi in zip(cuts, cuts[1:]):
        dens = Polynomial()
        for s in segs:
            if not _lt(lo, s.lo) and not _lt(s.hi, hi):
                dens = dens + s.density
        if dens.is_zero():
            continue
        if out and out[-1].density == dens and out[-1].hi == lo:
            out[-1] = Segment(out[-1].lo, hi, dens)
        else:
            out.append(Segment(lo, hi, dens))
    return out


def combine(c1, mu1: SignedMeasure, c2, mu2: SignedMeasure) -> SignedMeasure:
    """The linear combination ``c1*mu1 + c2*mu2`` (atoms at equal points merged)."""
    if mu1.interval != mu2.interval:
        raise MeasureError("measures live on different intervals")
    atoms = [(a.at, a.weight * c1) for a in mu1.atoms] + [(a.at, a.weight * c2) for a in mu2.atoms]
    segs = [(s.lo, s.hi, s.density * c1) for s in mu1.segments]
    segs += [(s.lo, s.hi, s.density * c2) for s in mu2.segments]
    return SignedMeasure.build(mu1.interval, atoms, segs, tol=mu1.tol)


def mixture(interval, parts: Sequence[tuple[object, SignedMeasure]]) -> SignedMeasure:
    """``sum(c_i * mu_i)`` for measures on a common interval."""
    out = SignedMeasure.zero(interval)
    for c, mu in parts:
        out = combine(1, out, c, mu)
    return out


def pushforward_affine(mu: SignedMeasure, source: Interval, target: Interval) -> SignedMeasure:
    """Image of ``mu`` under the increasing affine map sending source onto target."""
    if mu.interval != source:
        raise MeasureError("measure does not live on the source interval")
    scale = (target.b - target.a) / (source.b - source.a)

    def fwd(t):
        return target.a + (t - source.a) * scale

    atoms = [(fwd(a.at), a.weight) for a in mu.atoms]
    # density transforms as q(u) = p(source.a + (u - target.a)/scale) / scale
    inv_scale = 1 / scale
    segs = [
        (fwd(s.lo), fwd(s.hi), s.density.compose_affine(inv_scale, source.a - target.a * inv_scale) * inv_scale)
        for s in mu.segments
    ]
    return SignedMeasure.build(target, atoms, segs, tol=mu.tol)


def h_function(mu_diff: SignedMeasure, n: int) -> PiecewiseFunction:
    """``(-1)^(n+1)/n! * integral (t - x)_+^n d(mu_diff)``."""
    return mu_diff.kernel_transform(n).scaled(Fraction((-1) ** (n + 1), factorial(n)))


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------


def _scalar_field(v):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return parse_scalar(repr(v) if isinstance(v, float) else str(v))
    if isinstance(v, str):
        return parse_scalar(v)
    raise MeasureError(f"expected a scalar, got {v!r}")


def measure_from_dict(doc: dict) -> SignedMeasure:
    """Build a measure from ``{interval, atoms, segments}`` with scalars as strings."""
    try:
        a, b = (_scalar_field(v) for v in doc["interval"])
        atoms = [(_scalar_field(x["at"]), _scalar_field(x["weight"])) for x in doc.get("atoms", [])]
        segs = [
            (_scalar_field(s["from"]), _scalar_field(s["to"]), Polynomial([_scalar_field(c) for c in s["poly"]]))
            for s in doc.get("segments", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MeasureError(f"malformed measure document: {exc}") from exc
    return SignedMeasure.build(Interval(a, b), atoms, segs)


def measure_to_dict(mu: SignedMeasure) -> dict:
    return {
        "interval": [format_scalar(mu.interval.a), format_scalar(mu.interval.b)],
        "atoms": [{"at": format_scalar(a.at), "weight": format_scalar(a.weight)} for a in mu.atoms],
        "segments": [
            {"from": format_scalar(s.lo), "to": format_scalar(s.hi), "poly": [format_scalar(c) for c in s.density.coeffs]}
            for s in mu.segments
        ],
    }


def load_measure(path: str | Path) -> SignedMeasure:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MeasureError(f"cannot read measure file {path}: {exc}") from exc
    return measure_from_dict(doc)


def dump_measure(mu: SignedMeasure, path: str | Path) -> None:
    Path(path).write_text(json.dumps(measure_to_dict(mu), indent=2) + "\n")
