"""Scalars, quadratic radicals and univariate polynomials.

Two tracks are supported.  Exact values are ``fractions.Fraction`` or
:class:`RadicalScalar` (a rational combination of square roots of square-free
integers); every sign question about them is answered exactly.  Float values
are ``mpmath.mpf`` numbers at the ambient mpmath precision; their sign is
reported as ``INDETERMINATE`` whenever the magnitude does not exceed the
tolerance ``tol``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

DEFAULT_PRECISION = 128
DEFAULT_TOL = 1e-18

# bits used when a float shortcut is tried before an exact sign decision
_FILTER_PREC = 96


class Sign(enum.Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1
    INDETERMINATE = 2

    def flip(self) -> "Sign":
        if self is Sign.NEGATIVE:
            return Sign.POSITIVE
        if self is Sign.POSITIVE:
            return Sign.NEGATIVE
        return self


class IdenticallyZero(ValueError):
    """Raised when root isolation is asked about the zero polynomial."""


class ScalarSyntaxError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Quadratic radicals
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _square_free_split(n: int) -> tuple[int, int]:
    """Return (k, d) with n == k*k*d and d square-free."""
    k, d = 1, 1
    counts: dict[int, int] = {}
    for p in _factor(n):
        counts[p] = counts.get(p, 0) + 1
    for p, e in counts.items():
        k *= p ** (e // 2)
        if e % 2:
            d *= p
    return k, d


class RadicalScalar:
    """The number ``r0 + sum(c_i * sqrt(d_i))`` with rational ``r0, c_i``.

    Radicands are distinct square-free integers greater than one, so the
    representation is canonical and ``==`` is exact.  Arithmetic between
    radicals stays inside the multiquadratic field generated by the primes
    involved; a result without irrational part collapses to ``Fraction``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, Fraction]):
        # terms maps radicand (1 for the rational part) to its coefficient
        self._terms = {d: c for d, c in terms.items() if c != 0}
        self._hash = None

    @staticmethod
    def make(r0=0, terms: Iterable[tuple[object, int]] = ()) -> "Exact":
        acc: dict[int, Fraction] = {1: Fraction(r0)}
        for c, d in terms:
            d = int(d)
            if d < 0:
                raise ValueError("negative radicand")
            if d == 0:
                continue
            k, sf = _square_free_split(d)
            acc[sf] = acc.get(sf, Fraction(0)) + Fraction(c) * k
        return _collapse(acc)

    @property
    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def radical_terms(self) -> list[tuple[Fraction, int]]:
        return sorted((c, d) for d, c in self._terms.items() if d != 1)

    def items(self):
        return self._terms.items()

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _as_terms(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for d, c in other.items():
            acc[d] = acc.get(d, Fraction(0)) + c
        return _collapse(acc)

    __radd__ = __add__

    def __neg__(self):
        return RadicalScalar({d: -c for d, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _as_terms(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for d, c in other.items():
            acc[d] = acc.get(d, Fraction(0)) - c
        return _collapse(acc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _collapse({d: c * other for d, c in self._terms.items()})
        other = _as_terms(other)
        if other is None:
            return NotImplemented
        return _collapse(_mul_terms(self._terms, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return _collapse({d: c / other for d, c in self._terms.items()})
        if isinstance(other, RadicalScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out: Exact = Fraction(1)
        base: Exact = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Exact":
        return _collapse(_inverse_terms(self._terms))

    # -- comparisons --------------------------------------------------------
    def __eq__(self, other):
        other_terms = _as_terms(other)
        if other_terms is None:
            return NotImplemented
        return self._terms == {d: c for d, c in other_terms.items() if c != 0}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __lt__(self, other):
        return _exact_sign(self - other) < 0

    def __le__(self, other):
        return _exact_sign(self - other) <= 0

    def __gt__(self, other):
        return _exact_sign(self - other) > 0

    def __ge__(self, other):
        return _exact_sign(self - other) >= 0

    def __float__(self):
        return float(to_mpf(self, 80))

    def __repr__(self):
        return f"RadicalScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Exact = Union[Fraction, RadicalScalar]
Scalar = Union[Fraction, RadicalScalar, mpmath.mpf]


def _as_terms(x) -> dict[int, Fraction] | None:
    if isinstance(x, RadicalScalar):
        return x._terms
    if isinstance(x, (int, Fraction)):
        return {1: Fraction(x)}
    return None


def _collapse(acc: dict[int, Fraction]) -> Exact:
    nz = {d: c for d, c in acc.items() if c != 0}
    if not nz or set(nz) == {1}:
        return nz.get(1, Fraction(0))
    return RadicalScalar(nz)


def _mul_terms(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for d1, c1 in a.items():
        for d2, c2 in b.items():
            g = math.gcd(d1, d2)
            d = (d1 // g) * (d2 // g)
            out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
    return out


def _split_on_prime(t: dict[int, Fraction], p: int):
    """Write t = u + v*sqrt(p) where u, v avoid sqrt(p)."""
    u: dict[int, Fraction] = {}
    v: dict[int, Fraction] = {}
    for d, c in t.items():
        if d % p == 0:
            v[d // p] = c
        else:
            u[d] = c
    return u, v


def _some_prime(t: dict[int, Fraction]) -> int | None:
    for d in t:
        if d != 1:
            return _factor(d)[0]
    return None


def _inverse_terms(t: dict[int, Fraction]) -> dict[int, Fraction]:
    p = _some_prime(t)
    if p is None:
        c = t.get(1, Fraction(0))
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return {1: 1 / c}
    u, v = _split_on_prime(t, p)
    # (u + v sqrt p)^-1 = (u - v sqrt p) / (u^2 - p v^2)
    norm = _sub_terms(_mul_terms(u, u), {d: c * p for d, c in _mul_terms(v, v).items()})
    inv_norm = _inverse_terms({d: c for d, c in norm.items() if c != 0})
    conj = dict(u)
    for d, c in v.items():
        dd = d * p
        conj[dd] = conj.get(dd, Fraction(0)) - c
    return _mul_terms(conj, inv_norm)


def _sub_terms(a, b):
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, Fraction(0)) - c
    return out


def _terms_sign(t: dict[int, Fraction]) -> int:
    t = {d: c for d, c in t.items() if c != 0}
    if not t:
        return 0
    p = _some_prime(t)
    if p is None:
        return 1 if t[1] > 0 else -1
    # cheap filter: a moderately precise float decides most cases
    with mpmath.workprec(_FILTER_PREC):
        approx = mpmath.mpf(0)
        bound = mpmath.mpf(0)
        for d, c in t.items():
            term = mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(d)
            approx += term
            bound += abs(term)
        if abs(approx) > bound * mpmath.mpf(2) ** (-_FILTER_PREC + 8):
            return 1 if approx > 0 else -1
    u, v = _split_on_prime(t, p)
    su, sv = _terms_sign(u), _terms_sign(v)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv if su == 0 else su
    norm = _sub_terms(_mul_terms(u, u), {d: c * p for d, c in _mul_terms(v, v).items()})
    return su * _terms_sign(norm)


def _exact_sign(x) -> int:
    if isinstance(x, RadicalScalar):
        return _terms_sign(x._terms)
    if not isinstance(x, (int, Fraction)):
        x = Fraction(x)
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Scalar helpers
# ---------------------------------------------------------------------------


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, RadicalScalar))


def exact(x) -> Exact:
    """Coerce ints and strings to an exact scalar."""
    if isinstance(x, (Fraction, RadicalScalar)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def sqrt(d: int) -> Exact:
    return RadicalScalar.make(0, [(1, d)])


def to_mpf(x, prec: int | None = None) -> mpmath.mpf:
    """Lower a scalar to an mpmath float (at ``prec`` bits if given)."""
    if prec is not None:
        with mpmath.workprec(prec):
            return to_mpf(x)
    if isinstance(x, mpmath.mpf):
        return +x
    if isinstance(x, int):
        return mpmath.mpf(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, RadicalScalar):
        total = mpmath.mpf(0)
        for d, c in x.items():
            term = mpmath.mpf(c.numerator) / c.denominator
            total += term if d == 1 else term * mpmath.sqrt(d)
        return total
    return mpmath.mpf(x)


def sign(x, tol: float = DEFAULT_TOL) -> Sign:
    """Sign of ``x``; float values within ``tol`` of zero are INDETERMINATE."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if is_exact(x):
        return Sign(_exact_sign(x))
    v = to_mpf(x)
    if abs(v) <= tol:
        return Sign.INDETERMINATE
    return Sign.POSITIVE if v > 0 else Sign.NEGATIVE


def is_zero(x) -> bool:
    """Structural zero test (exact for exact values, literal for floats)."""
    if isinstance(x, RadicalScalar):
        return False
    return x == 0


def midpoint(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a + b, 2)
    return (a + b) / 2


def lower(x, prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    return to_mpf(x, prec)


# ---------------------------------------------------------------------------
# Text grammar
# ---------------------------------------------------------------------------

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?"
_TERM_RE = re.compile(
    rf"""\s*(?P<op>[+-])?\s*
    (?:
        (?P<coef>{_NUM})\s*(?:\*\s*sqrt\(\s*(?P<rad1>\d+)\s*\))?
      | sqrt\(\s*(?P<rad2>\d+)\s*\)
    )
    (?:\s*/\s*(?P<div>\d+))?\s*""",
    re.VERBOSE,
)


def _parse_number(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(text)


def parse_scalar(text: str) -> Exact:
    """Parse ``-3``, ``5/18``, ``0.25`` or sums like ``-1 - 1*sqrt(5) + 2*sqrt(2)``.

    ``sqrt(5)/5`` is also accepted.  Decimals are read exactly.
    """
    s = text.strip()
    if not s:
        raise ScalarSyntaxError("empty scalar")
    pos = 0
    r0 = Fraction(0)
    terms: list[tuple[Fraction, int]] = []
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ScalarSyntaxError(f"cannot parse scalar {text!r} at offset {pos}")
        if m.group("op") is None and not first:
            raise ScalarSyntaxError(f"missing operator in {text!r}")
        first = False
        sgn = -1 if m.group("op") == "-" else 1
        coef = _parse_number(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("div"):
            coef /= int(m.group("div"))
        rad = m.group("rad1") or m.group("rad2")
        if rad is None:
            r0 += sgn * coef
        else:
            terms.append((sgn * coef, int(rad)))
        pos = m.end()
    return RadicalScalar.make(r0, terms)


def format_scalar(x) -> str:
    """Canonical text form, the inverse of :func:`parse_scalar` for exact input."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, RadicalScalar):
        parts = []
        r0 = x.rational_part
        if r0 != 0:
            parts.append(str(r0))
        for c, d in sorted(((c, d) for d, c in x.items() if d != 1), key=lambda cd: cd[1]):
            mag = abs(c)
            body = f"{mag}*sqrt({d})"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)
    return mpmath.nstr(to_mpf(x), 20)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Univariate polynomial with ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        while cs and is_zero(cs[-1]):
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def linear_factor(cls, root) -> "Polynomial":
        """The polynomial ``t - root``."""
        return cls([-root, Fraction(1)])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1]

    def __call__(self, x):
        acc = Fraction(0) if is_exact(x) else mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if is_zero(other):
                return Polynomial()
            return Polynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([Fraction(1)])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Polynomial([" + ", ".join(format_scalar(c) for c in self.coeffs) + "])"

    def derivative(self) -> "Polynomial":
        return Polynomial([c * k for k, c in enumerate(self.coeffs) if k > 0])

    def antiderivative(self) -> "Polynomial":
        """Antiderivative vanishing at zero."""
        if self.is_zero():
            return Polynomial()
        return Polynomial([Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def integrate(self, lo, hi):
        prim = self.antiderivative()
        return prim(hi) - prim(lo)

    def compose_affine(self, scale, shift) -> "Polynomial":
        """Return ``t -> P(scale * t + shift)``."""
        inner = Polynomial([shift, scale])
        out = Polynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def map(self, fn) -> "Polynomial":
        return Polynomial([fn(c) for c in self.coeffs])

    def lowered(self, prec: int | None = None) -> "Polynomial":
        return Polynomial([to_mpf(c, prec) for c in self.coeffs])

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead_inv = 1 / other.lead() if is_exact(other.lead()) else mpmath.mpf(1) / other.lead()
        dd = other.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if is_zero(c):
                continue
            f = c * lead_inv
            q[k - dd] = f
            for j, b in enumerate(other.coeffs):
                rem[k - dd + j] = rem[k - dd + j] - f * b
            rem[k] = Fraction(0)
        return Polynomial(q), Polynomial(rem[:dd] if dd > 0 else [])

    def monic(self) -> "Polynomial":
        return self * (1 / self.lead())


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the exact coefficient field."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def square_free_part(p: Polynomial) -> Polynomial:
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.divmod(g)[0].monic()


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return chain


def _variations(chain: list[Polynomial], x) -> int:
    count = 0
    prev = 0
    for q in chain:
        s = _exact_sign(q(x))
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


# ---------------------------------------------------------------------------
# Roots and sign analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    """A real root bracketed by ``lo <= root <= hi``.

    ``lo == hi`` marks an exactly known root.  ``flips`` is True when the
    polynomial changes sign across the root (odd multiplicity).
    """

    lo: Scalar
    hi: Scalar
    flips: bool
    approx: mpmath.mpf

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi and is_exact(self.lo)

    @property
    def value(self):
        return self.lo if self.is_exact else self.approx


def _exact_multiplicity_parity(p: Polynomial, x) -> bool:
    """True when the first non-vanishing derivative at x has odd order."""
    q = p
    order = 0
    while _exact_sign(q(x)) == 0:
        q = q.derivative()
        order += 1
        if q.is_zero():
            break
    return order % 2 == 1


def _refine_float(p: Polynomial, lo, hi, prec: int) -> mpmath.mpf:
    with mpmath.workprec(prec):
        pf = p.lowered()
        a, b = to_mpf(lo), to_mpf(hi)
        fa = pf(a)
        for _ in range(prec + 8):
            m = (a + b) / 2
            fm = pf(m)
            if fm == 0:
                return m
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        return (a + b) / 2


def _isolate_exact(p: Polynomial, lo, hi) -> list[Root]:
    s = square_free_part(p)
    chain = sturm_chain(s)
    prec = max(mpmath.mp.prec, DEFAULT_PRECISION) + 32
    roots: list[Root] = []

    def exact_root(x):
        roots.append(Root(x, x, _exact_multiplicity_parity(p, x), to_mpf(x, prec)))

    def open_count(a, b):
        return _variations(chain, a) - _variations(chain, b) - (1 if _exact_sign(s(b)) == 0 else 0)

    def walk(a, b, count):
        # invariant: exactly `count` distinct roots in the open interval (a, b)
        if count == 0:
            return
        a_root = _exact_sign(s(a)) == 0
        b_root = _exact_sign(s(b)) == 0
        if count == 1 and not a_root and not b_root:
            if s.degree == 1:
                exact_root(-s.coeffs[0] / s.coeffs[1])
                return
            m = midpoint(a, b)
            if _exact_sign(s(m)) == 0:
                exact_root(m)
                return
            flips = _exact_sign(p(a)) != _exact_sign(p(b))
            roots.append(Root(a, b, flips, _refine_float(s, a, b, prec)))
            return
        m = midpoint(a, b)
        left = open_count(a, m)
        if _exact_sign(s(m)) == 0:
            walk(a, m, left)
            exact_root(m)
            walk(m, b, count - left - 1)
        else:
            walk(a, m, left)
            walk(m, b, count - left)

    if _exact_sign(s(lo)) == 0:
        exact_root(lo)
    if lo != hi:
        walk(lo, hi, open_count(lo, hi))
        if _exact_sign(s(hi)) == 0:
            exact_root(hi)
    return [_pull_inside(s, r, lo, hi) for r in roots]


def _pull_inside(s: Polynomial, r: Root, lo, hi) -> Root:
    """Bisect a bracket until neither end touches ``lo`` or ``hi``.

    Keeps a strictly positive gap between the bracket and the interval ends
    so that sign samples exist on both sides of the root.
    """
    if r.is_exact:
        return r
    a, b = r.lo, r.hi
    while a == lo or b == hi:
        m = midpoint(a, b)
        sm = _exact_sign(s(m))
        if sm == 0:
            return Root(m, m, r.flips, r.approx)
        if sm == _exact_sign(s(a)):
            a = m
        else:
            b = m
    return Root(a, b, r.flips, r.approx)


def _isolate_float(p: Polynomial, lo, hi, tol: float) -> list[Root]:
    """Roots of a float polynomial via monotone pieces between critical points."""
    lo, hi = to_mpf(lo), to_mpf(hi)
    if p.degree <= 0:
        return []
    if p.degree == 1:
        r = -p.coeffs[0] / p.coeffs[1]
        return [Root(r, r, True, r)] if lo <= r <= hi else []
    crit = [r.approx for r in _isolate_float(p.derivative(), lo, hi, tol)]
    pts = [lo] + [c for c in crit if lo < c < hi] + [hi]
    vals = [p(x) for x in pts]
    roots: list[Root] = []
    near = [abs(v) <= tol for v in vals]
    for i, x in enumerate(pts):
        if near[i]:
            left = next((vals[j] for j in range(i - 1, -1, -1) if not near[j]), None)
            right = next((vals[j] for j in range(i + 1, len(pts)) if not near[j]), None)
            flips = left is not None and right is not None and (left > 0) != (right > 0)
            roots.append(Root(x, x, flips, x))
    for i in range(len(pts) - 1):
        if near[i] or near[i + 1]:
            continue
        if (vals[i] > 0) != (vals[i + 1] > 0):
            r = _refine_float(p, pts[i], pts[i + 1], mpmath.mp.prec)
            roots.append(Root(pts[i], pts[i + 1], True, r))
    roots.sort(key=lambda r: r.approx)
    return roots


def roots_in_interval(p: Polynomial, lo, hi, tol: float = DEFAULT_TOL) -> list[Root]:
    """All distinct real roots of ``p`` in ``[lo, hi]``, ordered.

    Exact polynomials are handled with Sturm sequences and exact bisection;
    float polynomials by bisection on monotone pieces.  Roots of float
    polynomials whose value is within ``tol`` of zero at a critical point are
    reported as tangencies (``flips`` decided by the neighbouring signs).
    """
    if p.is_zero():
        raise IdenticallyZero("polynomial vanishes identically")
    if p.is_exact() and is_exact(lo) and is_exact(hi):
        return _isolate_exact(p, lo, hi)
    return _isolate_float(p.lowered(), lo, hi, tol)


@dataclass(frozen=True)
class Nonnegativity:
    """Outcome of :func:`nonnegative_on`: ``status`` is ``yes``, ``no`` or ``indeterminate``."""

    status: str
    witness: Scalar | None = None

    @property
    def yes(self) -> bool:
        return self.status == "yes"

    @property
    def no(self) -> bool:
        return self.status == "no"


def _sample_points(lo, hi, roots: list[Root]) -> list:
    """Probe points that together see every constant-sign stretch of ``[lo, hi]``."""
    pts = [lo]
    bounds = [(lo, lo)] + [(r.lo, r.hi) for r in roots] + [(hi, hi)]
    for (_, left_hi), (right_lo, _) in zip(bounds, bounds[1:]):
        if left_hi != right_lo and _exact_sign(right_lo - left_hi) > 0:
            pts.append(midpoint(left_hi, right_lo))
    # bracket ends are never roots, and they carry the sign on either side of
    # the bracketed root (adjacent brackets leave no gap to sample)
    for r in roots:
        if r.lo != r.hi:
            pts += [r.lo, r.hi]
    pts.append(hi)
    return pts


def nonnegative_on(p: Polynomial, lo, hi, tol: float = DEFAULT_TOL) -> Nonnegativity:
    """Decide whether ``p >= 0`` on ``[lo, hi]``.

    Exact mode is decided without error.  In float mode a value below
    ``-tol`` is a violation; a local minimum in the interior whose magnitude
    is within ``tol`` cannot be told apart from a true tangency and yields
    ``indeterminate``.  Endpoint values within ``tol`` count as zero.
    """
    if p.is_zero():
        return Nonnegativity("yes")
    if p.is_exact() and is_exact(lo) and is_exact(hi):
        for x in (lo, hi):
            if _exact_sign(p(x)) < 0:
                return Nonnegativity("no", x)
        roots = _isolate_exact(p, lo, hi)
        for x in _sample_points(lo, hi, roots):
            if _exact_sign(p(x)) < 0:
                return Nonnegativity("no", x)
        return Nonnegativity("yes")
    pf = p.lowered()
    a, b = to_mpf(lo), to_mpf(hi)
    crit = [r.approx for r in _isolate_float(pf.derivative(), a, b, tol)] if pf.degree > 1 else []
    status = "yes"
    for x in [a, b] + crit:
        v = pf(x)
        if v < -tol:
            return Nonnegativity("no", x)
        if x is not a and x is not b and abs(v) <= tol and v < 0:
            status = "indeterminate"
    return Nonnegativity(status)


def sign_regions(p: Polynomial, lo, hi, tol: float = DEFAULT_TOL) -> list[tuple[object, Sign, "Root | None"]]:
    """Constant-sign stretches of ``p`` inside ``(lo, hi)``.

    Returns ``(start, sign, root)`` triples in order, where ``start`` is where
    the stretch begins (``lo`` or a root) and ``root`` is the :class:`Root`
    opening it (None for the first stretch).  The zero polynomial gives an
    empty list.
    """
    if p.is_zero():
        return []
    roots = roots_in_interval(p, lo, hi, tol)
    exact_mode = p.is_exact() and is_exact(lo) and is_exact(hi)
    if exact_mode:
        bounds = [(lo, lo, None)] + [(r.lo, r.hi, r) for r in roots] + [(hi, hi, None)]
    else:
        a, b = to_mpf(lo), to_mpf(hi)
        bounds = [(a, a, None)] + [(r.approx, r.approx, r) for r in roots] + [(b, b, None)]
    out = []
    for (left_lo, left_hi, root), (right_lo, right_hi, _) in zip(bounds, bounds[1:]):
        gap = sign(right_lo - left_hi, 0.0)
        if gap is Sign.POSITIVE:
            sample = midpoint(left_hi, right_lo)
        elif gap is Sign.ZERO and exact_mode and left_lo != left_hi and right_lo != right_hi:
            # two brackets meeting at a point that is not itself a root
            sample = left_hi
        else:
            continue
        start = lo if root is None else root.value
        out.append((start, sign(p(sample), 0.0 if exact_mode else tol), root))
    return out
