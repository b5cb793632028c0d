"""Convex and higher-order convex ordering between signed measures.

Degree convention: ``n`` is the degree of the test class, i.e. the test
functions are the continuous n-convex functions (``f^(n-1)`` convex).
``n = 1`` is the ordinary convex order.  ``mu1 <= mu2`` means
``integral f dmu1 <= integral f dmu2`` for every such ``f``.

Throughout, ``nu = mu2 - mu1`` and the ladder functions are

    H_n(x) = (-1)^(n+1) / n! * integral (t - x)_+^n dnu(t),   H_(k-1) = H_k'

with ``H_0 = F2 - F1``.  Once the moments ``0..n`` of ``nu`` vanish,
``mu1 <= mu2`` holds exactly when ``(-1)^(n+1) H_n >= 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .measure import PiecewiseFunction, SignedMeasure, h_function
from .numeric import (
    DEFAULT_TOL,
    Polynomial,
    Root,
    Sign,
    format_scalar,
    is_exact,
    midpoint,
    nonnegative_on,
    sign,
    sign_regions,
    to_mpf,
)


class Status(enum.Enum):
    HOLDS = "holds"
    HOLDS_REVERSED = "holds-reversed"
    INCOMPARABLE = "incomparable"
    INDETERMINATE = "indeterminate"
    INAPPLICABLE = "inapplicable"
    # A sufficient test that did not fire; the caller moves on.
    UNDECIDED = "undecided"


def _check_degree(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"degree must be an integer >= 1, got {n!r}")
    return n


@dataclass(frozen=True)
class Witness:
    """A test function with a strictly signed expectation gap.

    ``kind == "kernel"``: ``f(x) = (x - shift)_+^degree``.
    ``kind == "monomial"``: ``f(x) = coefficient * x^degree``.
    ``gap`` is ``integral f d(mu2 - mu1)``; a negative gap refutes
    ``mu1 <= mu2``, a positive one refutes ``mu2 <= mu1``.
    """

    kind: str
    degree: int
    gap: object
    shift: object = None
    coefficient: int = 1

    def describe(self) -> str:
        if self.kind == "kernel":
            return f"(x - {format_scalar(self.shift)})_+^{self.degree} gap={format_scalar(self.gap)}"
        return f"{self.coefficient}*x^{self.degree} gap={format_scalar(self.gap)}"


@dataclass(frozen=True)
class CrossingReport:
    """Sign changes of a piecewise function, zero stretches discarded."""

    count: int
    brackets: tuple = ()
    first_sign: Sign = Sign.ZERO
    last_sign: Sign = Sign.ZERO
    indeterminate: bool = False

    @property
    def points(self) -> tuple:
        return tuple(r.value for r in self.brackets)


@dataclass(frozen=True)
class OrderVerdict:
    status: Status
    criterion: str
    degree: int
    moments_checked: int = 0
    crossings: tuple = ()
    checked: tuple = ()
    witnesses: tuple = ()
    first_bad_moment: int | None = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    def reversed(self) -> "OrderVerdict":
        """The same verdict read for the swapped pair."""
        swap = {Status.HOLDS: Status.HOLDS_REVERSED, Status.HOLDS_REVERSED: Status.HOLDS}
        flipped = tuple(
            Witness(w.kind, w.degree, -w.gap, w.shift, w.coefficient) for w in self.witnesses
        )
        return OrderVerdict(
            swap.get(self.status, self.status),
            self.criterion,
            self.degree,
            self.moments_checked,
            self.crossings,
            tuple((label, x, -v) for label, x, v in self.checked),
            flipped,
            self.first_bad_moment,
            self.note,
        )

    def records(self) -> list[tuple[str, str]]:
        """Stable key/value fields for structured output."""
        out = [
            ("status", self.status.value),
            ("criterion", self.criterion),
            ("degree", str(self.degree)),
            ("moments_checked", str(self.moments_checked)),
            ("crossings", "; ".join(format_scalar(x) for x in self.crossings)),
            ("checked", "; ".join(f"{label}({format_scalar(x)})={format_scalar(v)}" for label, x, v in self.checked)),
            ("witnesses", "; ".join(w.describe() for w in self.witnesses)),
            ("first_bad_moment", "" if self.first_bad_moment is None else str(self.first_bad_moment)),
        ]
        if self.note:
            out.append(("note", self.note))
        return out


@dataclass(frozen=True)
class HLadder:
    """``H_0 .. H_n`` for a measure pair; ``functions[k]`` is ``H_k``."""

    degree: int
    functions: tuple = field(default_factory=tuple)

    def __getitem__(self, k: int) -> PiecewiseFunction:
        return self.functions[k]

    def oriented(self, k: int) -> PiecewiseFunction:
        """``(-1)^(n+1) H_k``: the ladder with the sign the criteria test."""
        return self.functions[k].scaled(-1 if self.degree % 2 == 0 else 1)


# ---------------------------------------------------------------------------
# Sign changes
# ---------------------------------------------------------------------------


def _exact_root(x) -> Root:
    return Root(x, x, True, to_mpf(x))


def _knot_sign(v, tol: float) -> Sign:
    # a single point value within tol is a zero term; only stretches can hide a sign
    s = sign(v, tol)
    return Sign.ZERO if s is Sign.INDETERMINATE else s


def sign_changes(F: PiecewiseFunction, tol: float = DEFAULT_TOL) -> CrossingReport:
    """Count sign changes of ``F`` on its interval, discarding zero stretches.

    A change is located where the new sign begins: at a polynomial root inside
    a piece, or at a knot when a jump (or a zero knot value) separates the
    two signs.
    """
    events: list[tuple[Sign, Root]] = []
    indeterminate = False
    for lo, hi, p in F.segments():
        events.append((_knot_sign(p(lo), tol), _exact_root(lo)))
        for start, s, root in sign_regions(p, lo, hi, tol):
            events.append((s, root if root is not None else _exact_root(start)))
    events.append((_knot_sign(F.end_value, tol), _exact_root(F.b)))

    signs: list[Sign] = []
    brackets: list[Root] = []
    for s, at in events:
        if s is Sign.INDETERMINATE:
            indeterminate = True
            continue
        if s is Sign.ZERO:
            continue
        if signs and s is not signs[-1]:
            brackets.append(at)
        if not signs or s is not signs[-1]:
            signs.append(s)
    if not signs:
        return CrossingReport(0, (), Sign.ZERO, Sign.ZERO, indeterminate)
    return CrossingReport(len(brackets), tuple(brackets), signs[0], signs[-1], indeterminate)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _first_moment_mismatch(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float) -> int | None:
    """First ``k <= n`` with differing k-th moments, or None."""
    exact_mode = mu1.is_exact() and mu2.is_exact()
    for k in range(n + 1):
        s = sign(mu2.moment(k) - mu1.moment(k), 0.0 if exact_mode else tol)
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            return k
    return None


def _same_interval(mu1: SignedMeasure, mu2: SignedMeasure) -> None:
    a1, b1 = mu1.interval.a, mu1.interval.b
    a2, b2 = mu2.interval.a, mu2.interval.b
    same = (a1 == a2 and b1 == b2) if all(is_exact(v) for v in (a1, b1, a2, b2)) else (
        to_mpf(a1) == to_mpf(a2) and to_mpf(b1) == to_mpf(b2)
    )
    if not same:
        raise ValueError(f"measures live on different intervals {mu1.interval} and {mu2.interval}")


def _tol(mu1: SignedMeasure, mu2: SignedMeasure, tol: float | None) -> float:
    if tol is not None:
        return tol
    return 0.0 if (mu1.is_exact() and mu2.is_exact()) else max(mu1.tol, mu2.tol)


def _monomial_witnesses(mu1, mu2, k: int) -> tuple[Witness, Witness]:
    gap = mu2.moment(k) - mu1.moment(k)
    return Witness("monomial", k, gap, coefficient=1), Witness("monomial", k, -gap, coefficient=-1)


def _find_negative(P: PiecewiseFunction, tol: float) -> tuple[str, object]:
    """Scan ``P`` piecewise; return ("no", x) at a point with ``P(x) < 0``."""
    status = "yes"
    for lo, hi, p in P.segments():
        res = nonnegative_on(p, lo, hi, tol)
        if res.no:
            return "no", res.witness
        if res.status == "indeterminate":
            status = "indeterminate"
    return status, None


def _kernel_witness(mu1, mu2, n: int, t) -> Witness:
    """Kernel witness at shift ``t`` with its gap integrated directly."""
    diff = mu2 - mu1
    if not is_exact(t):
        diff = diff.lowered()
    gap = _kernel_gap(diff, n, t)
    return Witness("kernel", n, gap, shift=t)


def _kernel_gap(nu: SignedMeasure, n: int, t):
    """``integral (x - t)_+^n dnu`` computed from the atoms and segments."""
    total = Fraction(0) if is_exact(t) and nu.is_exact() else to_mpf(0)
    for at in nu.atoms:
        d = at.at - t
        if sign(d, 0.0) is Sign.POSITIVE:
            total = total + at.weight * d**n
    kern = Polynomial([-t, 1]) ** n
    for s in nu.segments:
        lo = s.lo
        if sign(s.hi - t, 0.0) is not Sign.POSITIVE:
            continue
        if sign(t - lo, 0.0) is Sign.POSITIVE:
            lo = t
        total = total + (s.density * kern).integrate(lo, s.hi)
    return total


def _verdict_from_sign_scan(mu1, mu2, n, P, tol, criterion, checked=(), crossings=()) -> OrderVerdict:
    """Decide the order from the oriented function ``P`` (``P >= 0`` iff mu1 <= mu2)."""
    up, neg_at = _find_negative(P, tol)
    down, pos_at = _find_negative(-P, tol)
    common = dict(degree=n, moments_checked=n, crossings=crossings, checked=checked)
    if up == "yes" and down == "yes":
        return OrderVerdict(Status.HOLDS, criterion, note="measures agree on the test class", **common)
    if up == "yes":
        return OrderVerdict(Status.HOLDS, criterion, **common)
    if down == "yes":
        return OrderVerdict(Status.HOLDS_REVERSED, criterion, **common)
    if up == "no" and down == "no":
        w = (_kernel_witness(mu1, mu2, n, neg_at), _kernel_witness(mu1, mu2, n, pos_at))
        return OrderVerdict(Status.INCOMPARABLE, criterion, witnesses=w, **common)
    return OrderVerdict(Status.INDETERMINATE, criterion, note="sign of the ladder not resolved at this tolerance", **common)


# ---------------------------------------------------------------------------
# Convex order (n = 1)
# ---------------------------------------------------------------------------


def check_ohlin(mu1: SignedMeasure, mu2: SignedMeasure, tol: float | None = None) -> OrderVerdict:
    """Single-crossing sufficient test for the convex order.

    Needs nonnegative measures with equal masses and means.  Returns HOLDS
    when the distribution functions cross exactly once with ``F1 <= F2``
    before the crossing, HOLDS_REVERSED for the mirrored pattern, and
    UNDECIDED otherwise.
    """
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    if not (mu1.is_nonnegative() and mu2.is_nonnegative()):
        return OrderVerdict(Status.INAPPLICABLE, "ohlin", 1, note="needs nonnegative measures")
    bad = _first_moment_mismatch(mu1, mu2, 1, tol)
    if bad is not None:
        return OrderVerdict(Status.INAPPLICABLE, "ohlin", 1, first_bad_moment=bad)
    rep = sign_changes(mu2.cdf() - mu1.cdf(), tol)
    if rep.indeterminate:
        return OrderVerdict(Status.INDETERMINATE, "ohlin", 1, 1, rep.points)
    if rep.count != 1:
        return OrderVerdict(Status.UNDECIDED, "ohlin", 1, 1, rep.points, note=f"{rep.count} crossings")
    status = Status.HOLDS if rep.first_sign is Sign.POSITIVE else Status.HOLDS_REVERSED
    return OrderVerdict(status, "ohlin", 1, 1, rep.points)


def check_levin_steckin(mu1: SignedMeasure, mu2: SignedMeasure, tol: float | None = None) -> OrderVerdict:
    """Exact convex-order test on prefix integrals of the distribution functions.

    Works for signed measures.  ``mu1 <= mu2`` iff the masses and means agree
    and ``x -> integral_a^x (F2 - F1) >= 0``.  The prefix integral is built by
    integrating the cdf difference, independently of the kernel transform.
    """
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    G = mu2.cdf() - mu1.cdf()
    if sign(G.end_value, tol) not in (Sign.ZERO, Sign.INDETERMINATE):
        return OrderVerdict(Status.INAPPLICABLE, "levin-steckin", 1, first_bad_moment=0)
    H1 = G.integral_from_left()
    if sign(H1.end_value, tol) not in (Sign.ZERO, Sign.INDETERMINATE):
        return OrderVerdict(Status.INAPPLICABLE, "levin-steckin", 1, first_bad_moment=1)
    return _verdict_from_sign_scan(mu1, mu2, 1, H1, tol, "levin-steckin")


def check_area_criterion(mu1: SignedMeasure, mu2: SignedMeasure, tol: float | None = None) -> OrderVerdict:
    """Convex order from the sign-change points of ``F = F2 - F1``.

    With ``F >= 0`` before its first change ``x_1``: an even number of
    changes refutes the order, and an odd number gives ``mu1 <= mu2`` iff the
    prefix integral of ``F`` is nonnegative at ``x_2, x_4, ...`` (the local
    minima).  When ``F`` starts negative the pair is swapped.
    """
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    bad = _first_moment_mismatch(mu1, mu2, 1, tol)
    if bad is not None:
        return OrderVerdict(Status.INAPPLICABLE, "area", 1, first_bad_moment=bad)
    ladder = build_h_ladder(mu1, mu2, 1)
    return _signpoint_decision(mu1, mu2, 1, ladder, tol, "area")


# ---------------------------------------------------------------------------
# Higher order
# ---------------------------------------------------------------------------


def check_dls(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float | None = None) -> OrderVerdict:
    """Sufficient test: ``n`` crossings of the cdfs with ``F1 - F2`` ending positive.

    Requires probability-type (nonnegative, equal-mass) measures with
    moments ``1..n`` equal.
    """
    n = _check_degree(n)
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    if not (mu1.is_nonnegative() and mu2.is_nonnegative()):
        return OrderVerdict(Status.INAPPLICABLE, "dls", n, note="needs nonnegative measures")
    bad = _first_moment_mismatch(mu1, mu2, n, tol)
    if bad is not None:
        return OrderVerdict(Status.INAPPLICABLE, "dls", n, first_bad_moment=bad)
    rep = sign_changes(mu1.cdf() - mu2.cdf(), tol)
    if rep.indeterminate:
        return OrderVerdict(Status.INDETERMINATE, "dls", n, n, rep.points)
    if rep.count != n:
        return OrderVerdict(Status.UNDECIDED, "dls", n, n, rep.points, note=f"{rep.count} crossings")
    status = Status.HOLDS if rep.last_sign is Sign.POSITIVE else Status.HOLDS_REVERSED
    return OrderVerdict(status, "dls", n, n, rep.points)


def build_h_ladder(mu1: SignedMeasure, mu2: SignedMeasure, n: int) -> HLadder:
    """``H_n`` from the kernel transform of ``mu2 - mu1``, lower rungs by differentiation.

    ``H_0`` is taken from the distribution functions directly.  The two
    agree once the masses match; :func:`ladder_mismatch` reports the
    difference.
    """
    n = _check_degree(n)
    _same_interval(mu1, mu2)
    nu = mu2 - mu1
    rungs = [h_function(nu, n)]
    for _ in range(n - 1):
        rungs.append(rungs[-1].derivative())
    rungs.append(mu2.cdf() - mu1.cdf())
    return HLadder(n, tuple(reversed(rungs)))


def ladder_mismatch(ladder: HLadder) -> PiecewiseFunction:
    """``H_1' - H_0``; identically zero when the two constructions agree.

    Only the pieces are compared: a derivative cannot see an atom sitting at
    the right end, so the end values are not part of the check.
    """
    d = ladder[1].derivative() - ladder[0]
    return PiecewiseFunction(d.knots, d.pieces)


def check_higher_order(mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float | None = None) -> OrderVerdict:
    """Exact test for the n-convex order: moments ``0..n`` and the sign of ``H_n``."""
    n = _check_degree(n)
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    bad = _first_moment_mismatch(mu1, mu2, n, tol)
    if bad is not None:
        return OrderVerdict(Status.INAPPLICABLE, "h-ladder", n, first_bad_moment=bad)
    ladder = build_h_ladder(mu1, mu2, n)
    return _verdict_from_sign_scan(mu1, mu2, n, ladder.oriented(n), tol, "h-ladder")


def check_higher_order_signpoints(
    mu1: SignedMeasure, mu2: SignedMeasure, n: int, tol: float | None = None
) -> OrderVerdict:
    """n-convex order from the sign changes of ``(-1)^(n+1) H_(n-1)``.

    The oriented ``H_(n-1)`` must start nonnegative, otherwise INAPPLICABLE
    (swap the arguments).  Even count: INCOMPARABLE.  Odd count: HOLDS iff
    ``(-1)^(n+1) H_n`` is nonnegative at every even-indexed change point.
    """
    n = _check_degree(n)
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    bad = _first_moment_mismatch(mu1, mu2, n, tol)
    if bad is not None:
        return OrderVerdict(Status.INAPPLICABLE, "sign-points", n, first_bad_moment=bad)
    ladder = build_h_ladder(mu1, mu2, n)
    rep = sign_changes(ladder.oriented(n - 1), tol)
    if rep.first_sign is Sign.NEGATIVE:
        return OrderVerdict(
            Status.INAPPLICABLE, "sign-points", n, n, rep.points, note="initial sign negative; swap the pair"
        )
    return _signpoint_decision(mu1, mu2, n, ladder, tol, "sign-points", rep)


def _signpoint_decision(mu1, mu2, n, ladder: HLadder, tol, criterion, rep=None) -> OrderVerdict:
    slope = ladder.oriented(n - 1)
    P = ladder.oriented(n)
    if rep is None:
        rep = sign_changes(slope, tol)
    if rep.indeterminate:
        return OrderVerdict(Status.INDETERMINATE, criterion, n, n, rep.points)
    if rep.first_sign is Sign.NEGATIVE:
        swapped = build_h_ladder(mu2, mu1, n)
        return _signpoint_decision(mu2, mu1, n, swapped, tol, criterion).reversed()
    if rep.count == 0:
        # P starts and ends at zero and never decreases, so it vanishes.
        return OrderVerdict(Status.HOLDS, criterion, n, n, note="measures agree on the test class")
    pos_w = _positive_witness(mu1, mu2, n, P, tol)
    if rep.count % 2 == 0:
        # P rises after the last change back up to P(b) = 0, so it is negative there.
        last = rep.brackets[-1]
        _, neg_at = _find_negative_after(P, last, tol)
        w = (_kernel_witness(mu1, mu2, n, neg_at), pos_w) if neg_at is not None else ()
        return OrderVerdict(Status.INCOMPARABLE, criterion, n, n, rep.points, witnesses=w)
    checked = []
    neg_at = None
    undecided = False
    for i, root in enumerate(rep.brackets):
        if i % 2 == 0:
            continue
        label = f"H{n}@x{i + 1}"
        if root.is_exact:
            v = P(root.lo)
            checked.append((label, root.lo, v))
            s = sign(v, tol)
            if s is Sign.NEGATIVE and neg_at is None:
                neg_at = root.lo
            undecided |= s is Sign.INDETERMINATE and to_mpf(v) < 0
            continue
        # An irrational change point is a local minimum of P inside its bracket.
        piece = P.pieces[P.piece_index(root.lo)]
        res = nonnegative_on(piece, root.lo, root.hi, tol)
        checked.append((label, root.approx, piece.lowered()(root.approx)))
        if res.no and neg_at is None:
            neg_at = res.witness
        undecided |= res.status == "indeterminate"
    if neg_at is not None:
        w = (_kernel_witness(mu1, mu2, n, neg_at), pos_w)
        return OrderVerdict(Status.INCOMPARABLE, criterion, n, n, rep.points, tuple(checked), w)
    if undecided:
        return OrderVerdict(Status.INDETERMINATE, criterion, n, n, rep.points, tuple(checked))
    return OrderVerdict(Status.HOLDS, criterion, n, n, rep.points, tuple(checked))


def _positive_witness(mu1, mu2, n, P, tol) -> Witness | None:
    _, at = _find_negative(-P, tol)
    return None if at is None else _kernel_witness(mu1, mu2, n, at)


def _find_negative_after(P: PiecewiseFunction, root: Root, tol):
    for lo, hi, p in P.segments():
        if sign(hi - root.hi, 0.0) is not Sign.POSITIVE:
            continue
        start = root.hi if sign(root.hi - lo, 0.0) is Sign.POSITIVE else lo
        res = nonnegative_on(p, start, hi, tol)
        if res.no:
            return "no", res.witness
    return "yes", None


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


def decide_order(mu1: SignedMeasure, mu2: SignedMeasure, n: int = 1, tol: float | None = None) -> OrderVerdict:
    """Strongest statement about ``mu1`` versus ``mu2`` on n-convex functions.

    Cheap sufficient tests run first (single crossing, then the crossing-count
    test for ``n >= 2``), then an exact criterion.  Both directions are
    covered: HOLDS, HOLDS_REVERSED, HOLDS with an "agree" note when both
    hold, or INCOMPARABLE with two witnesses.
    """
    n = _check_degree(n)
    _same_interval(mu1, mu2)
    tol = _tol(mu1, mu2, tol)
    bad = _first_moment_mismatch(mu1, mu2, n, tol)
    if bad is not None:
        return OrderVerdict(
            Status.INCOMPARABLE,
            "moments",
            n,
            bad,
            witnesses=_monomial_witnesses(mu1, mu2, bad),
            first_bad_moment=bad,
        )
    nonneg = mu1.is_nonnegative() and mu2.is_nonnegative()
    if n == 1:
        if nonneg:
            v = check_ohlin(mu1, mu2, tol)
            if v.status in (Status.HOLDS, Status.HOLDS_REVERSED):
                return v
        v = check_area_criterion(mu1, mu2, tol)
        if v.status not in (Status.INDETERMINATE, Status.INAPPLICABLE):
            return v
        return check_levin_steckin(mu1, mu2, tol)
    if nonneg:
        v = check_dls(mu1, mu2, n, tol)
        if v.status in (Status.HOLDS, Status.HOLDS_REVERSED):
            return v
    v = check_higher_order_signpoints(mu1, mu2, n, tol)
    if v.status is Status.INAPPLICABLE:
        v = check_higher_order_signpoints(mu2, mu1, n, tol).reversed()
    if v.status not in (Status.INDETERMINATE, Status.INAPPLICABLE):
        return v
    return check_higher_order(mu1, mu2, n, tol)


def kernel_gap(mu1: SignedMeasure, mu2: SignedMeasure, n: int, t):
    """``integral (x - t)_+^n d(mu2 - mu1)``."""
    return _kernel_gap(mu2 - mu1, n, t)


__all__ = [
    "CrossingReport",
    "HLadder",
    "OrderVerdict",
    "Status",
    "Witness",
    "build_h_ladder",
    "check_area_criterion",
    "check_dls",
    "check_higher_order",
    "check_higher_order_signpoints",
    "check_levin_steckin",
    "check_ohlin",
    "decide_order",
    "kernel_gap",
    "ladder_mismatch",
    "sign_changes",
]
