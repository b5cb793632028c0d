"""Named measure families, quadrature rules and their closed-form conditions.

Every family turns a Hermite-Hadamard type inequality ``L(f) <= R(f)`` into
a pair of measures ``(lhs, rhs)`` with ``L(f) = integral f dlhs`` and
``R(f) = integral f drhs``, plus the degree of the test class.  The
closed-form criteria published for each family are evaluated separately
by :func:`eval_conditions`, so they can be checked against the generic
engine.

Node convention for the first- and second-order families: a term
``f(alpha*x + (1-alpha)*y)`` on ``[x, y] = [0, 1]`` sits at ``t = 1 - alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .measure import Interval, SignedMeasure, combine, mixture
from .numeric import Polynomial, Sign, exact, format_scalar, is_exact, sign, sqrt
from .ordering import OrderVerdict, Status, decide_order

UNIT = Interval(Fraction(0), Fraction(1))
SYMMETRIC = Interval(Fraction(-1), Fraction(1))
HALF = Fraction(1, 2)


class DomainError(ValueError):
    """A family parameter lies outside the family's declared domain."""


class ConstraintError(ValueError):
    """Coefficients of an expression do not meet a requested normalisation."""


def _lt(x, y) -> bool:
    return sign(y - x, 0.0) is Sign.POSITIVE


def _le(x, y) -> bool:
    return not _lt(y, x)


def _eq(x, y) -> bool:
    return sign(x - y, 0.0) is Sign.ZERO


def _need(ok: bool, message: str) -> None:
    if not ok:
        raise DomainError(message)


def _open01(params: Mapping, *names: str) -> None:
    for k in names:
        _need(_lt(0, params[k]) and _lt(params[k], 1), f"{k} must lie in (0, 1), got {format_scalar(params[k])}")


def _closed01(params: Mapping, *names: str) -> None:
    for k in names:
        _need(_le(0, params[k]) and _le(params[k], 1), f"{k} must lie in [0, 1], got {format_scalar(params[k])}")


# ---------------------------------------------------------------------------
# Standard measures on [0, 1]
# ---------------------------------------------------------------------------


def uniform01() -> SignedMeasure:
    return SignedMeasure.uniform(UNIT)


def midpoint01() -> SignedMeasure:
    return SignedMeasure.dirac(UNIT, HALF)


def trapezoid01(left=HALF) -> SignedMeasure:
    """``left*delta_0 + (1-left)*delta_1``."""
    return SignedMeasure.build(UNIT, [(Fraction(0), left), (Fraction(1), 1 - left)])


def triangular01() -> SignedMeasure:
    """Density ``4t`` then ``4(1-t)``: the law of the midpoint of two uniform points."""
    return SignedMeasure.build(UNIT, segments=[(0, HALF, Polynomial([0, 4])), (HALF, 1, Polynomial([4, -4]))])


def atoms01(pairs) -> SignedMeasure:
    return SignedMeasure.build(UNIT, [(exact(t), exact(w)) for t, w in pairs])


# ---------------------------------------------------------------------------
# Quadrature rules on [-1, 1]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    name: str
    measure: SignedMeasure
    exactness: int  # highest degree integrated exactly against the normalised Lebesgue measure


def _sym_rule(centre, pairs) -> SignedMeasure:
    atoms = [] if centre is None else [(Fraction(0), centre)]
    for node, w in pairs:
        atoms += [(-node, w), (node, w)]
    return SignedMeasure.build(SYMMETRIC, atoms)


def quadrature(name: str) -> QuadratureRule:
    """One of the seven rules ``C, G2, G3, L4, L5, S, I`` normalised to mass 1 on ``[-1, 1]``."""
    F = Fraction
    if name == "C":
        return QuadratureRule(name, _sym_rule(F(1, 3), [(sqrt(2) / 2, F(1, 3))]), 3)
    if name == "G2":
        return QuadratureRule(name, _sym_rule(None, [(sqrt(3) / 3, F(1, 2))]), 3)
    if name == "G3":
        return QuadratureRule(name, _sym_rule(F(4, 9), [(sqrt(15) / 5, F(5, 18))]), 5)
    if name == "L4":
        return QuadratureRule(name, _sym_rule(None, [(F(1), F(1, 12)), (sqrt(5) / 5, F(5, 12))]), 5)
    if name == "L5":
        return QuadratureRule(name, _sym_rule(F(16, 45), [(F(1), F(1, 20)), (sqrt(21) / 7, F(49, 180))]), 7)
    if name == "S":
        return QuadratureRule(name, _sym_rule(F(2, 3), [(F(1), F(1, 6))]), 3)
    if name == "I":
        return QuadratureRule(name, SignedMeasure.uniform(SYMMETRIC), 10**9)
    raise KeyError(f"unknown quadrature rule {name!r}; choose from {', '.join(QUADRATURE_NAMES)}")


QUADRATURE_NAMES = ("C", "G2", "G3", "L4", "L5", "S", "I")


def comparability_matrix(rules, n: int) -> dict[tuple[str, str], OrderVerdict]:
    """``decide_order(row, column, n)`` for every ordered pair of rules.

    ``rules`` holds names or :class:`QuadratureRule` objects.
    """
    rs = [quadrature(r) if isinstance(r, str) else r for r in rules]
    out = {}
    for i, r1 in enumerate(rs):
        for j, r2 in enumerate(rs):
            if j < i:
                out[(r1.name, r2.name)] = out[(r2.name, r1.name)].reversed()
            else:
                out[(r1.name, r2.name)] = decide_order(r1.measure, r2.measure, n)
    return out


# ---------------------------------------------------------------------------
# Antiderivative expressions
# ---------------------------------------------------------------------------


def expression_measure(terms, interval: Interval = UNIT) -> SignedMeasure:
    """Measure for ``sum c * G_k(t)`` where ``G_1 = F`` and ``G_2 = Phi``.

    ``terms`` holds ``(order, coefficient, t)`` with ``t`` a point of
    ``interval`` (taken as ``[0, 1]`` here and rescaled, so the expression is
    understood with the usual ``1/(y-x)^order`` factors).  The value does not
    depend on the choice of antiderivatives only if the constant parts
    cancel; otherwise ConstraintError.
    """
    terms = [(k, exact(c), exact(t)) for k, c, t in terms]
    for k, _, t in terms:
        if k not in (1, 2):
            raise ValueError("only first and second antiderivatives are supported")
        if not (_le(0, t) and _le(t, 1)):
            raise DomainError(f"node {format_scalar(t)} outside [0, 1]")
    f0 = sum((c for k, c, _ in terms if k == 1), Fraction(0)) + sum(
        (c * t for k, c, t in terms if k == 2), Fraction(0)
    )
    phi0 = sum((c for k, c, _ in terms if k == 2), Fraction(0))
    if not (_eq(f0, 0) and _eq(phi0, 0)):
        raise ConstraintError("coefficients leave a constant of integration behind")
    # density(s) = sum over nodes right of s of c for F terms and c*(t - s) for Phi terms
    cuts = _sorted_exact([t for _, _, t in terms] + [Fraction(0), Fraction(1)])
    segs = []
    for lo, hi in zip(cuts, cuts[1:]):
        dens = Polynomial()
        for k, c, t in terms:
            if _le(hi, t):
                dens = dens + (Polynomial([c]) if k == 1 else Polynomial([c * t, -c]))
        if not dens.is_zero():
            segs.append((lo, hi, dens))
    mu = SignedMeasure.build(UNIT, segments=segs)
    if interval != UNIT:
        from .measure import pushforward_affine

        mu = pushforward_affine(mu, UNIT, interval)
    return mu


def _sorted_exact(values):
    from functools import cmp_to_key

    def cmp(x, y):
        s = sign(x - y, 0.0)
        return 0 if s is Sign.ZERO else (-1 if s is Sign.NEGATIVE else 1)

    out = []
    for v in sorted(values, key=cmp_to_key(cmp)):
        if not out or not _eq(out[-1], v):
            out.append(v)
    return out


def deriv_expr_measure(weights, nodes, order: int = 1, normalize: bool = False) -> SignedMeasure:
    """Measure on ``[0, 1]`` for ``sum a_i G(alpha_i x + (1 - alpha_i) y)``.

    ``G`` is the first (``order=1``) or second (``order=2``) antiderivative of
    the test function; the expression carries the factor ``1/(y-x)^order``.
    With ``normalize`` the result must be a mean-type expression: mass 1 and
    barycentre 1/2, otherwise ConstraintError.
    """
    if len(weights) != len(nodes):
        raise ValueError("need one weight per node")
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    mu = expression_measure([(order, a, 1 - exact(al)) for a, al in zip(weights, nodes)])
    if normalize:
        if not _eq(mu.total_mass(), 1):
            raise ConstraintError(f"expression has mass {format_scalar(mu.total_mass())}, not 1")
        if not _eq(mu.moment(1), HALF):
            raise ConstraintError(f"expression has mean {format_scalar(mu.moment(1))}, not 1/2")
    return mu


def ta_measure(a) -> SignedMeasure:
    """Measure of ``(1 - a/2)(F(y)-F(x))/(y-x) + 2a (Phi(x) - 2Phi(mid) + Phi(y))/(y-x)^2``."""
    a = exact(a)
    return expression_measure(
        [(1, 1 - a / 2, 1), (1, -(1 - a / 2), 0), (2, 2 * a, 0), (2, -4 * a, HALF), (2, 2 * a, 1)]
    )


def s2_measure(alpha) -> SignedMeasure:
    """Measure of ``[(4-6al)F(y) + (2-6al)F(x)]/(y-x) - (6-12al)(Phi(y)-Phi(x))/(y-x)^2``."""
    al = exact(alpha)
    return expression_measure(
        [(1, 4 - 6 * al, 1), (1, 2 - 6 * al, 0), (2, -(6 - 12 * al), 1), (2, 6 - 12 * al, 0)]
    )


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    """Outcome of a published criterion.

    ``status``: ``satisfied`` (lhs <= rhs is claimed), ``reversed``
    (rhs <= lhs is claimed), ``violated`` (lhs <= rhs is claimed false) or
    ``not-stated`` (the criterion says nothing at this point).
    """

    status: str
    case: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status == "satisfied"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: Mapping = field(default_factory=dict)
    relation: str = ""
    degree: int = 1
    measure: SignedMeasure | None = None  # weight or law for Fejer / Fink


@dataclass(frozen=True)
class _Family:
    name: str
    cli: str
    defaults: Mapping
    relations: tuple
    build: Callable
    conditions: Callable
    iff: bool  # the published criterion is a characterisation
    summary: str


FAMILIES: dict[str, _Family] = {}


def _family(name, cli, defaults, relations, iff, summary):
    def deco(pair):
        build, conditions = pair()
        FAMILIES[name] = _Family(name, cli, defaults, tuple(relations), build, conditions, iff, summary)
        return pair

    return deco


def family_by_cli_name(cli: str) -> str:
    for f in FAMILIES.values():
        if f.cli == cli or f.name == cli:
            return f.name
    raise KeyError(f"unknown family {cli!r}")


def _resolve(spec: FamilySpec):
    try:
        fam = FAMILIES[spec.name]
    except KeyError:
        raise KeyError(f"unknown family {spec.name!r}") from None
    params = dict(fam.defaults)
    for k, v in spec.params.items():
        if k not in params:
            raise DomainError(f"{spec.name} has no parameter {k!r} (known: {', '.join(params)})")
        params[k] = v if k == "n" else exact(v)
    relation = spec.relation or fam.relations[0]
    if relation not in fam.relations:
        raise DomainError(f"{spec.name} relation must be one of {', '.join(fam.relations)}")
    return fam, _Params(spec.name, params), relation


class _Params(dict):
    """Parameter mapping whose unset (``None``) entries fail on first use, so
    relations that ignore a parameter do not need it."""

    def __init__(self, family: str, values: dict):
        super().__init__(values)
        self.family = family

    def __getitem__(self, key):
        v = super().__getitem__(key)
        if v is None:
            raise DomainError(f"{self.family} needs parameter {key!r}")
        return v


def make_family(spec: FamilySpec) -> tuple[SignedMeasure, SignedMeasure, int]:
    """``(lhs, rhs, degree)``: the family's inequality is ``lhs <= rhs``."""
    fam, params, relation = _resolve(spec)
    lhs, rhs = fam.build(params, relation, spec)
    return lhs, rhs, spec.degree


def eval_conditions(spec: FamilySpec) -> ClosedForm:
    """The published closed-form verdict for this parameter point; no measures are built."""
    fam, params, relation = _resolve(spec)
    return fam.conditions(params, relation, spec)


def is_characterisation(name: str) -> bool:
    return FAMILIES[name].iff


def agrees(closed: ClosedForm, verdict: OrderVerdict) -> bool:
    """Whether an engine verdict is consistent with a closed-form claim."""
    if closed.status == "satisfied":
        return verdict.status is Status.HOLDS
    if closed.status == "reversed":
        return verdict.status is Status.HOLDS_REVERSED or (
            verdict.status is Status.HOLDS and "agree" in verdict.note
        )
    if closed.status == "violated":
        return verdict.status in (Status.HOLDS_REVERSED, Status.INCOMPARABLE)
    return True


def _sat(case: str) -> ClosedForm:
    return ClosedForm("satisfied", case)


def _first_case(cases) -> ClosedForm:
    for label, ok in cases:
        if ok:
            return _sat(label)
    return ClosedForm("violated", "no case applies")


# -- classical bounds ----------------------------------------------------


@_family("ClassicHH", "classic-hh", {"a": 0, "b": 1}, ("midpoint-mean", "mean-trapezoid", "midpoint-trapezoid"),
         True, "f(mid) <= mean of f <= (f(a)+f(b))/2")
def _classic():
    def build(p, relation, spec):
        a, b = p["a"], p["b"]
        _need(_lt(a, b), "need a < b")
        iv = Interval(a, b)
        mid = SignedMeasure.dirac(iv, (a + b) / 2)
        uni = SignedMeasure.uniform(iv)
        trap = SignedMeasure.build(iv, [(a, HALF), (b, HALF)])
        return {"midpoint-mean": (mid, uni), "mean-trapezoid": (uni, trap), "midpoint-trapezoid": (mid, trap)}[relation]

    def conditions(p, relation, spec):
        _need(_lt(p["a"], p["b"]), "need a < b")
        return _sat("classical")

    return build, conditions


@_family("Fejer", "fejer", {"p": HALF, "a": 0, "b": 1}, ("left", "right"), False,
         "P0 f(pa+qb) <= integral f dmu <= P0 (p f(a) + q f(b))")
def _fejer():
    def weight(p, spec):
        a, b = p["a"], p["b"]
        _need(_lt(a, b), "need a < b")
        _open01(p, "p")
        mu = spec.measure if spec.measure is not None else SignedMeasure.uniform(Interval(a, b))
        _need(mu.interval == Interval(a, b), "weight measure must live on [a, b]")
        _need(mu.is_nonnegative(), "weight measure must be nonnegative")
        return mu

    def build(p, relation, spec):
        mu = weight(p, spec)
        a, b, pp = p["a"], p["b"], p["p"]
        P0 = mu.total_mass()
        iv = mu.interval
        if relation == "left":
            return SignedMeasure.dirac(iv, pp * a + (1 - pp) * b, P0), mu
        return mu, SignedMeasure.build(iv, [(a, pp * P0), (b, (1 - pp) * P0)])

    def conditions(p, relation, spec):
        mu = weight(p, spec)
        a, b, pp = p["a"], p["b"], p["p"]
        c = pp * a + (1 - pp) * b
        P0 = mu.total_mass()
        below = mu.cdf()(c)
        checks = [
            ("(i)", _le(below, pp * P0)),
            ("(ii)", _le(P0 - below, (1 - pp) * P0)),
            ("(iii)", _eq(mu.moment(1), c * P0)),
        ]
        failed = [label for label, ok in checks if not ok]
        if failed:
            return ClosedForm("not-stated", "fails " + ", ".join(failed))
        return _sat("(i)-(iii)")

    return build, conditions


@_family("Fink", "fink", {"a": 0, "b": 1}, ("left", "right"), True,
         "f(m) <= E f(X) <= ((b-m) f(a) + (m-a) f(b))/(b-a)")
def _fink():
    def law(p, spec):
        a, b = p["a"], p["b"]
        _need(_lt(a, b), "need a < b")
        mu = spec.measure if spec.measure is not None else SignedMeasure.uniform(Interval(a, b))
        _need(mu.interval == Interval(a, b), "law must live on [a, b]")
        _need(mu.is_nonnegative() and _eq(mu.total_mass(), 1), "law must be a probability measure")
        return mu

    def build(p, relation, spec):
        mu = law(p, spec)
        a, b = p["a"], p["b"]
        m = mu.moment(1)
        if relation == "left":
            return SignedMeasure.dirac(mu.interval, m), mu
        return mu, SignedMeasure.build(mu.interval, [(a, (b - m) / (b - a)), (b, (m - a) / (b - a))])

    def conditions(p, relation, spec):
        law(p, spec)
        return _sat("any law")

    return build, conditions


BRENNER_ALZER_LINKS = (
    "X-Y", "Y-W", "W-Z", "X-xi1", "xi1-xin", "xin-Y", "Y-eta", "eta-W", "W-lambda", "lambda-Z",
    "X-Y13", "Y13-W13", "W13-Z",
)


@_family("BrennerAlzer", "brenner-alzer",
         {"p": HALF, "q": HALF, "y": Fraction(1, 4), "a": 0, "b": 1, "alpha": HALF, "beta": HALF, "n": 2},
         BRENNER_ALZER_LINKS, True, "refinements of f(A) <= mean over [A-y, A+y] <= (p f(a) + q f(b))/(p+q)")
def _brenner_alzer():
    def setup(p, relation):
        a, b, pp, qq, y = p["a"], p["b"], p["p"], p["q"], p["y"]
        _need(_lt(a, b), "need a < b")
        _need(_lt(0, pp) and _lt(0, qq), "p and q must be positive")
        bound = (b - a) * min(pp, qq, key=float) / (pp + qq)
        _need(_lt(0, y) and _le(y, bound), f"need 0 < y <= (b-a)*min(p,q)/(p+q) = {format_scalar(bound)}")
        _closed01(p, "alpha", "beta")
        n = int(p["n"])
        _need(n >= 1, "n must be a positive integer")
        if "lambda" in relation:
            _need(_eq(pp + qq, 1), "the lambda link is only stated here for p + q = 1")
        if relation.endswith("13") or relation == "W13-Z":
            al = p["alpha"]
            _need(_lt(0, al) and _lt(al, 1), "alpha must lie in (0, 1) for the one-sided variant")
            _need(_le(al / (1 - al) * y, bound), "need alpha/(1-alpha)*y <= (b-a)*min(p,q)/(p+q)")
        return a, b, pp, qq, y, n

    def build(p, relation, spec):
        a, b, pp, qq, y, n = setup(p, relation)
        iv = Interval(a, b)
        A = (pp * a + qq * b) / (pp + qq)
        al, be = p["alpha"], p["beta"]

        def box(lo, hi, mass):
            return [] if not _lt(lo, hi) or _eq(mass, 0) else [(lo, hi, Polynomial([mass / (hi - lo)]))]

        def xi(k):
            atoms = []
            for j in range(1, k + 1):
                atoms += [(A - y + j * al * y / k, al / (2 * k)), (A + y - j * al * y / k, al / (2 * k))]
            return SignedMeasure.build(iv, atoms, box(A - (1 - al) * y, A + (1 - al) * y, 1 - al))

        X = SignedMeasure.dirac(iv, A)
        Y = SignedMeasure.uniform(iv, A - y, A + y)
        W = SignedMeasure.build(iv, [(A - y, HALF), (A + y, HALF)])
        Z = SignedMeasure.build(iv, [(a, pp / (pp + qq)), (b, qq / (pp + qq))])
        measures = {"X": X, "Y": Y, "W": W, "Z": Z}
        if relation in ("X-xi1", "xi1-xin", "xin-Y"):
            measures["xi1"], measures["xin"] = xi(1), xi(n)
        if relation in ("Y-eta", "eta-W"):
            measures["eta"] = SignedMeasure.build(iv, [(A - y, be / 2), (A + y, be / 2)], box(A - y, A + y, 1 - be))
        if "lambda" in relation:
            c = min(b - (A + y), (A - y) - a, key=float)
            g = abs(HALF - pp)
            measures["lambda"] = SignedMeasure.build(
                iv, [(A - y - c, HALF - g), (A + y + c, HALF - g), (A - y, g), (A + y, g)]
            )
        if relation in ("X-Y13", "Y13-W13", "W13-Z"):
            right = A + al / (1 - al) * y
            measures["Y13"] = SignedMeasure.build(iv, segments=box(A - y, A, al) + box(A, right, 1 - al))
            measures["W13"] = SignedMeasure.build(iv, [(A - y, al), (right, 1 - al)])
        left, right_name = relation.split("-")
        return measures[left], measures[right_name]

    def conditions(p, relation, spec):
        setup(p, relation)
        return _sat("chain link " + relation)

    return build, conditions


@_family("Popoviciu", "popoviciu", {"x": 0, "y": HALF, "z": 1}, ("midpoints-vs-points",), True,
         "2/3 sum f(pair midpoints) <= (f(x)+f(y)+f(z))/3 + f(mean)")
def _popoviciu():
    def build(p, relation, spec):
        x, y, z = p["x"], p["y"], p["z"]
        _need(_le(x, y) and _le(y, z) and _lt(x, z), "need x <= y <= z and x < z")
        iv = Interval(x, z)
        third = Fraction(1, 3)
        lhs = SignedMeasure.build(iv, [((x + y) / 2, third), ((y + z) / 2, third), ((z + x) / 2, third)])
        sixth = Fraction(1, 6)
        rhs = SignedMeasure.build(iv, [(x, sixth), (y, sixth), (z, sixth), ((x + y + z) / 3, HALF)])
        return lhs, rhs

    def conditions(p, relation, spec):
        _need(_le(p["x"], p["y"]) and _le(p["y"], p["z"]) and _lt(p["x"], p["z"]), "need x <= y <= z and x < z")
        return _sat("any triple")

    return build, conditions


# -- two- to four-point rules against the mean ------------------------------


@_family("SzostokLeft2", "szostok-left2", {"a": None, "alpha": None, "beta": None}, ("vs-mean", "symmetric-vs-mean"),
         True, "a f(alpha x+(1-alpha)y) + (1-a) f(beta x+(1-beta)y) <= mean of f (beta defaults to the value "
         "fixed by the mean condition); the symmetric relation is "
         "a f(alpha x+..) + (1-2a) f(mid) + a f((1-alpha)x+..) <= mean of f")
def _left2():
    def check(p, relation):
        if relation == "symmetric-vs-mean":
            # a > 1/2 is allowed: the midpoint weight 1 - 2a turns negative
            _open01(p, "a")
            _need(_lt(HALF, p["alpha"]) and _lt(p["alpha"], 1), "need 1/2 < alpha < 1")
            return
        if dict.get(p, "beta") is None:
            # the mean condition a alpha + (1 - a) beta = 1/2 fixes beta
            _need(_lt(p["a"], 1), "beta can only be inferred for a < 1")
            p["beta"] = (HALF - p["a"] * p["alpha"]) / (1 - p["a"])
        _closed01(p, "a", "alpha", "beta")
        _need(_lt(p["beta"], p["alpha"]), "need alpha > beta")

    def build(p, relation, spec):
        check(p, relation)
        if relation == "symmetric-vs-mean":
            a, al = p["a"], p["alpha"]
            return atoms01([(1 - al, a), (HALF, 1 - 2 * a), (al, a)]), uniform01()
        a, al, be = p["a"], p["alpha"], p["beta"]
        return atoms01([(1 - al, a), (1 - be, 1 - a)]), uniform01()

    def conditions(p, relation, spec):
        check(p, relation)
        if relation == "symmetric-vs-mean":
            ok = _le(p["a"], 2 - 2 * p["alpha"])
            return _sat("a <= 2 - 2 alpha") if ok else ClosedForm("violated", "a > 2 - 2 alpha")
        a, al, be = p["a"], p["alpha"], p["beta"]
        if not _eq(a * al + (1 - a) * be, HALF):
            return ClosedForm("violated", "mean condition")
        return _first_case([
            ("(i)", _le(a + al, 1)),
            ("(ii)", _le(1, a + be)),
            ("(iii)", _lt(1, a + al) and _lt(a + be, 1) and _le(a + 2 * al, 2)),
        ])

    return build, conditions


@_family("SzostokRight3", "szostok-right3", {"a": None, "b": None, "c": None, "alpha": None}, ("mean-vs",), True,
         "mean of f <= a f(x) + b f(alpha x+(1-alpha)y) + c f(y)")
def _right3():
    def check(p):
        _open01(p, "a", "b", "c", "alpha")
        _need(_eq(p["a"] + p["b"] + p["c"], 1), "need a + b + c = 1")

    def build(p, relation, spec):
        check(p)
        return uniform01(), atoms01([(0, p["a"]), (1 - p["alpha"], p["b"]), (1, p["c"])])

    def conditions(p, relation, spec):
        check(p)
        a, b, c, al = p["a"], p["b"], p["c"], p["alpha"]
        if not _eq(b * (1 - al) + c, HALF):
            return ClosedForm("violated", "mean condition")
        return _first_case([
            ("(i)", _le(1, a + al)),
            ("(ii)", _le(a + b + al, 1)),
            ("(iii)", _lt(a + al, 1) and _lt(1, a + b + al) and _le(1, 2 * a + al)),
        ])

    return build, conditions


@_family("SzostokLeft3", "szostok-left3",
         {"a1": None, "a2": None, "a3": None, "alpha1": None, "alpha2": None, "alpha3": None}, ("vs-mean",), True,
         "sum_{i<=3} a_i f(alpha_i x + (1-alpha_i) y) <= mean of f")
def _left3():
    def check(p):
        _open01(p, "a1", "a2", "a3", "alpha1", "alpha2", "alpha3")
        _need(_eq(p["a1"] + p["a2"] + p["a3"], 1), "need a1 + a2 + a3 = 1")
        _need(_lt(p["alpha2"], p["alpha1"]) and _lt(p["alpha3"], p["alpha2"]), "need alpha1 > alpha2 > alpha3")

    def build(p, relation, spec):
        check(p)
        return atoms01([(1 - p[f"alpha{i}"], p[f"a{i}"]) for i in (1, 2, 3)]), uniform01()

    def conditions(p, relation, spec):
        check(p)
        a1, a2, a3 = p["a1"], p["a2"], p["a3"]
        u1, u2, u3 = (1 - p[f"alpha{i}"] for i in (1, 2, 3))
        al3 = p["alpha3"]
        if not _eq(a1 * u1 + a2 * u2 + a3 * u3, HALF):
            return ClosedForm("violated", "mean condition")
        s = a1 + a2
        return _first_case([
            ("(i)", _le(a1, u1) and _le(u3, s)),
            ("(ii)", _le(u2, a1) and _le(u3, s)),
            ("(iii)", _le(a1, u1) and _le(s, u2)),
            ("(iv)", _le(a1, u1) and _lt(u2, s) and _lt(s, u3) and _le(a3, 2 * al3)),
            ("(v)", _le(u2, a1) and _lt(s, u3) and _le(a3, 2 * al3)),
            ("(vi)", _lt(u1, a1) and _le(s, u2) and _le(a1 / 2, u1)),
            ("(vii)", _lt(u1, a1) and _lt(a1, u2) and _le(u3, s) and _le(a1 / 2, u1)),
            ("(viii)", _lt(u1, a1) and _lt(a1, u2) and _lt(u2, s) and _lt(s, u3) and _le(a1 / 2, u1)
             and _le(s * s, 2 * a1 * u1 + 2 * a2 * u2)),
        ])

    return build, conditions


@_family("SzostokRight4", "szostok-right4",
         {"a1": None, "a2": None, "a3": None, "a4": None, "alpha2": None, "alpha3": None}, ("mean-vs",), True,
         "mean of f <= a1 f(x) + a2 f(alpha2 x+(1-alpha2)y) + a3 f(alpha3 x+(1-alpha3)y) + a4 f(y)")
def _right4():
    def check(p):
        _open01(p, "a1", "a2", "a3", "a4", "alpha2", "alpha3")
        _need(_eq(p["a1"] + p["a2"] + p["a3"] + p["a4"], 1), "need a1 + a2 + a3 + a4 = 1")
        _need(_lt(p["alpha3"], p["alpha2"]), "need alpha2 > alpha3")

    def build(p, relation, spec):
        check(p)
        return uniform01(), atoms01(
            [(0, p["a1"]), (1 - p["alpha2"], p["a2"]), (1 - p["alpha3"], p["a3"]), (1, p["a4"])]
        )

    def conditions(p, relation, spec):
        check(p)
        a1, a2, a3, a4 = (p[f"a{i}"] for i in (1, 2, 3, 4))
        al2, al3 = p["alpha2"], p["alpha3"]
        u2, u3 = 1 - al2, 1 - al3
        if not _eq(a2 * u2 + a3 * u3 + a4, HALF):
            return ClosedForm("violated", "mean condition")
        s2, s3 = a1 + a2, a1 + a2 + a3
        return _first_case([
            ("(i)", _le(u2, a1) and _le(u3, s2)),
            ("(ii)", _le(s2, u2) and _le(s3, u3)),
            ("(iii)", _le(u2, a1) and _le(s3, u3)),
            ("(iv)", _le(u2, a1) and _lt(s2, u3) and _lt(u3, s3) and _le(al3, 2 * a4)),
            ("(v)", _le(s2, u2) and _lt(u3, s3) and _le(al3, 2 * a4)),
            ("(vi)", _lt(a1, u2) and _le(u3, s2) and _le(1, 2 * a1 + al2)),
            ("(vii)", _lt(a1, u2) and _lt(u2, s2) and _le(s3, u3) and _le(1, 2 * a1 + al2)),
            ("(viii)", _lt(a1, u2) and _lt(u2, s2) and _lt(s2, u3) and _lt(u3, s3) and _le(1, 2 * a1 + al2)
             and _le(u3 * u3, 2 * a1 * u3 + 2 * a2 * (al2 - al3))),
        ])

    return build, conditions


@_family("QuadVsQuad", "quad-vs-quad",
         {"a": None, "alpha1": None, "alpha2": None, "b1": None, "b2": None, "b3": None, "beta": HALF},
         ("two-vs-three",), True,
         "a f(alpha1 x+..) + (1-a) f(alpha2 x+..) <= b1 f(x) + b2 f(beta x+(1-beta)y) + b3 f(y)")
def _quad_vs_quad():
    def check(p):
        _open01(p, "a", "alpha1", "alpha2", "beta", "b1", "b2", "b3")
        _need(_eq(p["b1"] + p["b2"] + p["b3"], 1), "need b1 + b2 + b3 = 1")
        _need(_lt(p["alpha2"], p["alpha1"]), "need alpha1 > alpha2")

    def build(p, relation, spec):
        check(p)
        lhs = atoms01([(1 - p["alpha1"], p["a"]), (1 - p["alpha2"], 1 - p["a"])])
        rhs = atoms01([(0, p["b1"]), (1 - p["beta"], p["b2"]), (1, p["b3"])])
        return lhs, rhs

    def conditions(p, relation, spec):
        check(p)
        a, al1, al2, be = p["a"], p["alpha1"], p["alpha2"], p["beta"]
        b1, b2, b3 = p["b1"], p["b2"], p["b3"]
        if not _eq(b2 * (1 - be) + b3, a * (1 - al1) + (1 - a) * (1 - al2)):
            return ClosedForm("violated", "mean condition")
        return _first_case([
            ("(i)", _le(a, b1)),
            ("(ii)", _le(b1 + b2, a)),
            ("(iii)", _le(be, al2)),
            ("(iv)", _lt(b1, a) and _lt(a, b1 + b2) and _lt(al2, be) and _le((al1 - be) * (a - b1), (1 - al1) * b1)),
        ])

    return build, conditions


# -- first-order difference expressions ----------------------------------------


def deriv4_weights(a1, alpha2, alpha3) -> tuple:
    """Weights ``(a1, a2, a3, a4)`` at ``alpha = (1, alpha2, alpha3, 0)`` with zero sum, mass 1 and mean 1/2."""
    a1, al2, al3 = exact(a1), exact(alpha2), exact(alpha3)
    # partial sums s1, s2, s3: s1(al2-1) + s2(al3-al2) - s3 al3 = 1 and the same with squares
    r1 = 1 - a1 * (al2 - 1)
    r2 = 1 - a1 * (al2 * al2 - 1)
    m11, m12 = al3 - al2, -al3
    m21, m22 = al3 * al3 - al2 * al2, -al3 * al3
    det = m11 * m22 - m12 * m21
    s2 = (r1 * m22 - m12 * r2) / det
    s3 = (m11 * r2 - m21 * r1) / det
    return a1, s2 - a1, s3 - s2, -s3


@_family("DerivExpr4", "deriv-expr4", {"a1": None, "alpha2": None, "alpha3": None},
         ("vs-mean", "midpoint-vs", "vs-trapezoid"), False,
         "sum_{i<=4} a_i F(alpha_i x + (1-alpha_i) y)/(y-x) with alpha = (1, alpha2, alpha3, 0)")
def _deriv4():
    def check(p):
        _need(_lt(0, p["alpha3"]) and _lt(p["alpha3"], p["alpha2"]) and _lt(p["alpha2"], 1),
              "need 1 > alpha2 > alpha3 > 0")

    def measure(p):
        check(p)
        w = deriv4_weights(p["a1"], p["alpha2"], p["alpha3"])
        return deriv_expr_measure(w, (1, p["alpha2"], p["alpha3"], 0))

    def build(p, relation, spec):
        mu = measure(p)
        if relation == "vs-mean":
            return mu, uniform01()
        if relation == "midpoint-vs":
            return midpoint01(), mu
        return mu, trapezoid01()

    def conditions(p, relation, spec):
        check(p)
        a1, a2, _, _ = deriv4_weights(p["a1"], p["alpha2"], p["alpha3"])
        if relation == "vs-mean":
            if _lt(-1, a1):
                return _sat("(i)")
            if _lt(a1, -1):
                return ClosedForm("reversed", "(ii)")
            return ClosedForm("not-stated", "a1 = -1")
        if relation == "midpoint-vs":
            if _lt(-1, a1) and _le(a1, 0):
                return _sat("(iii)")
            if _lt(a1, -1):
                return _sat("(ii)")
            return ClosedForm("not-stated")
        if _lt(-1, a1):
            return _sat("(i)")
        if _lt(a1, -1) and _le(a1 + a2, 0):
            return _sat("(iv)")
        return ClosedForm("not-stated")

    return build, conditions


def sym_weight(a, alpha):
    """Inner weight ``b`` making ``a F(0) + b F(1-alpha) - b F(alpha) - a F(1)`` a mass-one expression."""
    return (1 + exact(a)) / (1 - 2 * exact(alpha))


@_family("DerivExprSym", "deriv-expr-sym", {"a": None, "alpha": None}, ("vs-midpoint", "vs-trapezoid"), True,
         "[a F(x) + b F(alpha x+(1-alpha)y) - b F((1-alpha)x+alpha y) - a F(y)]/(y-x), mass normalised")
def _deriv_sym():
    def check(p, relation):
        _need(_lt(0, p["alpha"]) and _lt(p["alpha"], HALF), "alpha must lie in (0, 1/2)")
        a, b = p["a"], sym_weight(p["a"], p["alpha"])
        if relation == "vs-midpoint":
            _need(_lt(0, a), "the midpoint comparison is stated for a > 0")
        else:
            _need(_lt(a, -1), "the trapezoid comparison is stated for a < -1")
        return a, b

    def build(p, relation, spec):
        a, b = check(p, relation)
        al = p["alpha"]
        mu = deriv_expr_measure((a, b, -b, -a), (1, al, 1 - al, 0))
        return (mu, midpoint01()) if relation == "vs-midpoint" else (mu, trapezoid01())

    def conditions(p, relation, spec):
        a, _ = check(p, relation)
        # both measures are symmetric about 1/2, so the prefix-integral test
        # reduces to its value at 1/2, which is linear in 2 alpha (1 + a)
        t = 2 * p["alpha"] * (1 + a)
        if relation == "vs-midpoint":
            return _sat("(i)") if _le(1, t) else ClosedForm("violated", "(i)")
        return _sat("(ii)") if _le(-1, t) else ClosedForm("violated", "(ii)")

    return build, conditions


# -- second-order expressions ----------------------------------------------------


@_family("TaOperator", "ta-operator", {"a": None, "gamma": Fraction(2, 3), "lam": Fraction(3, 4)},
         ("vs-mean", "midpoint-vs", "vs-midpoint", "vs-trapezoid", "triangular-vs-mean-midpoint",
          "mean-vs-triangular-trapezoid"),
         True, "T_a f = (1-a/2)(F(y)-F(x))/(y-x) + 2a(Phi(x)-2Phi(mid)+Phi(y))/(y-x)^2")
def _ta():
    def build(p, relation, spec):
        if relation == "triangular-vs-mean-midpoint":
            g = p["gamma"]
            _closed01(p, "gamma")
            return triangular01(), mixture(UNIT, [(g, uniform01()), (1 - g, midpoint01())])
        if relation == "mean-vs-triangular-trapezoid":
            lam = p["lam"]
            _closed01(p, "lam")
            return uniform01(), mixture(UNIT, [(lam, triangular01()), (1 - lam, trapezoid01())])
        T = ta_measure(p["a"])
        return {
            "vs-mean": (T, uniform01()),
            "midpoint-vs": (midpoint01(), T),
            "vs-midpoint": (T, midpoint01()),
            "vs-trapezoid": (T, trapezoid01()),
        }[relation]

    def conditions(p, relation, spec):
        a = p["a"] if relation in ("vs-mean", "midpoint-vs", "vs-midpoint", "vs-trapezoid") else None
        if relation == "vs-mean":
            if _le(0, a):
                return _sat("a >= 0")
            return ClosedForm("reversed", "a <= 0")
        if relation == "midpoint-vs":
            if _le(a, 2):
                return _sat("a <= 2")
            if _le(6, a):
                return ClosedForm("reversed", "a >= 6")
            return ClosedForm("violated", "2 < a < 6: not comparable")
        if relation == "vs-midpoint":
            if _le(6, a):
                return _sat("a >= 6")
            if _le(a, 2):
                return ClosedForm("reversed", "a <= 2")
            return ClosedForm("violated", "2 < a < 6: not comparable")
        if relation == "vs-trapezoid":
            if _le(-6, a):
                return _sat("a >= -6")
            return ClosedForm("violated", "a < -6: not comparable")
        if relation == "triangular-vs-mean-midpoint":
            _closed01(p, "gamma")
            g = p["gamma"]
            # the mixture grows in convex order with gamma, so the bound at 2/3
            # carries over to every larger gamma; only gamma < 2/3 can fail
            if _le(Fraction(2, 3), g):
                return _sat("gamma >= 2/3")
            return ClosedForm("violated", "gamma < 2/3")
        _closed01(p, "lam")
        lam = p["lam"]
        # the mixture shrinks in convex order as lambda grows
        if _le(lam, Fraction(3, 4)):
            return _sat("lambda <= 3/4")
        return ClosedForm("violated", "lambda > 3/4")

    return build, conditions


@_family("S2Alpha", "s2-alpha", {"alpha": None}, ("vs-trapezoid", "node-vs"), True,
         "S2_alpha against alpha f(x) + (1-alpha) f(y) and f(alpha x + (1-alpha) y)")
def _s2():
    def build(p, relation, spec):
        _closed01(p, "alpha")
        al = p["alpha"]
        S = s2_measure(al)
        if relation == "vs-trapezoid":
            return S, trapezoid01(al)
        return SignedMeasure.dirac(UNIT, 1 - al), S

    def conditions(p, relation, spec):
        _closed01(p, "alpha")
        al = p["alpha"]
        if relation == "vs-trapezoid":
            return _sat("all alpha")
        if _le(Fraction(1, 3), al) and _le(al, Fraction(2, 3)):
            return _sat("alpha in [1/3, 2/3]")
        return ClosedForm("violated", "alpha outside [1/3, 2/3]: incomparable")

    return build, conditions


@_family("F5ThreePoint", "f5-three-point", {"w": Fraction(1, 6)}, ("triangular-vs",), False,
         "double-integral mean <= w f(x) + (1-2w) f(mid) + w f(y)")
def _f5():
    def build(p, relation, spec):
        w = p["w"]
        _need(_le(0, w) and _le(w, HALF), "need 0 <= w <= 1/2")
        return triangular01(), atoms01([(0, w), (HALF, 1 - 2 * w), (1, w)])

    def conditions(p, relation, spec):
        w = p["w"]
        _need(_le(0, w) and _le(w, HALF), "need 0 <= w <= 1/2")
        if _eq(w, Fraction(1, 6)):
            return _sat("w = 1/6")
        if _lt(w, Fraction(1, 6)):
            return ClosedForm("violated", "w < 1/6")
        return ClosedForm("not-stated")

    return build, conditions


FAMILY_NAMES = tuple(FAMILIES)


__all__ = [
    "BRENNER_ALZER_LINKS",
    "ClosedForm",
    "ConstraintError",
    "DomainError",
    "FAMILIES",
    "FAMILY_NAMES",
    "FamilySpec",
    "QUADRATURE_NAMES",
    "QuadratureRule",
    "agrees",
    "comparability_matrix",
    "deriv4_weights",
    "deriv_expr_measure",
    "eval_conditions",
    "expression_measure",
    "family_by_cli_name",
    "is_characterisation",
    "make_family",
    "quadrature",
    "s2_measure",
    "sym_weight",
    "ta_measure",
    "triangular01",
    "uniform01",
]
