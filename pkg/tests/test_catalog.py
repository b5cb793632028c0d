import random
from fractions import Fraction

import pytest
from family_samples import SWEEPS, brenner_alzer, sample

from cxorder.catalog import (
    BRENNER_ALZER_LINKS,
    UNIT,
    QUADRATURE_NAMES,
    ConstraintError,
    DomainError,
    FamilySpec,
    agrees,
    comparability_matrix,
    deriv4_weights,
    deriv_expr_measure,
    eval_conditions,
    expression_measure,
    is_characterisation,
    make_family,
    midpoint01,
    quadrature,
    trapezoid01,
    triangular01,
    uniform01,
)
from cxorder.measure import Interval, SignedMeasure
from cxorder.numeric import Polynomial
from cxorder.ordering import Status, decide_order

F = Fraction
HALF = F(1, 2)


def verdict(spec):
    lhs, rhs, n = make_family(spec)
    return decide_order(lhs, rhs, n)


def two_point_vs_three(alpha, outer):
    # symmetric two-point rule against outer f(x) + (1 - 2 outer) f(mid) + outer f(y)
    return FamilySpec(
        "QuadVsQuad",
        {"a": HALF, "alpha1": alpha, "alpha2": 1 - alpha, "b1": outer, "b2": 1 - 2 * outer, "b3": outer, "beta": HALF},
    )


@pytest.mark.parametrize("relation", ["midpoint-mean", "mean-trapezoid", "midpoint-trapezoid"])
def test_classic_chain_holds(relation):
    spec = FamilySpec("ClassicHH", {"a": -2, "b": 3}, relation)
    assert eval_conditions(spec).satisfied
    assert verdict(spec).status is Status.HOLDS


def test_popoviciu_masses_and_verdict():
    spec = FamilySpec("Popoviciu", {"x": 0, "y": F(1, 5), "z": 1})
    lhs, rhs, _ = make_family(spec)
    assert lhs.total_mass() == rhs.total_mass() == 1
    assert verdict(spec).status is Status.HOLDS


def test_fejer_uniform_weight():
    assert verdict(FamilySpec("Fejer", {"p": HALF}, "left")).status is Status.HOLDS
    assert verdict(FamilySpec("Fejer", {"p": HALF}, "right")).status is Status.HOLDS
    # a skewed node makes the uniform weight fail the barycentre condition
    spec = FamilySpec("Fejer", {"p": F(1, 3)}, "left")
    assert eval_conditions(spec).status == "not-stated"
    assert verdict(spec).status is Status.INCOMPARABLE


def test_fink_with_explicit_law():
    # half an atom at 1/5, half spread evenly over [1/2, 1]
    law = SignedMeasure.build(UNIT, [(F(1, 5), HALF)], [(HALF, F(1), Polynomial([F(1)]))])
    for relation in ("left", "right"):
        assert verdict(FamilySpec("Fink", {}, relation, measure=law)).status is Status.HOLDS


def test_ta_measure_at_a_four():
    lhs, rhs, n = make_family(FamilySpec("TaOperator", {"a": 4}, "vs-mean"))
    assert n == 1
    assert lhs.total_mass() == 1 and lhs.moment(1) == HALF
    assert rhs == uniform01()


def test_szostok_symmetric_boundary():
    spec = FamilySpec("SzostokLeft2", {"a": HALF, "alpha": F(3, 4)}, "symmetric-vs-mean")
    assert eval_conditions(spec).satisfied
    assert verdict(spec).status is Status.HOLDS
    past = FamilySpec("SzostokLeft2", {"a": HALF + F(1, 1000), "alpha": F(3, 4)}, "symmetric-vs-mean")
    assert eval_conditions(past).status == "violated"
    assert verdict(past).status is Status.INCOMPARABLE


@pytest.mark.parametrize("outer, bound", [(F(1, 3), F(5, 6)), (F(1, 6), F(2, 3))])
def test_two_point_vs_three_point_thresholds(outer, bound):
    for alpha in (F(51, 100), bound):
        spec = two_point_vs_three(alpha, outer)
        assert eval_conditions(spec).satisfied
        assert verdict(spec).status is Status.HOLDS
    for alpha in (bound + F(1, 100), F(99, 100)):
        spec = two_point_vs_three(alpha, outer)
        assert eval_conditions(spec).status == "violated"
        assert verdict(spec).status is Status.INCOMPARABLE


@pytest.mark.parametrize(
    "relation, a, status",
    [
        ("vs-mean", F(1, 10), Status.HOLDS),
        ("vs-mean", F(-1, 10), Status.HOLDS_REVERSED),
        ("midpoint-vs", 2, Status.HOLDS),
        ("midpoint-vs", 6, Status.HOLDS_REVERSED),
        ("midpoint-vs", 4, Status.INCOMPARABLE),
        ("vs-trapezoid", -6, Status.HOLDS),
        ("vs-trapezoid", -7, Status.INCOMPARABLE),
    ],
)
def test_ta_operator_branches(relation, a, status):
    spec = FamilySpec("TaOperator", {"a": a}, relation)
    v = verdict(spec)
    assert v.status is status
    assert agrees(eval_conditions(spec), v)


@pytest.mark.parametrize(
    "key, value, status",
    [
        ("gamma", F(2, 3), Status.HOLDS),
        ("gamma", F(2, 3) - F(1, 100), Status.INCOMPARABLE),
        ("gamma", F(2, 3) + F(1, 100), Status.HOLDS),
        ("lam", F(3, 4), Status.HOLDS),
        ("lam", F(3, 4) + F(1, 100), Status.INCOMPARABLE),
    ],
)
def test_double_integral_mean_mixtures(key, value, status):
    relation = "triangular-vs-mean-midpoint" if key == "gamma" else "mean-vs-triangular-trapezoid"
    spec = FamilySpec("TaOperator", {key: value}, relation)
    v = verdict(spec)
    assert v.status is status
    assert agrees(eval_conditions(spec), v)


@pytest.mark.parametrize(
    "w, status, closed",
    [
        (F(1, 6), Status.HOLDS, "satisfied"),
        (F(1, 6) - F(1, 100), Status.INCOMPARABLE, "violated"),
        (F(1, 6) + F(1, 100), Status.HOLDS, "not-stated"),
    ],
)
def test_f5_three_point(w, status, closed):
    spec = FamilySpec("F5ThreePoint", {"w": w})
    assert verdict(spec).status is status
    assert eval_conditions(spec).status == closed


def test_quadrature_masses_and_moments():
    for name in QUADRATURE_NAMES:
        assert quadrature(name).measure.total_mass() == 1
    assert quadrature("S").measure.moment(2) == F(1, 3)
    assert quadrature("I").measure.moment(2) == F(1, 3)


@pytest.mark.parametrize("name, degree", [("G2", 3), ("C", 3), ("S", 3), ("G3", 5), ("L4", 5), ("L5", 7)])
def test_quadrature_exactness(name, degree):
    mu, ref = quadrature(name).measure, quadrature("I").measure
    assert quadrature(name).exactness == degree
    for k in range(degree + 1):
        assert mu.moment(k) == ref.moment(k)
    assert mu.moment(degree + 1) != ref.moment(degree + 1)


def test_unknown_quadrature():
    with pytest.raises(KeyError):
        quadrature("G7")


def test_comparability_matrix_diagonal_and_antisymmetry():
    m = comparability_matrix(["G2", "C", "S"], 3)
    for name in ("G2", "C", "S"):
        assert m[(name, name)].status is Status.HOLDS
    assert m[("G2", "S")].status is Status.HOLDS
    assert m[("S", "G2")].status is Status.HOLDS_REVERSED


@pytest.mark.parametrize("family, relation, sampler", SWEEPS, ids=[f"{f}-{r}" for f, r, _ in SWEEPS])
def test_closed_form_matches_engine(family, relation, sampler):
    assert is_characterisation(family)
    for seed in range(50):
        spec = FamilySpec(family, sample(sampler, seed), relation)
        closed, v = eval_conditions(spec), verdict(spec)
        assert agrees(closed, v), (spec.params, closed, v.status)


def test_brenner_alzer_links_hold():
    rng = random.Random(2024)
    checked = 0
    for _ in range(20):
        params = brenner_alzer(rng)
        for link in BRENNER_ALZER_LINKS:
            if "lambda" in link and params["p"] + params["q"] != 1:
                continue
            spec = FamilySpec("BrennerAlzer", params, link)
            assert eval_conditions(spec).satisfied
            assert verdict(spec).status is Status.HOLDS, (params, link)
            checked += 1
    assert checked > 200


def test_brenner_alzer_inadmissible_y():
    params = {"p": HALF, "q": HALF, "y": F(3, 4)}
    with pytest.raises(DomainError):
        make_family(FamilySpec("BrennerAlzer", params, "X-Y"))
    # build the first link by hand: the window [A - y, A + y] now leaves [0, 1]
    iv = Interval(F(-1), F(2))
    point = SignedMeasure.dirac(iv, HALF)
    window = SignedMeasure.uniform(iv, HALF - F(3, 4), HALF + F(3, 4))
    ends = SignedMeasure.build(iv, [(F(0), HALF), (F(1), HALF)])
    assert decide_order(point, window, 1).status is Status.HOLDS
    assert decide_order(window, ends, 1).status is not Status.HOLDS


def test_deriv_expr_examples():
    # (F(x) - F(y)) / (y - x) with the sign convention of the first antiderivative is the mean
    mean_expr = deriv_expr_measure((-1, 1), (1, 0), normalize=True)
    assert mean_expr == uniform01()
    mu = deriv_expr_measure((-2, 3, -3, 2), (1, F(2, 3), F(1, 3), 0), normalize=True)
    assert decide_order(mu, uniform01(), 1).status is Status.HOLDS_REVERSED


def test_deriv_expr_normalisation_errors():
    with pytest.raises(ConstraintError):
        deriv_expr_measure((-2, 2), (1, 0), normalize=True)
    with pytest.raises(ConstraintError):
        expression_measure([(1, 1, 1)])


def test_triangular_between_midpoint_and_mean():
    tri = triangular01()
    assert decide_order(midpoint01(), tri, 1).status is Status.HOLDS
    assert decide_order(tri, uniform01(), 1).status is Status.HOLDS
    assert decide_order(uniform01(), trapezoid01(), 1).status is Status.HOLDS


def test_deriv4_weights_constraints():
    a1, al2, al3 = F(1, 2), F(2, 3), F(1, 4)
    w = deriv4_weights(a1, al2, al3)
    assert sum(w) == 0
    mu = deriv_expr_measure(w, (1, al2, al3, 0), normalize=True)
    assert mu.total_mass() == 1
    spec = FamilySpec("DerivExpr4", {"a1": a1, "alpha2": al2, "alpha3": al3}, "vs-mean")
    assert agrees(eval_conditions(spec), verdict(spec))


@pytest.mark.parametrize(
    "spec",
    [
        FamilySpec("SzostokLeft2", {"a": HALF, "alpha": F(3, 2)}, "symmetric-vs-mean"),
        FamilySpec("ClassicHH", {"a": 1, "b": 0}),
        FamilySpec("TaOperator", {"a": 1}, "sideways"),
        FamilySpec("TaOperator", {"b": 1}),
        FamilySpec("SzostokLeft2", {"a": HALF}, "vs-mean"),
    ],
)
def test_invalid_parameters(spec):
    with pytest.raises(DomainError):
        make_family(spec)


def test_unknown_family():
    with pytest.raises(KeyError):
        make_family(FamilySpec("Nope"))


def test_second_difference_gives_triangular_law():
    # 4 (Phi(0) - 2 Phi(1/2) + Phi(1)) is the double-integral mean of f
    mu = expression_measure([(2, 4, 0), (2, -8, HALF), (2, 4, 1)])
    assert mu == triangular01()
    assert decide_order(midpoint01(), mu, 1).status is Status.HOLDS
    assert decide_order(mu, uniform01(), 1).status is Status.HOLDS
