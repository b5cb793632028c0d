from fractions import Fraction

import mpmath
import pytest
from random_pairs import random_pair

from cxorder.catalog import (
    SYMMETRIC,
    UNIT,
    FamilySpec,
    deriv_expr_measure,
    make_family,
    midpoint01,
    quadrature,
    trapezoid01,
    uniform01,
)
from cxorder.measure import Interval, SignedMeasure, pushforward_affine
from cxorder.numeric import Polynomial, Sign, sign, sqrt, to_mpf
from cxorder.oracle import Kernel, integrate, oracle_order
from cxorder.ordering import (
    Status,
    build_h_ladder,
    check_area_criterion,
    check_dls,
    check_higher_order,
    check_higher_order_signpoints,
    check_levin_steckin,
    check_ohlin,
    decide_order,
    kernel_gap,
    ladder_mismatch,
    sign_changes,
)

F = Fraction
HALF = Fraction(1, 2)
SEEDS = range(30)


def rule(name):
    return quadrature(name).measure


def terex0():
    return deriv_expr_measure((Fraction(1, 3), Fraction(-8, 3), Fraction(8, 3), Fraction(-1, 3)),
                              (1, Fraction(3, 4), Fraction(1, 4), 0))


def perturbed_l4():
    """L4 with its weight at +1 pushed to -1/100 and moments 0..3 re-solved.

    The free weights sit at -sqrt5/5, 0, sqrt5/5 and 1/2.  The outer atoms
    of the difference against C then carry opposite signs, which forces an
    even number of sign changes of H_2.
    """
    r = sqrt(5) / 5
    atoms = [
        (Fraction(-1), Fraction(1, 12)),
        (Fraction(1), Fraction(-1, 100)),
        (-r, Fraction(-73, 60) + Fraction(7, 10) * sqrt(5)),
        (Fraction(0), Fraction(28, 75)),
        (r, Fraction(-73, 60) - Fraction(7, 10) * sqrt(5)),
        (HALF, Fraction(224, 75)),
    ]
    return SignedMeasure.build(SYMMETRIC, atoms)


# -- sign changes -------------------------------------------------------------


def test_sign_changes_midpoint_vs_uniform():
    rep = sign_changes(midpoint01().cdf() - uniform01().cdf())
    assert rep.count == 1
    assert rep.points == (HALF,)


def test_sign_changes_zero_function():
    F = uniform01().cdf() - uniform01().cdf()
    assert sign_changes(F).count == 0


def test_sign_changes_c_vs_l4():
    rep = sign_changes(rule("L4").cdf() - rule("C").cdf())
    assert rep.count == 5


# -- convex order ---------------------------------------------------------------


@pytest.mark.parametrize("lhs, rhs", [(midpoint01, uniform01), (uniform01, trapezoid01)])
def test_ohlin_classic_chain(lhs, rhs):
    v = check_ohlin(lhs(), rhs())
    assert v.status is Status.HOLDS
    assert v.criterion == "ohlin"


def test_ohlin_equal_measures_falls_through():
    assert check_ohlin(uniform01(), uniform01()).status is Status.UNDECIDED
    v = decide_order(uniform01(), uniform01(), 1)
    assert v.status is Status.HOLDS
    assert "agree" in v.note


def test_ohlin_mean_mismatch():
    v = check_ohlin(midpoint01(), SignedMeasure.dirac(UNIT, Fraction(1, 3)))
    assert v.status is Status.INAPPLICABLE
    assert v.first_bad_moment == 1


def test_levin_steckin_examples():
    assert check_levin_steckin(terex0(), uniform01()).status is Status.HOLDS
    # the same expression against the midpoint: neither direction holds
    v = check_levin_steckin(terex0(), midpoint01())
    assert v.status is Status.INCOMPARABLE
    assert check_levin_steckin(uniform01(), uniform01()).status is Status.HOLDS


def test_area_criterion_symmetric_boundary():
    lhs, rhs, _ = make_family(FamilySpec("SzostokLeft2", {"a": HALF, "alpha": Fraction(3, 4)}, "symmetric-vs-mean"))
    v = check_area_criterion(lhs, rhs)
    assert v.status is Status.HOLDS
    assert len(v.crossings) == 3
    # the prefix integral touches zero at the middle crossing
    assert v.checked[0][2] == 0


def test_area_criterion_single_crossing():
    assert check_area_criterion(midpoint01(), uniform01()).status is Status.HOLDS


@pytest.mark.parametrize(
    "params, expect",
    [
        # a3 <= 2 alpha3
        ({"a1": F(23, 60), "a2": F(713, 1440), "a3": F(35, 288), "alpha1": F(3, 5), "alpha2": F(31, 60), "alpha3": F(7, 60)},
         Status.HOLDS),
        # a3 > 2 alpha3
        ({"a1": F(1, 60), "a2": F(82, 99), "a3": F(307, 1980), "alpha1": F(7, 10), "alpha2": F(7, 12), "alpha3": F(1, 30)},
         Status.INCOMPARABLE),
    ],
)
def test_area_criterion_left3_case_iv(params, expect):
    # a1 <= 1 - alpha1 and 1 - alpha2 < a1 + a2 < 1 - alpha3: three crossings,
    # and the order holds iff a3 <= 2 alpha3
    u1, u2, u3 = (1 - params[f"alpha{i}"] for i in (1, 2, 3))
    assert params["a1"] <= u1 and u2 < params["a1"] + params["a2"] < u3
    lhs, rhs, _ = make_family(FamilySpec("SzostokLeft3", params))
    v = check_area_criterion(lhs, rhs)
    assert len(v.crossings) == 3
    assert v.status is expect


# -- higher order ---------------------------------------------------------------


def test_dls_examples():
    v = check_dls(rule("G3"), rule("I"), 5)
    assert v.status is Status.HOLDS
    assert len(v.crossings) == 5
    assert check_dls(rule("C"), rule("L4"), 3).status is Status.UNDECIDED
    assert check_dls(rule("I"), rule("I"), 3).status is Status.UNDECIDED


def test_ladder_equal_measures_is_zero():
    ladder = build_h_ladder(rule("S"), rule("S"), 3)
    assert all(ladder[k].is_zero() for k in range(4))


def test_ladder_classic_pair():
    h1 = build_h_ladder(midpoint01(), uniform01(), 1)[1]
    for x in (Fraction(0), Fraction(1, 5), HALF, Fraction(7, 10), Fraction(1)):
        expected = x * x / 2 - max(x - HALF, Fraction(0))
        assert h1(x) == expected
    assert h1(HALF) == Fraction(1, 8)


def test_ladder_c_vs_l4():
    ladder = build_h_ladder(rule("C"), rule("L4"), 3)
    assert ladder[3](Fraction(0)) == Fraction(1, 72) + sqrt(5) / 360 - sqrt(2) / 72
    assert ladder_mismatch(ladder).is_zero()
    assert ladder[2](Fraction(0)) == 0


@pytest.mark.parametrize("lhs, rhs, expect", [("C", "L4", Status.HOLDS), ("G3", "L5", Status.INCOMPARABLE), ("L5", "L5", Status.HOLDS)])
def test_check_higher_order_examples(lhs, rhs, expect):
    assert check_higher_order(rule(lhs), rule(rhs), 3).status is expect


def test_signpoints_c_vs_l4():
    v = check_higher_order_signpoints(rule("C"), rule("L4"), 3)
    assert v.status is Status.HOLDS
    expected = (-1 - sqrt(5) + 2 * sqrt(2), Fraction(0), 1 + sqrt(5) - 2 * sqrt(2))
    assert [float(x) for x in v.crossings] == pytest.approx([float(x) for x in expected], abs=1e-15)
    assert v.crossings[1] == 0
    ((label, x, value),) = v.checked
    assert x == 0
    assert value == Fraction(1, 72) + sqrt(5) / 360 - sqrt(2) / 72


def test_signpoints_even_count_on_perturbed_l4():
    C, Y = rule("C"), perturbed_l4()
    assert [Y.moment(k) for k in range(4)] == [C.moment(k) for k in range(4)]
    v = check_higher_order_signpoints(C, Y, 3)
    assert len(v.crossings) == 2
    assert v.status is Status.INCOMPARABLE
    # dense sampling of the kernel gap shows both signs
    gaps = [to_mpf(kernel_gap(C.lowered(), Y.lowered(), 3, to_mpf(Fraction(j, 100) * 2 - 1))) for j in range(201)]
    assert min(gaps) < 0 < max(gaps)
    assert oracle_order(C, Y, 3).status is Status.INCOMPARABLE


def test_signpoints_even_count_c_vs_l4_at_degree_two():
    assert check_higher_order_signpoints(rule("C"), rule("L4"), 2).status is Status.INAPPLICABLE
    v = check_higher_order_signpoints(rule("L4"), rule("C"), 2)
    assert len(v.crossings) == 4
    assert v.status is Status.INCOMPARABLE


def test_signpoints_equal_measures():
    assert check_higher_order_signpoints(rule("G3"), rule("G3"), 3).status is Status.HOLDS


def test_signpoints_wrong_initial_sign():
    v = check_higher_order_signpoints(rule("L4"), rule("C"), 3)
    assert v.status is Status.INAPPLICABLE


# -- orchestration --------------------------------------------------------------


def test_decide_midpoint_vs_trapezoid():
    assert decide_order(midpoint01(), trapezoid01(), 1).status is Status.HOLDS


def test_decide_g2_vs_c_depends_on_degree():
    assert decide_order(rule("G2"), rule("C"), 3).status is Status.HOLDS
    assert decide_order(rule("G2"), rule("C"), 5).status is Status.INCOMPARABLE


def test_decide_moment_mismatch_gives_monomial_witnesses():
    v = decide_order(midpoint01(), SignedMeasure.dirac(UNIT, Fraction(1, 3)), 1)
    assert v.status is Status.INCOMPARABLE
    assert v.first_bad_moment == 1
    assert {sign(w.gap) for w in v.witnesses} == {Sign.POSITIVE, Sign.NEGATIVE}


def test_decide_rejects_bad_degree_and_interval():
    with pytest.raises(ValueError):
        decide_order(uniform01(), uniform01(), 0)
    with pytest.raises(ValueError):
        decide_order(uniform01(), rule("I"), 1)


def test_verdict_records_are_stable():
    v = decide_order(rule("C"), rule("L4"), 3)
    keys = [k for k, _ in v.records()]
    assert keys[:8] == ["status", "criterion", "degree", "moments_checked", "crossings", "checked", "witnesses", "first_bad_moment"]


# -- properties over seeded random pairs -------------------------------------


@pytest.mark.parametrize("seed", SEEDS)
def test_ohlin_implies_levin_steckin(seed):
    mu1, mu2, _ = random_pair(seed, 1)
    if mu1.is_nonnegative() and mu2.is_nonnegative():
        if check_ohlin(mu1, mu2).status is Status.HOLDS:
            assert check_levin_steckin(mu1, mu2).status is Status.HOLDS


@pytest.mark.parametrize("n", [2, 3])
def test_dls_implies_ladder(n):
    for seed in SEEDS:
        mu1, mu2, _ = random_pair(seed, n)
        if mu1.is_nonnegative() and mu2.is_nonnegative() and check_dls(mu1, mu2, n).status is Status.HOLDS:
            assert check_higher_order(mu1, mu2, n).status is Status.HOLDS
    assert check_dls(rule("G3"), rule("I"), 5).holds and check_higher_order(rule("G3"), rule("I"), 5).holds


@pytest.mark.parametrize("seed", SEEDS)
def test_levin_steckin_matches_ladder(seed):
    mu1, mu2, _ = random_pair(seed, 1)
    assert check_levin_steckin(mu1, mu2).status is check_higher_order(mu1, mu2, 1).status


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ladder_consistency(n):
    for seed in range(10):
        mu1, mu2, _ = random_pair(seed, n)
        ladder = build_h_ladder(mu1, mu2, n)
        assert ladder_mismatch(ladder).is_zero()
        for k in range(2, n + 1):
            d = ladder[k].derivative() - ladder[k - 1]
            assert all(p.is_zero() for p in d.pieces)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_incomparable_witnesses_have_opposite_gaps(n):
    for seed in SEEDS:
        mu1, mu2, _ = random_pair(seed, n)
        v = decide_order(mu1, mu2, n)
        if v.status is Status.INCOMPARABLE:
            signs = set()
            for w in v.witnesses:
                f = Kernel(n, w.shift) if w.kind == "kernel" else None
                gap = integrate(f, mu2) - integrate(f, mu1) if f else w.gap
                assert gap == w.gap
                signs.add(sign(gap))
            assert signs == {Sign.NEGATIVE, Sign.POSITIVE}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_antisymmetry(n):
    swap = {Status.HOLDS: Status.HOLDS_REVERSED, Status.HOLDS_REVERSED: Status.HOLDS}
    for seed in SEEDS:
        mu1, mu2, _ = random_pair(seed, n)
        v, w = decide_order(mu1, mu2, n), decide_order(mu2, mu1, n)
        if "agree" in v.note:
            assert w.status is Status.HOLDS
        else:
            assert w.status is swap.get(v.status, v.status)


@pytest.mark.parametrize("n", [1, 3])
def test_scale_and_pushforward_invariance(n):
    target = Interval(Fraction(-2), Fraction(5))
    for seed in range(12):
        mu1, mu2, _ = random_pair(seed, n)
        v = decide_order(mu1, mu2, n).status
        assert decide_order(mu1.scaled(Fraction(7, 3)), mu2.scaled(Fraction(7, 3)), n).status is v
        moved = decide_order(pushforward_affine(mu1, UNIT, target), pushforward_affine(mu2, UNIT, target), n)
        assert moved.status is v


def test_not_monotone_in_degree():
    assert decide_order(rule("G2"), rule("C"), 3).holds
    assert not decide_order(rule("G2"), rule("C"), 5).holds
    # and the other way: I <= L4 at degree 5 but not at degree 3
    assert decide_order(rule("I"), rule("L4"), 5).holds
    assert not decide_order(rule("I"), rule("L4"), 3).holds


def test_float_mode_matches_exact_on_quadrature_pairs():
    with mpmath.workprec(128):
        for a, b, n in (("G2", "C", 3), ("G3", "L5", 3), ("G3", "I", 5)):
            exact_v = decide_order(rule(a), rule(b), n)
            float_v = decide_order(rule(a).lowered(), rule(b).lowered(), n)
            assert float_v.status is exact_v.status


def test_polynomial_density_segments():
    # density 2t on [0, 1] has mean 2/3; against the matching two-point law
    mu = SignedMeasure.build(UNIT, segments=[(Fraction(0), Fraction(1), Polynomial([0, 2]))])
    two = SignedMeasure.build(UNIT, [(Fraction(0), Fraction(1, 3)), (Fraction(1), Fraction(2, 3))])
    assert decide_order(mu, two, 1).status is Status.HOLDS
