from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxorder.catalog import quadrature
from cxorder.numeric import (
    IdenticallyZero,
    Polynomial,
    RadicalScalar,
    ScalarSyntaxError,
    Sign,
    format_scalar,
    lower,
    nonnegative_on,
    parse_scalar,
    roots_in_interval,
    sign,
    sqrt,
    to_mpf,
)
from cxorder.ordering import build_h_ladder

# 1/72 + sqrt(5)/360 - sqrt(2)/72, evaluated separately with mpmath at 70 digits
H3_AT_ZERO_60 = "0.000458333793428651256668694576896627340534052729796625995520829"

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)

T = Polynomial([Fraction(0), Fraction(1)])


def certificate():
    return Fraction(1, 72) + sqrt(5) / 360 - sqrt(2) / 72


def test_sign_exact_rational():
    assert sign(Fraction(1, 72)) is Sign.POSITIVE
    assert sign(Fraction(0)) is Sign.ZERO
    assert sign(Fraction(-3, 7)) is Sign.NEGATIVE


def test_sign_of_lowered_certificate():
    x = lower(certificate(), 64)
    assert sign(x, 1e-12) is Sign.POSITIVE
    with mpmath.workdps(70):
        assert abs(to_mpf(certificate(), 256) - mpmath.mpf(H3_AT_ZERO_60)) < mpmath.mpf(10) ** -30


def test_sign_float_within_tolerance_is_indeterminate():
    assert sign(mpmath.mpf("1e-20"), 1e-18) is Sign.INDETERMINATE
    assert sign(mpmath.mpf("-1e-3"), 1e-18) is Sign.NEGATIVE


def test_exact_radical_sign():
    assert sign(certificate()) is Sign.POSITIVE
    assert sign(-1 - sqrt(5) + 2 * sqrt(2)) is Sign.NEGATIVE
    assert sign(sqrt(2) * sqrt(2) - 2) is Sign.ZERO


def test_radical_canonical_equality():
    assert sqrt(8) / 2 == sqrt(2)
    assert sqrt(12) == 2 * sqrt(3)
    assert sqrt(4) == 2


def test_roots_simple_flip():
    (r,) = roots_in_interval(T - Fraction(1, 2), Fraction(0), Fraction(1))
    assert r.flips
    assert r.value == Fraction(1, 2)


def test_roots_tangency_does_not_flip():
    p = (T - Fraction(1, 2)) ** 2
    (r,) = roots_in_interval(p, Fraction(0), Fraction(1))
    assert not r.flips
    assert r.value == Fraction(1, 2)


def test_roots_identically_zero():
    with pytest.raises(IdenticallyZero):
        roots_in_interval(Polynomial(), Fraction(0), Fraction(1))


def test_roots_of_h2_piece_for_c_vs_l4():
    ladder = build_h_ladder(quadrature("C").measure, quadrature("L4").measure, 3)
    h2 = ladder[2]
    zero = Fraction(0)
    (lo, hi, piece) = next((lo, hi, p) for lo, hi, p in h2.segments() if lo == zero)
    roots = roots_in_interval(piece, lo, hi)
    assert any(r.value == 0 for r in roots)


def test_nonnegative_examples():
    one = Fraction(1)
    assert nonnegative_on(T * T, -one, one).yes
    res = nonnegative_on(T, -one, one)
    assert res.no
    assert res.witness == -one


def test_nonnegative_classic_h1():
    # x^2/2 on [0, 1/2] and x^2/2 - (x - 1/2) on [1/2, 1]
    half = Fraction(1, 2)
    assert nonnegative_on(T * T * half, Fraction(0), half).yes
    assert nonnegative_on(T * T * half - T + half, half, Fraction(1)).yes


@given(rationals, rationals)
def test_exact_roundtrip(a, b):
    assert (a + b) - b == a
    x = a + b * sqrt(3)
    assert (x + sqrt(7)) - sqrt(7) == x


@given(st.lists(st.tuples(st.fractions(min_value=0, max_value=1, max_denominator=20), st.integers(1, 3)), min_size=1, max_size=4))
def test_roots_match_odd_multiplicities(factors):
    mult = {}
    for r, m in factors:
        mult[r] = mult.get(r, 0) + m
    p = Polynomial([Fraction(1)])
    for r, m in mult.items():
        p = p * Polynomial.linear_factor(r) ** m
    roots = roots_in_interval(p, Fraction(-1), Fraction(2))
    flips = [float(r.approx) for r in roots if r.flips]
    assert flips == pytest.approx(sorted(r for r, m in mult.items() if m % 2), abs=1e-15)
    assert [float(r.approx) for r in roots] == pytest.approx(sorted(mult), abs=1e-15)
    for r in roots:
        assert r.lo <= r.hi


@settings(max_examples=40)
@given(st.lists(rationals, min_size=1, max_size=5))
def test_nonnegative_yes_implies_grid(coeffs):
    p = Polynomial(coeffs)
    lo, hi = Fraction(-1), Fraction(1)
    if nonnegative_on(p, lo, hi).yes:
        for j in range(1001):
            assert p(lo + (hi - lo) * Fraction(j, 1000)) >= -1e-18


@pytest.mark.parametrize(
    "text",
    ["-3", "5/18", "0.25", "-1 - 1*sqrt(5) + 2*sqrt(2)", "sqrt(5)/5", "1/72 + 1/360*sqrt(5) - 1/72*sqrt(2)"],
)
def test_parse_format_roundtrip(text):
    x = parse_scalar(text)
    assert parse_scalar(format_scalar(x)) == x


def test_parse_values():
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("sqrt(5)/5") == sqrt(5) / 5
    assert parse_scalar("-1 - 1*sqrt(5) + 2*sqrt(2)") == -1 - sqrt(5) + 2 * sqrt(2)


@pytest.mark.parametrize("text", ["", "abc", "1 2", "sqrt(x)"])
def test_parse_errors(text):
    with pytest.raises(ScalarSyntaxError):
        parse_scalar(text)


def test_polynomial_calculus():
    p = Polynomial([Fraction(1), Fraction(-2), Fraction(3, 4)])
    assert p.antiderivative().derivative() == p
    assert p.integrate(Fraction(0), Fraction(1)) == 1 - 1 + Fraction(1, 4)
    assert isinstance(sqrt(2), RadicalScalar)
