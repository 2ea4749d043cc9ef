import math
import random
from fractions import Fraction

import pytest

from padicdml.errors import PrecisionExhausted
from padicdml.padic import (
    DEGENERATE,
    PadicNumber,
    PadicSeries,
    RConstant,
    factorial_valuation,
    find_integer_zeros,
    mahler_term,
    strassmann_bound,
    valuation,
)


def lift(p, q, prec=48):
    return PadicNumber.from_rational(p, Fraction(q), prec)


# -- valuation ---------------------------------------------------------------

def test_valuation_examples():
    assert valuation(lift(5, 250)) == 3
    assert valuation(lift(3, Fraction(1, 9))) == -2
    assert valuation(PadicNumber.exact_zero(7)) == math.inf


def test_valuation_of_unknown_raises():
    with pytest.raises(PrecisionExhausted):
        PadicNumber.unknown(5, 10).valuation()


# -- arithmetic soundness ------------------------------------------------------

def test_arithmetic_agrees_with_exact_reduction():
    rng = random.Random(1331)
    for p in (2, 3, 5, 7):
        for _ in range(40):
            a = Fraction(rng.randint(-50, 50), rng.choice([1, 2, 3, 7, 9, 11]))
            b = Fraction(rng.randint(-50, 50), rng.choice([1, 2, 3, 7, 9, 11]))
            if a.denominator % p == 0 or b.denominator % p == 0:
                continue
            if a == 0 or b == 0:
                continue
            k = 24
            xa, xb = lift(p, a, k), lift(p, b, k)
            for op, exact in (
                (xa + xb, a + b),
                (xa - xb, a - b),
                (xa * xb, a * b),
                (xa / xb, a / b),
            ):
                target = lift(p, exact, k + 8) if exact else PadicNumber.exact_zero(p)
                assert op.congruent(target, k - 4)


def test_cancellation_loses_relative_precision():
    p = 5
    a = lift(p, 26, 4)  # 26 = 1 + 5^2 known mod 5^4
    b = lift(p, 1, 4)
    diff = a - b  # 25, with only 2 digits of relative precision left
    assert diff.v == 2
    assert diff.prec == 2


def test_full_cancellation_gives_unknown():
    p = 5
    a = lift(p, 7, 3)
    b = lift(p, 7 + 5**3, 3)
    d = a - b
    assert not d.known_nonzero
    assert d.valuation_lower_bound == 3


# -- Mahler terms --------------------------------------------------------------

def test_mahler_term_small_cases():
    assert mahler_term(0) == [Fraction(1)]
    assert mahler_term(2) == [Fraction(0), Fraction(-1, 2), Fraction(1, 2)]
    assert mahler_term(3) == [
        Fraction(0),
        Fraction(1, 3),
        Fraction(-1, 2),
        Fraction(1, 6),
    ]


def test_mahler_matches_binomials():
    for i in range(0, 31, 3):
        coeffs = mahler_term(i)
        for n in range(0, 31, 5):
            value = sum(c * n**j for j, c in enumerate(coeffs))
            assert value == math.comb(n, i)


def test_mahler_denominator_control():
    # |coeff|_p <= R^(-i), i.e. v_p(coeff) * (p-1) >= -i; and v_p(i!) <= i/(p-1)
    def vp(fr, p):
        v = 0
        num, den = fr.numerator, fr.denominator
        while num and num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return v

    for p in (2, 3, 5):
        for i in range(31):
            assert factorial_valuation(i, p) * (p - 1) <= i
            for c in mahler_term(i):
                if c:
                    assert vp(c, p) * (p - 1) >= -i


def test_mahler_truncation():
    assert len(mahler_term(10, degree_cap=4)) == 5


# -- R constant -----------------------------------------------------------------

def test_r_constant_threshold():
    assert RConstant(3).certifies_contraction(1)  # 3^-1 < 3^-1/2
    assert not RConstant(2).certifies_contraction(1)  # 2^-1 = R(2)
    assert RConstant(2).certifies_contraction(2)
    assert RConstant(5).certifies_contraction(1)


def test_r_constant_exponent_exact():
    assert RConstant(5).exponent == Fraction(-1, 4)
    assert RConstant(None).exponent == 0


# -- Strassmann -----------------------------------------------------------------

def test_strassmann_interior_max():
    s = PadicSeries.from_rationals(5, [5, 1, 5])
    res = strassmann_bound(s)
    assert (res.bound, res.max_valuation) == (1, 0)


def test_strassmann_dominant_constant():
    res = strassmann_bound(PadicSeries.from_rationals(5, [1, 5]))
    assert res.bound == 0


def test_strassmann_degenerate():
    p = 5
    series = PadicSeries(p, [PadicNumber.unknown(p, 8) for _ in range(4)], 8)
    assert strassmann_bound(series).degenerate
    assert strassmann_bound(series) == DEGENERATE


def test_strassmann_monotone_in_precision():
    values = [Fraction(50), Fraction(5), Fraction(75), Fraction(125)]
    low = strassmann_bound(PadicSeries.from_rationals(5, values, prec=8, tail=8))
    high = strassmann_bound(PadicSeries.from_rationals(5, values, prec=16, tail=16))
    assert not low.degenerate and not high.degenerate
    assert high.bound <= low.bound


# -- integer zero location --------------------------------------------------------

def _class_series_for_9_pow(prec=30, terms=40):
    # p-adic form of 3^(2T) * 9^(-1) - 1 = (1+8)^T / 9 - 1 over Q_2
    coeffs = [Fraction(0)] * terms
    for i in range(terms):
        for j, c in enumerate(mahler_term(i)):
            if j < terms:
                coeffs[j] += c * 8**i
    vals = [Fraction(c, 9) for c in coeffs]
    vals[0] -= 1
    tail = 3 * terms - prec  # v_2(8^i / i!) >= 3i - i = 2i, comfortably below
    return PadicSeries.from_rationals(2, vals, prec=prec, tail=tail)


def test_find_integer_zeros_orbit_series():
    series = _class_series_for_9_pow()
    res = strassmann_bound(series)
    assert res.bound == 1
    out = find_integer_zeros(series, 10, lambda n: 3 ** (2 * n) == 9, res.bound)
    assert out["zeros"] == [1]
    assert out["resolved"]
    assert out["separations"][0]["separated"]


def test_find_integer_zeros_no_zero():
    series = PadicSeries.from_rationals(5, [1, 5])
    out = find_integer_zeros(series, 100, lambda n: False)
    assert out["zeros"] == []
    assert out["resolved"]


def test_find_integer_zeros_unconsumed_budget():
    # (T-1)^2 has a double zero at 1: bound 2, one hit, failed separation
    series = PadicSeries.from_rationals(5, [1, -2, 1])
    res = strassmann_bound(series)
    assert res.bound == 2
    out = find_integer_zeros(series, 10, lambda n: n == 1, res.bound)
    assert out["zeros"] == [1]
    assert not out["resolved"]
    assert not out["separations"][0]["separated"]


def test_find_integer_zeros_rejects_excess_hits():
    series = PadicSeries.from_rationals(5, [1, 5])
    with pytest.raises(PrecisionExhausted):
        find_integer_zeros(series, 10, lambda n: True, 0)


# -- series plumbing ---------------------------------------------------------------

def test_series_mul_tracks_tail():
    p = 5
    a = PadicSeries.from_rationals(p, [1, 5], tail=10)
    b = PadicSeries.from_rationals(p, [5, 25], tail=12)
    prod = a * b
    # stored-min valuations: 0 and 1; tail = min(10+1, 12+0, 10+12)
    assert prod.tail == 11
    assert prod.coeffs[0].congruent(lift(p, 5), 8)


def test_series_evaluate_includes_tail():
    p = 5
    s = PadicSeries.from_rationals(p, [0], tail=6)
    val = s.evaluate_at_int(3)
    assert not val.known_nonzero
    assert val.valuation_lower_bound >= 6
