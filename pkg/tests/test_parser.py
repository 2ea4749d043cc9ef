import random
from fractions import Fraction

import pytest

from padicdml.errors import ParseError
from padicdml.multipoly import MultiPoly
from padicdml.parser import (
    format_poly,
    parse_point,
    parse_poly,
    parse_scalar,
)
from padicdml.scalars import QQ, RationalFunctions


def test_parse_two_term_poly():
    p = parse_poly("x1^2 + 3/2*x2", 2)
    assert len(p.terms) == 2
    assert p.terms[(2, 0)] == Fraction(1)
    assert p.terms[(0, 1)] == Fraction(3, 2)


def test_parse_function_field_coefficient():
    F = RationalFunctions(2)
    p = parse_poly("t*x1", 1, F)
    assert len(p.terms) == 1
    assert str(p.terms[(1,)]) == "t"


def test_syntax_error_position():
    with pytest.raises(ParseError) as err:
        parse_poly("x1 +", 1)
    assert err.value.position == 4


def test_unknown_variable():
    with pytest.raises(ParseError):
        parse_poly("x3 + 1", 2)
    with pytest.raises(ParseError):
        parse_poly("t*x1", 1, QQ)  # t needs a function field


def test_unary_minus_and_parens():
    p = parse_poly("-(x1 - 2)^2", 1)
    assert p.terms == {(2,): Fraction(-1), (1,): Fraction(4), (0,): Fraction(-4)}


def test_scalar_mode_quotients():
    F = RationalFunctions(2)
    s = parse_scalar("1/(t+1)", F)
    assert str(s) == "(1)/(t+1)"
    assert parse_scalar("-7/2", QQ) == Fraction(-7, 2)


def test_print_canonical_order():
    p = parse_poly("3/2*x2 + x1^2", 2)
    assert format_poly(p) == "x1^2 + 3/2*x2"
    q = parse_poly("x2^2 + x1*x2 + x1^2", 2)
    assert format_poly(q) == "x1^2 + x1*x2 + x2^2"


def test_print_zero_and_negative():
    assert format_poly(MultiPoly.zero(2, QQ)) == "0"
    p = parse_poly("-x1 - 1", 1)
    assert format_poly(p) == "-x1 - 1"


def _random_poly(rng, nvars, field):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        exps = tuple(rng.randint(0, 3) for _ in range(nvars))
        if isinstance(field, RationalFunctions):
            coeff = field.from_int(rng.randint(1, field.p - 1))
            if rng.random() < 0.5:
                coeff = field.mul(coeff, field.t)
        else:
            coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        terms[exps] = coeff
    return MultiPoly(nvars, field, terms)


def test_round_trip_property():
    rng = random.Random(4242)
    for _ in range(60):
        nvars = rng.randint(1, 3)
        field = QQ if rng.random() < 0.6 else RationalFunctions(rng.choice([2, 3, 5]))
        p = _random_poly(rng, nvars, field)
        assert parse_poly(format_poly(p), nvars, field) == p


def test_point_round_trip():
    from padicdml.parser import format_point

    F = RationalFunctions(2)
    x = parse_point(["t^3", "1/(t+1)"], F)
    again = parse_point(format_point(x), F)
    assert again == x
