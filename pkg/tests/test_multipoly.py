import random
from fractions import Fraction

import pytest

from padicdml.errors import DimensionMismatch, NonIntegralAtP
from padicdml.multipoly import (
    ZERO_DEGREE,
    MultiPoly,
    Point,
    PolyMap,
    compose_maps,
    eval_map,
    iterate_map,
    reduce_mod_p,
)
from padicdml.parser import parse_map, parse_point, parse_poly
from padicdml.scalars import QQ, RationalFunctions


def qq(n, d=1):
    return Fraction(n, d)


def random_poly(rng, nvars, max_deg=2, max_terms=4):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        terms[exps] = Fraction(rng.randint(-5, 5))
    return MultiPoly(nvars, QQ, terms)


def random_map(rng, nvars):
    return PolyMap(tuple(random_poly(rng, nvars) for _ in range(nvars)))


def random_point(rng, nvars):
    return Point(QQ, tuple(Fraction(rng.randint(-4, 4)) for _ in range(nvars)))


def test_zero_polynomial_degree_sentinel():
    z = MultiPoly.zero(2, QQ)
    assert z.total_degree() == ZERO_DEGREE
    assert z.total_degree() < 0
    assert not isinstance(z.total_degree(), int)


def test_eval_map_substitution():
    f = parse_map(["x2", "x1*x2"])
    x = parse_point(["2", "3"])
    assert eval_map(f, x).coords == (qq(3), qq(6))


def test_eval_map_identity_case():
    f = parse_map(["x1"])
    assert eval_map(f, parse_point(["5"])).coords == (qq(5),)


def test_eval_map_function_field():
    F = RationalFunctions(2)
    f = parse_map(["t*x1", "(1-t)*x2"], F)
    e = parse_point(["1", "1"], F)
    image = eval_map(f, e)
    assert str(image.coords[0]) == "t"
    assert str(image.coords[1]) == "t+1"


def test_compose_monomial():
    f = parse_map(["x1^2"])
    assert compose_maps(f, f).coords[0] == parse_poly("x1^4", 1)


def test_compose_fibonacci_shape():
    f = parse_map(["x2", "x1*x2"])
    ff = compose_maps(f, f)
    assert ff.coords[0] == parse_poly("x1*x2", 2)
    assert ff.coords[1] == parse_poly("x1*x2^2", 2)
    assert ff.total_degree() == 3


def test_compose_inverse_pair_cancels():
    f = parse_map(["x1+1"])
    g = parse_map(["x1-1"])
    assert compose_maps(f, g).coords[0] == parse_poly("x1", 1)


def test_composition_matches_evaluation():
    rng = random.Random(20240601)
    for _ in range(40):
        n = rng.randint(1, 3)
        f, g = random_map(rng, n), random_map(rng, n)
        x = random_point(rng, n)
        assert eval_map(compose_maps(f, g), x) == eval_map(f, eval_map(g, x))


def test_degree_submultiplicative():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 2)
        f, g = random_map(rng, n), random_map(rng, n)
        fg = compose_maps(f, g)
        if fg.total_degree() == ZERO_DEGREE:
            continue
        df, dg = f.total_degree(), g.total_degree()
        if df == ZERO_DEGREE or dg == ZERO_DEGREE:
            continue
        assert fg.total_degree() <= df * dg


def test_reduce_mod_p_rejects_bad_denominator():
    f = parse_map(["1/3*x1 + 1"])
    with pytest.raises(NonIntegralAtP):
        reduce_mod_p(f, 3)


def test_reduce_mod_p_point():
    x = parse_point(["7/2"])
    assert reduce_mod_p(x, 5, 2).coords == (16,)


def test_reduce_mod_p_poly():
    f = parse_poly("x1^2 + 1", 1)
    r = reduce_mod_p(f, 2, 1)
    assert r.terms == {(2,): 1, (0,): 1}


def test_reduce_commutes_with_eval():
    rng = random.Random(9001)
    for _ in range(30):
        n = rng.randint(1, 2)
        f = random_map(rng, n)
        x = random_point(rng, n)
        p, e = rng.choice([(3, 1), (5, 2), (7, 1)])
        lhs = reduce_mod_p(eval_map(f, x), p, e)
        rhs = eval_map(reduce_mod_p(f, p, e), reduce_mod_p(x, p, e))
        assert lhs == rhs


def test_dimension_mismatch_raises():
    f = parse_map(["x1+1"])
    with pytest.raises(DimensionMismatch):
        eval_map(f, parse_point(["1", "2"]))


def test_iterate_map():
    f = parse_map(["x1^2"])
    assert iterate_map(f, 3).coords[0] == parse_poly("x1^8", 1)
