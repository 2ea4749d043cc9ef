"""Sparse multivariate polynomials, polynomial self-maps, and points.

A polynomial knows its ambient variable count ``nvars`` and its coefficient
field; terms are stored as a dict from exponent tuples to nonzero scalars.
The zero polynomial has an empty term dict and total degree ``ZERO_DEGREE``
(minus infinity), a sentinel distinct from every integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, FieldMismatch
from .scalars import QQ, Rationals, ResidueRing

ZERO_DEGREE = float("-inf")


class MultiPoly:
    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars, field, terms):
        self.nvars = nvars
        self.field = field
        clean = {}
        for exps, coeff in terms.items():
            if len(exps) != nvars:
                raise DimensionMismatch(
                    f"exponent tuple {exps} does not match nvars={nvars}"
                )
            if not field.is_zero(coeff):
                clean[exps] = coeff
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars, field):
        return cls(nvars, field, {})

    @classmethod
    def constant(cls, nvars, field, value):
        return cls(nvars, field, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, field, index):
        if not 0 <= index < nvars:
            raise DimensionMismatch(f"variable index {index} out of range")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, field, {exps: field.one})

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.field, frozenset(self.terms.items())))

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"polynomials in {self.nvars} vs {other.nvars} variables"
            )
        self.field.require_same(other.field)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        F = self.field
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            if exps in out:
                out[exps] = F.add(out[exps], coeff)
            else:
                out[exps] = coeff
        return MultiPoly(self.nvars, F, out)

    def __neg__(self):
        F = self.field
        return MultiPoly(
            self.nvars, F, {e: F.neg(c) for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_compatible(other)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                prod = F.mul(c1, c2)
                if exps in out:
                    out[exps] = F.add(out[exps], prod)
                else:
                    out[exps] = prod
        return MultiPoly(self.nvars, F, out)

    def scale(self, scalar):
        F = self.field
        return MultiPoly(
            self.nvars, F, {e: F.mul(c, scalar) for e, c in self.terms.items()}
        )

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.constant(self.nvars, self.field, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, values):
        """Evaluate at a tuple of scalars (exact field arithmetic)."""
        if len(values) != self.nvars:
            raise DimensionMismatch(
                f"{len(values)} values for {self.nvars} variables"
            )
        F = self.field
        max_exp = [0] * self.nvars
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers = []
        for i, v in enumerate(values):
            row = [F.one]
            for _ in range(max_exp[i]):
                row.append(F.mul(row[-1], v))
            powers.append(row)
        acc = F.zero
        for exps, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exps):
                if e:
                    term = F.mul(term, powers[i][e])
            acc = F.add(acc, term)
        return acc

    def substitute(self, polys):
        """Substitute a polynomial for each variable; exact, with cancellation."""
        if len(polys) != self.nvars:
            raise DimensionMismatch(
                f"{len(polys)} substitutions for {self.nvars} variables"
            )
        F = self.field
        for q in polys:
            self.field.require_same(q.field)
        nvars_out = polys[0].nvars if polys else self.nvars
        max_exp = [0] * self.nvars
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers = []
        for i, q in enumerate(polys):
            row = [MultiPoly.constant(nvars_out, F, F.one)]
            for _ in range(max_exp[i]):
                row.append(row[-1] * q)
            powers.append(row)
        acc = MultiPoly.zero(nvars_out, F)
        for exps, coeff in self.terms.items():
            term = MultiPoly.constant(nvars_out, F, coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * powers[i][e]
            acc = acc + term
        return acc

    def partial_derivative(self, index):
        F = self.field
        out = {}
        for exps, coeff in self.terms.items():
            e = exps[index]
            if e == 0:
                continue
            lowered = tuple(
                x - 1 if i == index else x for i, x in enumerate(exps)
            )
            scaled = F.mul(coeff, F.from_int(e))
            if lowered in out:
                out[lowered] = F.add(out[lowered], scaled)
            else:
                out[lowered] = scaled
        return MultiPoly(self.nvars, F, out)

    def map_coefficients(self, func, new_field):
        return MultiPoly(
            self.nvars, new_field, {e: func(c) for e, c in self.terms.items()}
        )

    def __repr__(self):
        from .parser import format_poly

        return f"MultiPoly({format_poly(self)!r})"


@dataclass(frozen=True)
class Point:
    """A point of affine N-space with exact scalar coordinates."""

    field: object
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def dim(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class PolyMap:
    """A polynomial self-map of affine N-space: N polynomials in N variables."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise DimensionMismatch("a polynomial map needs at least one coordinate")
        n = coords[0].nvars
        field = coords[0].field
        if len(coords) != n:
            raise DimensionMismatch(
                f"{len(coords)} coordinates for a self-map of {n}-space"
            )
        for c in coords:
            if c.nvars != n:
                raise DimensionMismatch("coordinate polynomials disagree on nvars")
            field.require_same(c.field)

    @property
    def dim(self):
        return len(self.coords)

    @property
    def field(self):
        return self.coords[0].field

    def total_degree(self):
        return max(c.total_degree() for c in self.coords)


def eval_map(f: PolyMap, x: Point) -> Point:
    """One orbit step: the exact image f(x)."""
    if f.dim != x.dim:
        raise DimensionMismatch(f"map on {f.dim}-space applied to {x.dim}-point")
    f.field.require_same(x.field)
    return Point(x.field, tuple(c.evaluate(x.coords) for c in f.coords))


def compose_maps(f: PolyMap, g: PolyMap) -> PolyMap:
    """The exact composite f o g (apply g first), with cancellation."""
    if f.dim != g.dim:
        raise DimensionMismatch("composing maps of different dimensions")
    f.field.require_same(g.field)
    return PolyMap(tuple(c.substitute(g.coords) for c in f.coords))


def iterate_map(f: PolyMap, n: int) -> PolyMap:
    """The exact n-fold composite of f with itself (n >= 1)."""
    if n < 1:
        raise ValueError("iterate_map needs n >= 1")
    result = f
    for _ in range(n - 1):
        result = compose_maps(f, result)
    return result


def orbit(f: PolyMap, x: Point):
    """Generator for x, f(x), f^2(x), ...; caller bounds the iteration."""
    current = x
    while True:
        yield current
        current = eval_map(f, current)


def _reduce_scalar(value, ring: ResidueRing):
    return ring.from_rational(Fraction(value))


def reduce_mod_p(obj, p: int, e: int = 1):
    """Reduce a rational MultiPoly/PolyMap/Point into Z/p^e.

    Denominators coprime to p are inverted; a denominator divisible by p
    raises NonIntegralAtP.
    """
    ring = ResidueRing(p, e)
    if isinstance(obj, MultiPoly):
        if not isinstance(obj.field, Rationals):
            raise FieldMismatch("reduce_mod_p expects rational coefficients")
        return obj.map_coefficients(lambda c: _reduce_scalar(c, ring), ring)
    if isinstance(obj, PolyMap):
        return PolyMap(tuple(reduce_mod_p(c, p, e) for c in obj.coords))
    if isinstance(obj, Point):
        if not isinstance(obj.field, Rationals):
            raise FieldMismatch("reduce_mod_p expects rational coordinates")
        return Point(ring, tuple(_reduce_scalar(c, ring) for c in obj.coords))
    raise TypeError(f"cannot reduce object of type {type(obj).__name__}")
