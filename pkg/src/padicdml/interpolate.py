"""Interpolation of iterates on the closed unit polydisc over Q_p.

An :class:`AffinoidSelfMap` is a polynomial self-map ``u -> H(u)`` of the
closed unit polydisc with p-adically integral coefficients, each known to a
fixed absolute precision ``k`` (so coefficients live in Z/p^k).  The
difference operator ``Delta(h) = h o H - h`` on functions has operator norm
bounded by the Gauss norm of the displacement ``H(u) - u``; for substitution
endomorphisms this displacement norm is attained on the coordinate functions,
so it is used as the certified norm throughout (the spectral seminorm is only
ever upper-bounded by it).

When the certified norm ``p^(-d)`` lies strictly below the convergence
threshold ``R = p^(-1/(p-1))`` (exact test: ``d*(p-1) > 1``), the discrete
orbit ``n -> H^n(base)`` extends to p-adic time through the Mahler series

    G(T) = sum_i binom(T, i) * Delta^i(coordinate)(base),

whose terms decay geometrically; truncation and precision are tracked into a
certified tail.  The same Delta calculus yields the Neumann-series inverse
``sum (-1)^i Delta^i`` (whenever ``d >= 1``) and the logarithm vector field
``theta = sum (-1)^(i-1) Delta^i / i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    BudgetExceeded,
    ContractionNotCertified,
    DimensionMismatch,
    NonIntegralAtP,
    PrecisionExhausted,
)
from .multipoly import MultiPoly, PolyMap, Point, reduce_mod_p
from .padic import (
    PadicNumber,
    PadicSeries,
    RConstant,
    factorial_valuation,
    int_valuation,
    mahler_term,
)
from .scalars import ResidueRing

DEFAULT_TERM_BUDGET = 200_000


@dataclass(frozen=True)
class AffinoidSelfMap:
    """A polynomial self-map of the unit polydisc, coefficients mod p^k."""

    p: int
    k: int
    coords: tuple
    provenance: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        ring = self.ring
        for c in self.coords:
            if c.field != ring:
                raise NonIntegralAtP(
                    f"coordinates must live over {ring}, found {c.field}"
                )
            if c.nvars != len(self.coords):
                raise DimensionMismatch("coordinate count != variable count")

    @property
    def ring(self):
        return ResidueRing(self.p, self.k)

    @property
    def dim(self):
        return len(self.coords)

    @staticmethod
    def from_integer_polys(p, k, polys):
        ring = ResidueRing(p, k)
        fixed = tuple(
            poly.map_coefficients(ring.from_rational, ring) for poly in polys
        )
        return AffinoidSelfMap(p, k, fixed)

    @staticmethod
    def identity(p, k, n):
        ring = ResidueRing(p, k)
        return AffinoidSelfMap(
            p, k, tuple(MultiPoly.variable(n, ring, i) for i in range(n))
        )

    def displacement(self):
        """The polynomials H_i(u) - u_i."""
        ring = self.ring
        return [
            c - MultiPoly.variable(self.dim, ring, i)
            for i, c in enumerate(self.coords)
        ]

    def is_identity(self):
        return all(d.is_zero() for d in self.displacement())

    def compose(self, other, term_budget=DEFAULT_TERM_BUDGET):
        """self o other (apply other first), exact mod p^k."""
        if (self.p, self.k, self.dim) != (other.p, other.k, other.dim):
            raise DimensionMismatch("affinoid maps disagree on (p, k, dim)")
        out = tuple(c.substitute(other.coords) for c in self.coords)
        if term_budget is not None:
            total = sum(len(c.terms) for c in out)
            if total > term_budget:
                raise BudgetExceeded(
                    f"composition produced {total} terms (budget {term_budget})"
                )
        return AffinoidSelfMap(self.p, self.k, out, self.provenance)

    def evaluate(self, base):
        """Image of an integer point of the polydisc, as residues mod p^k."""
        if len(base) != self.dim:
            raise DimensionMismatch("point dimension mismatch")
        ring = self.ring
        values = tuple(ring.from_int(b) for b in base)
        return tuple(c.evaluate(values) for c in self.coords)

    def iterate_point(self, base, n):
        current = tuple(b % self.p**self.k for b in base)
        for _ in range(n):
            current = self.evaluate(current)
        return current


@dataclass(frozen=True)
class DeltaNorm:
    """Certified bound ||Delta|| <= p^(-exponent); exact when attained."""

    exponent: int
    exact: bool


def _gauss_valuation(poly, p, cap):
    """Min valuation over stored residues; cap when the poly vanishes mod p^cap."""
    best = cap
    for coeff in poly.terms.values():
        v = int_valuation(coeff, p)
        if v < best:
            best = v
    return best


def delta_norm(H: AffinoidSelfMap) -> DeltaNorm:
    """The displacement Gauss norm: d = min_i gauss_val(H_i - u_i)."""
    best = H.k
    for disp in H.displacement():
        v = _gauss_valuation(disp, H.p, H.k)
        if v < best:
            best = v
    return DeltaNorm(best, exact=best < H.k)


def boost_iterate(H: AffinoidSelfMap, term_budget=DEFAULT_TERM_BUDGET):
    """Smallest power N = p^t with the composed map certifiably below R.

    Requires a certified ||Delta|| < 1 (exponent >= 1).  The composed map is
    re-measured at every step rather than trusting the inequality
    ||Delta_{H^p}|| <= max(p^-1 ||Delta||, ||Delta||^p), which only guarantees
    termination.
    """
    d = delta_norm(H).exponent
    if d < 1:
        raise ContractionNotCertified(
            f"boost needs ||Delta|| < 1, certified exponent is {d}"
        )
    R = RConstant(H.p)
    N = 1
    current = H
    while not R.certifies_contraction(delta_norm(current).exponent):
        powered = current
        for _ in range(H.p - 1):
            powered = powered.compose(current, term_budget)
        current = powered
        N *= H.p
        if N > H.p ** 40:
            raise BudgetExceeded("boost did not certify within p^40 iterations")
    return N, current


@dataclass(frozen=True)
class InterpolationResult:
    """Per-coordinate Mahler series G_j(T) with a shared certificate."""

    series: tuple
    certificate: dict

    def evaluate(self, n):
        """G(n) as a tuple of certified PadicNumbers."""
        return tuple(s.evaluate_at_int(n) for s in self.series)


@lru_cache(maxsize=65536)
def _mahler_lift_row(p, k, i):
    """binom(T, i) coefficients lifted to PadicNumbers (None for exact zeros)."""
    return tuple(
        PadicNumber.from_rational(p, m, k + 8) if m else None
        for m in mahler_term(i)
    )


def _tail_beyond_vanishing(p, d, k, i_stop, fact_val):
    """Certified tail exponent once Delta^{i_stop} vanished mod p^k.

    Term j >= i_stop contributes at most p^-(max(k + d(j-i_stop), j*d)) from
    the value times p^(v_p(j!)) from the Mahler denominator; minimize over j.
    The crude linear lower bound (slope d - 1/(p-1) > 0) bounds the scan.
    """
    best = None
    j = i_stop
    while True:
        phi = max(k + d * (j - i_stop), j * d) - fact_val(j, p)
        if best is None or phi < best:
            best = phi
        j += 1
        lower = k + d * (j - i_stop) - (max(j - 1, 0)) // (p - 1)
        if best is not None and lower > best and j > i_stop + 4:
            return best


def _delta_apply(h, H, degree_cap, term_budget):
    """One application of Delta: h o H - h, with optional degree capping.

    Returns (polynomial, min valuation among dropped coefficients or None).
    """
    image = h.substitute(H.coords) - h
    if term_budget is not None and len(image.terms) > term_budget:
        raise BudgetExceeded(
            f"Delta power produced {len(image.terms)} terms (budget {term_budget})"
        )
    dropped_val = None
    if degree_cap is not None and image.total_degree() != float("-inf"):
        if image.total_degree() > degree_cap:
            kept = {}
            for exps, coeff in image.terms.items():
                if sum(exps) <= degree_cap:
                    kept[exps] = coeff
                else:
                    v = int_valuation(coeff, H.p)
                    if dropped_val is None or v < dropped_val:
                        dropped_val = v
            image = MultiPoly(image.nvars, image.field, kept)
    return image, dropped_val


def interpolate_action(
    H: AffinoidSelfMap,
    base,
    degree_cap=None,
    term_budget=DEFAULT_TERM_BUDGET,
) -> InterpolationResult:
    """Extend n -> H^n(base) to p-adic time as per-coordinate Mahler series.

    Precondition: the certified displacement norm lies strictly below R(p).
    The achievable tail is limited by the coefficient precision k of H minus
    the factorial valuations introduced by the Mahler denominators; callers
    wanting a tail of tau should build H with k >= tau + v_p(i_max!) (see
    :func:`working_precision`).
    """
    p, k = H.p, H.k
    dn = delta_norm(H)
    d = dn.exponent
    R = RConstant(p)
    if not R.certifies_contraction(d):
        raise ContractionNotCertified(
            f"||Delta|| <= {p}^(-{d}) does not certify below R({p})"
        )
    if degree_cap is None and d > 0:
        degree_cap = max(4 * k // d, 8)
    base = tuple(b % p**k for b in base)
    if len(base) != H.dim:
        raise DimensionMismatch("base point dimension mismatch")
    ring = H.ring
    base_vals = tuple(ring.from_int(b) for b in base)

    # Delta powers of each coordinate function, evaluated at the base point.
    # Iteration stops when the power vanishes mod p^k; the geometric decay
    # (p^-d / R)^i supplies the tail bound for everything beyond.
    evaluations = []  # evaluations[j][i] = Delta^i(u_j)(base) as residue
    drop_floor = None
    i_stop = 0
    for j in range(H.dim):
        h = MultiPoly.variable(H.dim, ring, j)
        column = []
        i = 0
        while not h.is_zero():
            column.append(h.evaluate(base_vals))
            h, dropped = _delta_apply(h, H, degree_cap, term_budget)
            i += 1
            if dropped is not None and (drop_floor is None or dropped < drop_floor):
                drop_floor = dropped
            if i > 4 * k + 64:
                raise PrecisionExhausted(
                    "Delta powers failed to vanish; contraction too weak for k"
                )
        evaluations.append(column)
        i_stop = max(i_stop, len(column))

    tail = _tail_beyond_vanishing(p, d, k, i_stop, factorial_valuation)
    max_fact = factorial_valuation(max(i_stop - 1, 0), p)
    if drop_floor is not None:
        tail = min(tail, drop_floor - max_fact)

    series = []
    for j in range(H.dim):
        coeffs = [PadicNumber.exact_zero(p) for _ in range(i_stop)]
        for i, residue in enumerate(evaluations[j]):
            if i == 0:
                # the base point is exact, not just a residue
                if not residue:
                    continue
                a_i = PadicNumber.from_rational(p, residue, k)
            elif residue == 0:
                # certified O(p^max(id,k)): both the operator-norm decay and
                # the observed vanishing bound the true value
                a_i = PadicNumber.unknown(p, max(i * d, k))
            else:
                a_i = PadicNumber.from_residue(p, residue, k)
            for t, m_lift in enumerate(_mahler_lift_row(p, k, i)):
                if m_lift is None:
                    continue
                coeffs[t] = coeffs[t] + a_i * m_lift
        series.append(PadicSeries(p, coeffs, tail))

    result = InterpolationResult(
        tuple(series),
        {
            "p": p,
            "precision": k,
            "delta_exponent": d,
            "delta_exact": dn.exact,
            "terms": i_stop,
            "tail": tail,
            "degree_cap": degree_cap,
            "base": list(base),
        },
    )
    _self_check(result, H, base)
    return result


def _self_check(result: InterpolationResult, H, base):
    """G(n) must reproduce the exact iterate for n = 0, 1, 2."""
    tail = min(s.tau() for s in result.series)
    floor = min(tail, H.k)
    if floor <= 0:
        raise PrecisionExhausted("interpolation produced a vacuous tail")
    for n in range(3):
        expected = H.iterate_point(base, n)
        got = result.evaluate(n)
        for g, e in zip(got, expected):
            target = PadicNumber.from_residue(H.p, e, H.k)
            if not g.congruent(target, floor):
                raise PrecisionExhausted(
                    f"interpolation self-check failed at n={n}"
                )


def working_precision(p, d, tau):
    """(i_max, k) so a map built mod p^k supports a tail of tau.

    i_max counts Mahler terms until the geometric decay clears tau; the
    factorial valuation of i_max! is the precision lost to denominators.
    """
    R = RConstant(p)
    i_max = R.terms_needed(d, tau)
    return i_max, tau + factorial_valuation(i_max, p) + d


def invert_map(H: AffinoidSelfMap, term_budget=DEFAULT_TERM_BUDGET) -> AffinoidSelfMap:
    """Neumann-series inverse: K_j = sum_i (-1)^i Delta^i(u_j), exact mod p^k.

    Requires certified ||Delta|| < 1; the inverse satisfies H o K = K o H = id
    mod p^k and has the same certified displacement exponent.
    """
    d = delta_norm(H).exponent
    if d < 1:
        raise ContractionNotCertified(
            f"inversion needs ||Delta|| < 1, certified exponent is {d}"
        )
    ring = H.ring
    coords = []
    for j in range(H.dim):
        h = MultiPoly.variable(H.dim, ring, j)
        acc = MultiPoly.zero(H.dim, ring)
        sign = 1
        guard = 0
        while not h.is_zero():
            acc = acc + h if sign > 0 else acc - h
            h, _ = _delta_apply(h, H, None, term_budget)
            sign = -sign
            guard += 1
            if guard > 4 * H.k + 64:
                raise PrecisionExhausted("Neumann series failed to terminate")
        coords.append(acc)
    return AffinoidSelfMap(H.p, H.k, tuple(coords), {"inverse_of": H.provenance})


@dataclass(frozen=True)
class VectorField:
    """theta(u_j) as truncated polynomials with a certified tail.

    Coefficients are known mod p^precision (division by i inside the log
    series costs v_p(i) digits); omitted terms have norm <= p^(-tail).
    """

    coords: tuple
    precision: int
    tail: int


def _theta_apply(h: MultiPoly, H: AffinoidSelfMap, term_budget=DEFAULT_TERM_BUDGET):
    """log(id + Delta) applied to h: sum_{i>=1} (-1)^(i-1) Delta^i(h) / i."""
    p, k = H.p, H.k
    ring = H.ring
    terms = []  # (i, Delta^i(h)) until vanishing mod p^k
    current, _ = _delta_apply(h, H, None, term_budget)
    i = 1
    while not current.is_zero():
        terms.append((i, current))
        current, _ = _delta_apply(current, H, None, term_budget)
        i += 1
        if i > 4 * k + 64:
            raise PrecisionExhausted("log series failed to terminate")
    i_stop = i
    max_div = max((int_valuation(n, p) for n, _ in terms), default=0)
    k_out = k - max_div
    if k_out <= 0:
        raise PrecisionExhausted("log series divisions consumed all precision")
    out_ring = ResidueRing(p, k_out)
    acc = MultiPoly.zero(H.dim, out_ring)
    for i, poly in terms:
        s = int_valuation(i, p)
        unit_inv = pow(i // p**s, -1, p**k_out)
        sign = 1 if i % 2 == 1 else -1
        converted = {}
        for exps, coeff in poly.terms.items():
            if coeff % p**s:
                raise PrecisionExhausted(
                    "log series term not divisible as certified"
                )
            value = (sign * (coeff // p**s) * unit_inv) % p**k_out
            converted[exps] = value
        acc = acc + MultiPoly(H.dim, out_ring, converted)
    d = delta_norm(H).exponent
    # term j >= i_stop contributes p^-(max(k + d(j-i_stop), jd) - v_p(j))
    best = None
    j = max(i_stop, 1)
    while True:
        vj = int_valuation(j, p) if j else 0
        phi = max(k + d * (j - i_stop), j * d) - vj
        if best is None or phi < best:
            best = phi
        j += 1
        log_cap = 0
        q = p
        while q <= j:
            log_cap += 1
            q *= p
        if k + d * (j - i_stop) - log_cap > best and j > i_stop + 4:
            break
    return acc, k_out, best


def vector_field(H: AffinoidSelfMap, term_budget=DEFAULT_TERM_BUDGET) -> VectorField:
    """The logarithm vector field applied to each coordinate function."""
    d = delta_norm(H).exponent
    if not RConstant(H.p).certifies_contraction(d):
        raise ContractionNotCertified(
            f"vector field needs ||Delta|| < R({H.p}), certified exponent {d}"
        )
    coords = []
    prec = None
    tail = None
    for j in range(H.dim):
        h = MultiPoly.variable(H.dim, H.ring, j)
        poly, k_out, t = _theta_apply(h, H, term_budget)
        coords.append(poly)
        prec = k_out if prec is None else min(prec, k_out)
        tail = t if tail is None else min(tail, t)
    ring = ResidueRing(H.p, prec)
    coords = [
        c if c.field == ring else c.map_coefficients(lambda x: x % ring.modulus, ring)
        for c in coords
    ]
    return VectorField(tuple(coords), prec, tail)


def theta_of(H: AffinoidSelfMap, h: MultiPoly):
    """theta applied to an arbitrary polynomial observable (for identities)."""
    return _theta_apply(h, H)


# ---------------------------------------------------------------------------
# recentering of rational self-maps along an orbit residue
# ---------------------------------------------------------------------------

def recenter_map(f: PolyMap, anchor: Point, p, e, m, k) -> AffinoidSelfMap:
    """The affinoid map H(u) = (f^m(anchor + p^e u) - anchor) / p^e mod p^k.

    Needs f^m(anchor) = anchor mod p^e (a residue cycle at level >= e); the
    scaled displacement is then p-integral.  Computation runs mod p^(k+e)
    so the division by p^e lands exactly on k digits.
    """
    ring = ResidueRing(p, k + e)
    f_red = reduce_mod_p(f, p, k + e)
    n = f.dim
    scale = p**e
    current = [
        MultiPoly(
            n,
            ring,
            {
                (0,) * n: ring.from_rational(anchor.coords[i]),
                tuple(1 if t == i else 0 for t in range(n)): scale % ring.modulus,
            },
        )
        for i in range(n)
    ]
    for _ in range(m):
        current = [c.substitute(current) for c in f_red.coords]
    out_ring = ResidueRing(p, k)
    coords = []
    for i, poly in enumerate(current):
        shifted = dict(poly.terms)
        zero_exp = (0,) * n
        anchor_res = ring.from_rational(anchor.coords[i])
        shifted[zero_exp] = ring.sub(shifted.get(zero_exp, 0), anchor_res)
        reduced = {}
        for exps, coeff in shifted.items():
            if coeff % scale:
                raise NonIntegralAtP(
                    f"recentered coefficient not divisible by p^{e}; "
                    "the residue cycle level is too low"
                )
            value = (coeff // scale) % out_ring.modulus
            reduced[exps] = value
        coords.append(MultiPoly(n, out_ring, reduced))
    provenance = {"anchor": [str(c) for c in anchor.coords], "scale": e, "iterate": m}
    return AffinoidSelfMap(p, k, tuple(coords), provenance)
