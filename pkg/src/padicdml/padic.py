"""Capped-precision p-adic arithmetic, Mahler polynomials, power series with
certified tails, and Strassmann zero counting.

Conventions.  A nonzero :class:`PadicNumber` is ``p^v * (unit + O(p^prec))``
with ``unit`` coprime to p, so its norm is exactly ``p^(-v)`` and its absolute
precision is ``v + prec``.  Two degenerate shapes exist: the exact zero, and
the "unknown-small" value ``O(p^a)`` (``unit == 0``) about which only
``|x| <= p^(-a)`` is certified.  Arithmetic tracks these certificates and
never inflates them; cancellation in sums loses relative precision exactly as
it must.

A :class:`PadicSeries` certifies: the represented function on the closed unit
disc is ``sum c_i T^i`` where each stored coefficient differs from the true
one by at most its own absolute precision, and every omitted coefficient
(index beyond the truncation degree) has norm ``<= p^(-tail)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted

DEFAULT_PRECISION = 64
DEFAULT_PRECISION_MAX = 512

INFINITE = math.inf


def int_valuation(n, p):
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(n, p):
    """v_p(n!) by Legendre's formula."""
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


@dataclass(frozen=True)
class PadicNumber:
    p: int
    v: int = 0
    unit: int = 0
    prec: int = 0
    zero: bool = False

    # -- constructors -------------------------------------------------------

    @staticmethod
    def exact_zero(p):
        return PadicNumber(p, 0, 0, 0, zero=True)

    @staticmethod
    def unknown(p, abs_prec):
        """O(p^abs_prec): only |x| <= p^(-abs_prec) is certified."""
        return PadicNumber(p, abs_prec, 0, 0)

    @staticmethod
    def from_rational(p, value, prec=DEFAULT_PRECISION):
        value = Fraction(value)
        if value == 0:
            return PadicNumber.exact_zero(p)
        num, den = value.numerator, value.denominator
        v = int_valuation(num, p) - int_valuation(den, p)
        num //= p ** max(int_valuation(num, p), 0)
        den //= p ** max(int_valuation(den, p), 0)
        modulus = p ** prec
        unit = (num * pow(den, -1, modulus)) % modulus
        return PadicNumber(p, v, unit, prec)

    @staticmethod
    def from_residue(p, residue, abs_prec):
        """A value known to equal ``residue`` modulo p^abs_prec."""
        residue %= p ** abs_prec
        if residue == 0:
            return PadicNumber.unknown(p, abs_prec)
        v = int_valuation(residue, p)
        unit = (residue // p ** v) % p ** (abs_prec - v)
        return PadicNumber(p, v, unit, abs_prec - v)

    # -- certificates --------------------------------------------------------

    @property
    def known_nonzero(self):
        return self.unit != 0

    @property
    def abs_prec(self):
        """Exponent a with the error of this representation <= p^(-a)."""
        if self.zero:
            return INFINITE
        return self.v + self.prec

    @property
    def valuation_lower_bound(self):
        """Certified a with |x| <= p^(-a)."""
        if self.zero:
            return INFINITE
        return self.v

    def valuation(self):
        """Exact valuation; infinite for the exact zero."""
        if self.zero:
            return INFINITE
        if not self.known_nonzero:
            raise PrecisionExhausted(
                f"valuation undetermined: value is O({self.p}^{self.v})"
            )
        return self.v

    def to_int_mod(self, abs_prec):
        """Integer representative mod p^abs_prec (needs v >= 0 and precision)."""
        if self.zero:
            return 0
        if self.abs_prec < abs_prec:
            raise PrecisionExhausted(
                f"need absolute precision {abs_prec}, have {self.abs_prec}"
            )
        if not self.known_nonzero:
            return 0
        if self.v < 0:
            raise ValueError("negative valuation has no integer representative")
        return (self.unit * self.p ** self.v) % self.p ** abs_prec

    # -- arithmetic ----------------------------------------------------------

    def _require_same_p(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes in p-adic arithmetic")

    def __add__(self, other):
        self._require_same_p(other)
        p = self.p
        if self.zero:
            return other
        if other.zero:
            return self
        if not self.known_nonzero or not other.known_nonzero:
            # at least one operand is only bounded above
            if self.known_nonzero or other.known_nonzero:
                known = self if self.known_nonzero else other
                small = other if self.known_nonzero else self
                a = small.valuation_lower_bound
                if known.v < a:
                    # the known part dominates; precision capped by the bound
                    prec = min(known.prec, a - known.v)
                    return PadicNumber(p, known.v, known.unit % p ** prec, prec)
                return PadicNumber.unknown(p, a)
            return PadicNumber.unknown(
                p, min(self.valuation_lower_bound, other.valuation_lower_bound)
            )
        shift = min(self.v, other.v)
        abs_out = min(self.abs_prec, other.abs_prec)
        modulus = p ** (abs_out - shift)
        n = (
            self.unit * p ** (self.v - shift)
            + other.unit * p ** (other.v - shift)
        ) % modulus
        if n == 0:
            return PadicNumber.unknown(p, abs_out)
        w = int_valuation(n, p)
        unit = (n // p ** w) % p ** (abs_out - shift - w)
        return PadicNumber(p, shift + w, unit, abs_out - shift - w)

    def __neg__(self):
        if self.zero or not self.known_nonzero:
            return self
        return PadicNumber(
            self.p, self.v, (-self.unit) % self.p ** self.prec, self.prec
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._require_same_p(other)
        p = self.p
        if self.zero or other.zero:
            return PadicNumber.exact_zero(p)
        if not self.known_nonzero or not other.known_nonzero:
            return PadicNumber.unknown(
                p, self.valuation_lower_bound + other.valuation_lower_bound
            )
        prec = min(self.prec, other.prec)
        unit = (self.unit * other.unit) % p ** prec
        return PadicNumber(p, self.v + other.v, unit, prec)

    def __truediv__(self, other):
        self._require_same_p(other)
        p = self.p
        if other.zero or not other.known_nonzero:
            raise ZeroDivisionError("division by a p-adic value not known nonzero")
        if self.zero:
            return PadicNumber.exact_zero(p)
        if not self.known_nonzero:
            return PadicNumber.unknown(p, self.v - other.v)
        prec = min(self.prec, other.prec)
        modulus = p ** prec
        unit = (self.unit * pow(other.unit, -1, modulus)) % modulus
        return PadicNumber(p, self.v - other.v, unit, prec)

    def __pow__(self, n):
        if n < 0:
            one = PadicNumber.from_rational(self.p, 1, max(self.prec, 1))
            return (one / self) ** (-n)
        if n == 0:
            return PadicNumber.from_rational(self.p, 1)
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def congruent(self, other, abs_prec):
        """Certified |self - other| <= p^(-abs_prec)."""
        return (self - other).valuation_lower_bound >= abs_prec

    def __repr__(self):
        if self.zero:
            return f"0 (exact, p={self.p})"
        if not self.known_nonzero:
            return f"O({self.p}^{self.v})"
        return f"{self.p}^{self.v}*({self.unit} + O({self.p}^{self.prec}))"


def valuation(x):
    """Spec operation: exact valuation of a PadicNumber, +inf for exact zero."""
    return x.valuation()


def lift_int(p, n, prec=DEFAULT_PRECISION):
    return PadicNumber.from_rational(p, n, prec)


# ---------------------------------------------------------------------------
# Mahler (binomial) polynomials
# ---------------------------------------------------------------------------

_MAHLER_ROWS = [(Fraction(1),)]


def _mahler_row(i):
    while len(_MAHLER_ROWS) <= i:
        j = len(_MAHLER_ROWS) - 1
        coeffs = _MAHLER_ROWS[-1]
        # multiply by (T - j) / (j + 1)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            nxt[k + 1] += c
            nxt[k] -= c * j
        _MAHLER_ROWS.append(tuple(c / (j + 1) for c in nxt))
    return _MAHLER_ROWS[i]


def mahler_term(i, degree_cap=None):
    """Exact coefficients of binom(T, i) = T(T-1)...(T-i+1)/i! in T.

    Returns Fractions c_0..c_d (ascending powers of T), truncated to
    ``degree_cap`` when that is below i.
    """
    if i < 0:
        raise ValueError("mahler_term needs i >= 0")
    coeffs = _mahler_row(i)
    if degree_cap is not None and len(coeffs) > degree_cap + 1:
        coeffs = coeffs[: degree_cap + 1]
    return list(coeffs)


# ---------------------------------------------------------------------------
# the convergence threshold R = p^(-1/(p-1))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RConstant:
    """R = p^(-1/(p-1)) stored as an exact rational exponent of p.

    For residue characteristic 0 (p is None) R = 1.  All comparisons against
    integer-exponent norms p^(-d) are exact rational-exponent comparisons;
    no floating point is involved.
    """

    p: int | None

    @property
    def exponent(self):
        """R = p^exponent."""
        if self.p is None:
            return Fraction(0)
        return Fraction(-1, self.p - 1)

    def certifies_contraction(self, d):
        """Exact test p^(-d) < R, i.e. d*(p-1) > 1 (strict)."""
        if self.p is None:
            return d > 0
        return d * (self.p - 1) > 1

    def geometric_tail_exponent(self, d, i):
        """Largest integer m with (p^(-d)/R)^i <= p^(-m); exact.

        (p^(-d) / p^(-1/(p-1)))^i = p^(-i(d(p-1)-1)/(p-1)).
        """
        if self.p is None:
            return d * i
        num = i * (d * (self.p - 1) - 1)
        return num // (self.p - 1)

    def terms_needed(self, d, tau):
        """Smallest i with the geometric tail below p^(-tau); exact ceiling."""
        if self.p is None:
            return -(-tau // d)
        num = tau * (self.p - 1)
        den = d * (self.p - 1) - 1
        if den <= 0:
            raise ValueError("contraction not strict enough for a finite tail")
        return -(-num // den)


# ---------------------------------------------------------------------------
# one-variable power series with certified tails
# ---------------------------------------------------------------------------

class PadicSeries:
    """Truncated power series sum c_i T^i with a certified tail bound."""

    __slots__ = ("p", "coeffs", "tail")

    def __init__(self, p, coeffs, tail):
        self.p = p
        self.coeffs = list(coeffs)
        self.tail = tail
        while self.coeffs and self.coeffs[-1].zero:
            self.coeffs.pop()
        if not self.coeffs:
            self.coeffs = [PadicNumber.exact_zero(p)]

    @staticmethod
    def from_rationals(p, values, prec=DEFAULT_PRECISION, tail=INFINITE):
        return PadicSeries(
            p, [PadicNumber.from_rational(p, v, prec) for v in values], tail
        )

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def tau(self):
        """The uniform certified bound: min of tail and coefficient precisions."""
        worst = self.tail
        for c in self.coeffs:
            worst = min(worst, c.abs_prec)
        return worst

    def stored_min_valuation(self):
        return min((c.valuation_lower_bound for c in self.coeffs), default=INFINITE)

    def __add__(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes")
        n = max(len(self.coeffs), len(other.coeffs))
        zero = PadicNumber.exact_zero(self.p)
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else zero
            b = other.coeffs[i] if i < len(other.coeffs) else zero
            out.append(a + b)
        return PadicSeries(self.p, out, min(self.tail, other.tail))

    def __neg__(self):
        return PadicSeries(self.p, [-c for c in self.coeffs], self.tail)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.p != other.p:
            raise ValueError("mixed primes")
        zero = PadicNumber.exact_zero(self.p)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.zero:
                    continue
                out[i + j] = out[i + j] + a * b
        tail = min(
            self.tail + other.stored_min_valuation(),
            other.tail + self.stored_min_valuation(),
            self.tail + other.tail,
        )
        return PadicSeries(self.p, out, tail)

    def scale(self, scalar: PadicNumber):
        if scalar.zero:
            return PadicSeries(self.p, [scalar], INFINITE)
        return PadicSeries(
            self.p,
            [c * scalar for c in self.coeffs],
            self.tail + scalar.valuation_lower_bound,
        )

    def truncate(self, degree):
        """Drop terms above ``degree``, folding their bounds into the tail."""
        if degree >= self.degree:
            return self
        tail = self.tail
        for c in self.coeffs[degree + 1 :]:
            tail = min(tail, c.valuation_lower_bound)
        return PadicSeries(self.p, self.coeffs[: degree + 1], tail)

    def derivative(self):
        if len(self.coeffs) == 1:
            return PadicSeries(
                self.p, [PadicNumber.exact_zero(self.p)], self.tail
            )
        out = []
        for i in range(1, len(self.coeffs)):
            factor = PadicNumber.from_rational(
                self.p, i, max(self.coeffs[i].prec, 1) + 1
            )
            out.append(self.coeffs[i] * factor)
        # |i * c_i| <= |c_i|, so omitted derivative coefficients keep the bound
        return PadicSeries(self.p, out, self.tail)

    def evaluate_at_int(self, n, prec=None):
        """Certified value at an integer argument (|n|_p <= 1)."""
        p = self.p
        if prec is None:
            prec = max((c.prec for c in self.coeffs if c.known_nonzero), default=DEFAULT_PRECISION)
            prec = max(prec, 1) + 8
        acc = PadicNumber.exact_zero(p)
        power = PadicNumber.from_rational(p, 1, prec)
        n_lift = PadicNumber.from_rational(p, n, prec)
        for i, c in enumerate(self.coeffs):
            if i:
                power = power * n_lift
            if not c.zero:
                acc = acc + c * power
        if self.tail != INFINITE:
            acc = acc + PadicNumber.unknown(p, self.tail)
        return acc

    def __repr__(self):
        head = ", ".join(repr(c) for c in self.coeffs[:4])
        return f"PadicSeries(p={self.p}, deg={self.degree}, tail={self.tail}, [{head}, ...])"


# ---------------------------------------------------------------------------
# Strassmann zero counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrassmannResult:
    degenerate: bool
    bound: int | None = None
    max_valuation: int | None = None

    def __bool__(self):
        return not self.degenerate


DEGENERATE = StrassmannResult(degenerate=True)


def strassmann_bound(series: PadicSeries) -> StrassmannResult:
    """Certified upper bound on unit-disc zeros, or DEGENERATE.

    The bound B is the largest stored index whose coefficient certifiably
    attains the maximal coefficient norm.  The certificate requires the
    maximal norm to strictly dominate every uncertainty: the tail bound and
    every coefficient known only as O(p^a).  When no coefficient is
    certifiably nonzero (or an uncertainty could reach the maximum), the
    series is indistinguishable from worse cases at this precision and the
    result is DEGENERATE.
    """
    v_star = None
    for c in series.coeffs:
        if c.known_nonzero and (v_star is None or c.v < v_star):
            v_star = c.v
    if v_star is None:
        return DEGENERATE
    if series.tail != INFINITE and series.tail <= v_star:
        return DEGENERATE
    for c in series.coeffs:
        if not c.zero and not c.known_nonzero and c.valuation_lower_bound <= v_star:
            return DEGENERATE
    bound = max(i for i, c in enumerate(series.coeffs) if c.known_nonzero and c.v == v_star)
    return StrassmannResult(False, bound, v_star)


def find_integer_zeros(series: PadicSeries, n_max, membership_oracle, bound=None):
    """Locate integer zeros in [0, n_max] and decide whether they exhaust the
    Strassmann budget.

    Zeros are confirmed only by the exact ``membership_oracle``; the series
    supplies the count bound.  ``resolved`` is True exactly when the number of
    confirmed hits equals the bound (the unit disc then carries no further
    zeros, so no returns exist beyond the horizon in this class).  Each hit is
    additionally Hensel-checked (series value below the certification floor,
    derivative certifiably a unit-scale nonzero) and the outcome recorded.
    """
    if bound is None:
        result = strassmann_bound(series)
        if result.degenerate:
            raise ValueError("find_integer_zeros needs a non-degenerate bound")
        bound = result.bound
    hits = [n for n in range(n_max + 1) if membership_oracle(n)]
    if len(hits) > bound:
        raise PrecisionExhausted(
            f"{len(hits)} exact zeros exceed the Strassmann bound {bound}; "
            "the series certificate is too coarse"
        )
    deriv = series.derivative()
    separations = []
    for n in hits:
        value = series.evaluate_at_int(n)
        if value.known_nonzero:
            raise PrecisionExhausted(
                f"series certifiably nonzero at exact zero T={n}; "
                "working precision is inconsistent"
            )
        dval = deriv.evaluate_at_int(n)
        separated = (
            dval.known_nonzero
            and value.valuation_lower_bound > 2 * dval.v
        )
        separations.append({"t": n, "separated": separated,
                            "derivative_valuation": dval.v if dval.known_nonzero else None})
    return {
        "zeros": hits,
        "resolved": len(hits) == bound,
        "bound": bound,
        "separations": separations,
    }
