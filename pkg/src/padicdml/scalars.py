"""Coefficient fields and their scalar values.

Three fields (plus one auxiliary ring) are supported:

  * ``Rationals()``          -- scalars are ``fractions.Fraction``
  * ``PrimeField(p)``        -- scalars are ints in ``[0, p)``
  * ``RationalFunctions(p)`` -- scalars are :class:`RatFunc`, reduced
    quotients of polynomials in ``t`` over F_p (monic denominator, gcd 1)
  * ``ResidueRing(p, e)``    -- scalars are ints in ``[0, p^e)``; used for
    reductions of rational data, not as a source field

A field object owns the arithmetic on its raw scalar values, which keeps the
sparse polynomial layer generic.  Scalar values are plain immutable Python
objects and can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatch, NonIntegralAtP


# ---------------------------------------------------------------------------
# dense univariate polynomials over F_p, as tuples of ints (ascending degree)
# ---------------------------------------------------------------------------

def fp_trim(coeffs):
    """Drop trailing zeros; the zero polynomial is the empty tuple."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def fp_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return fp_trim(out)


def fp_neg(a, p):
    return tuple((-x) % p for x in a)


def fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return fp_trim(out)


def fp_scale(a, c, p):
    c %= p
    if c == 0:
        return ()
    return fp_trim((x * c) % p for x in a)


def fp_divmod(a, b, p):
    """Quotient and remainder of a by b (b nonzero) over F_p."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        coeff = (a[i + len(b) - 1] * inv_lead) % p
        if coeff:
            q[i] = coeff
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - coeff * y) % p
    return fp_trim(q), fp_trim(a)


def fp_gcd(a, b, p):
    while b:
        _, r = fp_divmod(a, b, p)
        a, b = b, r
    return fp_monic(a, p)


def fp_monic(a, p):
    if not a or a[-1] == 1:
        return a
    return fp_scale(a, pow(a[-1], -1, p), p)


def fp_pow(a, n, p):
    result = (1,)
    base = a
    while n:
        if n & 1:
            result = fp_mul(result, base, p)
        base = fp_mul(base, base, p)
        n >>= 1
    return result


def fp_degree(a):
    """Degree with the usual convention deg 0 = -1 (internal use only)."""
    return len(a) - 1


def fp_format(a, var="t"):
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            power = var if i == 1 else f"{var}^{i}"
            parts.append(head + power)
    return "+".join(parts)


# ---------------------------------------------------------------------------
# reduced rational functions over F_p
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatFunc:
    """A reduced quotient num/den of polynomials in t over F_p.

    Invariants: den is monic and nonzero, gcd(num, den) = 1, and coefficients
    are ints in [0, p).
    """

    p: int
    num: tuple
    den: tuple

    @staticmethod
    def make(p, num, den=(1,)):
        num = fp_trim(x % p for x in num)
        den = fp_trim(x % p for x in den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return RatFunc(p, (), (1,))
        if den != (1,):
            g = fp_gcd(num, den, p)
            if g != (1,):
                num, _ = fp_divmod(num, g, p)
                den, _ = fp_divmod(den, g, p)
            lead = den[-1]
            if lead != 1:
                inv = pow(lead, -1, p)
                num = fp_scale(num, inv, p)
                den = fp_scale(den, inv, p)
        return RatFunc(p, num, den)

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den == (1,)

    def degree_height(self):
        """max(deg num, deg den); used by the function-field Weil height."""
        return max(fp_degree(self.num), fp_degree(self.den))

    def __str__(self):
        num_s = fp_format(self.num)
        if self.den == (1,):
            return num_s
        return f"({num_s})/({fp_format(self.den)})"


# ---------------------------------------------------------------------------
# field descriptors
# ---------------------------------------------------------------------------

class BaseField:
    """Shared behaviour; concrete fields implement the raw arithmetic."""

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a):
        return not a

    def pow(self, a, n):
        result = self.one
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def require_same(self, other):
        if self != other:
            raise FieldMismatch(f"field mismatch: {self} vs {other}")


@dataclass(frozen=True)
class Rationals(BaseField):
    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def fmt(self, a):
        return str(a)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(BaseField):
    p: int

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        return (a * pow(b, -1, self.p)) % self.p

    def fmt(self, a):
        return str(a)

    def __str__(self):
        return f"F_{self.p}"


@dataclass(frozen=True)
class ResidueRing(BaseField):
    """Z/p^e with denominators inverted when coprime to p."""

    p: int
    e: int

    @property
    def modulus(self):
        return self.p ** self.e

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.modulus

    def from_rational(self, q):
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise NonIntegralAtP(
                f"denominator {q.denominator} is divisible by p={self.p}"
            )
        return (q.numerator * pow(q.denominator, -1, self.modulus)) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def div(self, a, b):
        if b % self.p == 0:
            raise NonIntegralAtP(f"division by non-unit {b} in Z/{self.p}^{self.e}")
        return (a * pow(b, -1, self.modulus)) % self.modulus

    def fmt(self, a):
        return str(a)

    def __str__(self):
        return f"Z/{self.p}^{self.e}"


@dataclass(frozen=True)
class RationalFunctions(BaseField):
    """The field F_p(t) of reduced rational functions."""

    p: int

    @property
    def zero(self):
        return RatFunc(self.p, (), (1,))

    @property
    def one(self):
        return RatFunc(self.p, (1,), (1,))

    @property
    def t(self):
        return RatFunc(self.p, (0, 1), (1,))

    def from_int(self, n):
        return RatFunc.make(self.p, (n,))

    def add(self, a, b):
        num = fp_add(
            fp_mul(a.num, b.den, self.p), fp_mul(b.num, a.den, self.p), self.p
        )
        den = fp_mul(a.den, b.den, self.p)
        return RatFunc.make(self.p, num, den)

    def neg(self, a):
        return RatFunc(self.p, fp_neg(a.num, self.p), a.den)

    def mul(self, a, b):
        if a.den == (1,) and b.den == (1,):
            return RatFunc(self.p, fp_mul(a.num, b.num, self.p), (1,))
        return RatFunc.make(
            self.p, fp_mul(a.num, b.num, self.p), fp_mul(a.den, b.den, self.p)
        )

    def div(self, a, b):
        if not b.num:
            raise ZeroDivisionError("division by zero in F_p(t)")
        return RatFunc.make(
            self.p, fp_mul(a.num, b.den, self.p), fp_mul(a.den, b.num, self.p)
        )

    def fmt(self, a):
        return str(a)

    def __str__(self):
        return f"F_{self.p}(t)"


QQ = Rationals()
