"""Text grammar for polynomials, maps, and points, plus the canonical printer.

Grammar (polynomial mode):

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | factor
    factor  := atom ('^' nonneg-int)?
    atom    := '(' expr ')' | literal | variable
    literal := int | int '/' int          (rational literal)
    variable:= 'x1' .. 'xN' | 't'         ('t' only over F_p(t))

Point coordinates are parsed in scalar mode, which additionally allows '/'
between arbitrary factors (general quotients make sense for scalars).

The printer emits terms in graded-lexicographic order (total degree first,
then lexicographic on exponent tuples, descending) and round-trips with the
parser on polynomial-coefficient input.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .multipoly import MultiPoly, Point, PolyMap
from .scalars import QQ, RationalFunctions, Rationals


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_OPS = set("+-*^/()")


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch == "x":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("variable name must be x<index>", i)
            tokens.append(("var", int(text[i + 1 : j]), i))
            i = j
            continue
        if ch == "t":
            tokens.append(("t", "t", i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text, nvars, field, scalar_mode=False):
        self.text = text
        self.nvars = nvars
        self.field = field
        self.scalar_mode = scalar_mode
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return self.advance()

    def parse(self):
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing {tok[0]!r}", tok[2])
        return result

    def expr(self):
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.advance()
                acc = acc * self.unary()
            elif kind == "/" and self.scalar_mode:
                tok = self.advance()
                rhs = self.unary()
                acc = self._divide(acc, rhs, tok[2])
            else:
                return acc

    def unary(self):
        if self.peek()[0] == "-":
            self.advance()
            return -self.unary()
        return self.factor()

    def factor(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            tok = self.expect("int")
            return base ** tok[1]
        return base

    def atom(self):
        tok = self.peek()
        kind, value, pos = tok
        if kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "int":
            self.advance()
            # rational literal a/b; in scalar mode plain '/' handles it too
            if self.peek()[0] == "/" and not self.scalar_mode:
                self.advance()
                den_tok = self.expect("int")
                if den_tok[1] == 0:
                    raise ParseError("zero denominator in rational literal", den_tok[2])
                scalar = self.field.div(
                    self.field.from_int(value), self.field.from_int(den_tok[1])
                )
                return self._const(scalar)
            return self._const(self.field.from_int(value))
        if kind == "var":
            self.advance()
            if not 1 <= value <= self.nvars:
                raise ParseError(f"unknown variable x{value}", pos)
            return MultiPoly.variable(self.nvars, self.field, value - 1)
        if kind == "t":
            self.advance()
            if not isinstance(self.field, RationalFunctions):
                raise ParseError("variable t is only available over F_p(t)", pos)
            return self._const(self.field.t)
        raise ParseError(f"expected a term, found {kind!r}", pos)

    def _const(self, scalar):
        return MultiPoly.constant(self.nvars, self.field, scalar)

    def _divide(self, lhs, rhs, pos):
        if rhs.is_zero():
            raise ParseError("division by zero", pos)
        if rhs.total_degree() != 0:
            raise ParseError("division by a non-constant expression", pos)
        scalar = rhs.constant_term()
        F = self.field
        inv = F.div(F.one, scalar)
        return lhs.scale(inv)


# ---------------------------------------------------------------------------
# public parsing API
# ---------------------------------------------------------------------------

def parse_poly(text, nvars, field=QQ) -> MultiPoly:
    """Parse a polynomial in variables x1..x<nvars> over the given field."""
    return _Parser(text, nvars, field).parse()


def parse_map(texts, field=QQ) -> PolyMap:
    """Parse a self-map of affine N-space from N coordinate strings."""
    n = len(texts)
    return PolyMap(tuple(parse_poly(t, n, field) for t in texts))


def parse_scalar(text, field=QQ):
    """Parse a single scalar; quotients of constants are allowed."""
    poly = _Parser(text, 0, field, scalar_mode=True).parse()
    return poly.constant_term()


def parse_point(texts, field=QQ) -> Point:
    """Parse a point from one scalar string per coordinate."""
    return Point(field, tuple(parse_scalar(t, field) for t in texts))


# ---------------------------------------------------------------------------
# canonical printer
# ---------------------------------------------------------------------------

def _grlex_key(exps):
    return (sum(exps), exps)


def _format_monomial(exps):
    parts = []
    for i, e in enumerate(exps):
        if e == 0:
            continue
        parts.append(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}")
    return "*".join(parts)


def _coeff_pieces(field, coeff):
    """Return (sign, magnitude-string, needs-parens) for one coefficient."""
    if isinstance(field, Rationals):
        sign = "-" if coeff < 0 else "+"
        mag = -coeff if coeff < 0 else coeff
        return sign, str(mag), False
    text = field.fmt(coeff)
    needs = any(op in text for op in "+-/")
    return "+", text, needs


def format_poly(poly: MultiPoly) -> str:
    """Canonical form: graded-lex descending, explicit '*', '^' powers."""
    if poly.is_zero():
        return "0"
    field = poly.field
    pieces = []
    for exps in sorted(poly.terms, key=_grlex_key, reverse=True):
        coeff = poly.terms[exps]
        sign, mag, needs = _coeff_pieces(field, coeff)
        mono = _format_monomial(exps)
        one = field.fmt(field.one)
        if mono and mag == one and not needs:
            body = mono
        elif mono:
            coeff_str = f"({mag})" if needs else mag
            body = f"{coeff_str}*{mono}"
        else:
            body = f"({mag})" if needs else mag
        pieces.append((sign, body))
    first_sign, first_body = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def format_point(point: Point):
    return [point.field.fmt(c) for c in point.coords]


def format_map(pmap: PolyMap):
    return [format_poly(c) for c in pmap.coords]
