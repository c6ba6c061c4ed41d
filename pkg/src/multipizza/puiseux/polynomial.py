"""Bivariate polynomials with rational coefficients and a small text parser.

Grammar (whitespace ignored)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'|'/'] factor)*      # juxtaposition multiplies
    factor := atom (('^'|'**') INTEGER)?
    atom   := NUMBER | 'x' | 'y' | '(' expr ')' | ('+'|'-') factor

Division is only allowed by nonzero constants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from ..errors import NonGermError, PolynomialSyntaxError, ZeroPolynomial

Monomial = Tuple[int, int]


class Polynomial:
    """Sparse polynomial in x, y: ``terms[(i, j)]`` is the coefficient of x^i y^j."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Monomial, Fraction] | None = None):
        clean = {}
        for (i, j), c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                if i < 0 or j < 0:
                    raise ValueError("negative exponent in polynomial")
                clean[(int(i), int(j))] = c
        self.terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def x(cls) -> "Polynomial":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def y(cls) -> "Polynomial":
        return cls({(0, 1): Fraction(1)})

    # basic predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=0)

    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=0)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    # substitutions used for chart and quadrant changes
    def swap(self) -> "Polynomial":
        """f(y, x)."""
        return Polynomial({(j, i): c for (i, j), c in self.terms.items()})

    def reflect(self, sx: int = 1, sy: int = 1) -> "Polynomial":
        """f(sx*x, sy*y) for signs sx, sy in {+1, -1}."""
        return Polynomial({(i, j): c * (sx ** i) * (sy ** j) for (i, j), c in self.terms.items()})

    def y_coefficients(self) -> Dict[int, Dict[int, Fraction]]:
        """Group as sum_j a_j(x) y^j; returns {j: {i: coeff}}."""
        out: Dict[int, Dict[int, Fraction]] = {}
        for (i, j), c in self.terms.items():
            out.setdefault(j, {})[i] = c
        return out

    def evaluate(self, x, y):
        total = 0
        for (i, j), c in self.terms.items():
            total += c * (x ** i) * (y ** j)
        return total

    def to_sympy(self, xs=None, ys=None):
        import sympy

        xs = xs if xs is not None else sympy.Symbol("x")
        ys = ys if ys is not None else sympy.Symbol("y")
        return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * xs ** i * ys ** j
                           for (i, j), c in self.terms.items()])

    @classmethod
    def from_sympy(cls, expr, xs=None, ys=None) -> "Polynomial":
        import sympy

        xs = xs if xs is not None else sympy.Symbol("x")
        ys = ys if ys is not None else sympy.Symbol("y")
        poly = sympy.Poly(expr, xs, ys, domain="QQ")
        return cls({(int(i), int(j)): Fraction(int(c.p), int(c.q)) if hasattr(c, "p")
                    else Fraction(str(c)) for (i, j), c in poly.terms()})

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        # highest total degree first reads more naturally
        for (i, j), c in sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            mono = "*".join(p for p in (_power("x", i), _power("y", j)) if p)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{_num(mag)}*{mono}"
            else:
                body = _num(mag)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f"{sign}{body}"
        return text


def _power(var, n):
    if n == 0:
        return ""
    return var if n == 1 else f"{var}^{n}"


def _num(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def _coerce(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Polynomial.constant(value)
    raise TypeError(f"cannot combine Polynomial with {type(value).__name__}")


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|(\*\*|[-+*/^()])|([A-Za-z_][A-Za-z_0-9]*))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("op", m.group(2), start))
        else:
            name = m.group(3)
            if name not in ("x", "y"):
                raise PolynomialSyntaxError(f"unknown variable {name!r}", start, "x or y")
            tokens.append(("var", name, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos, repr(op))
        self.take()

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError("empty expression", 0, "a term")
        poly = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected {val!r}", pos, "operator or end of input")
        return poly

    def expr(self) -> Polynomial:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            first = self.term()
            result = -first if val == "-" else first
        else:
            result = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                rhs = self.term()
                result = result + rhs if val == "+" else result - rhs
            else:
                return result

    def term(self) -> Polynomial:
        result = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                divisor = self.factor()
                if not divisor.is_constant() or divisor.is_zero():
                    raise PolynomialSyntaxError("division only by nonzero constants", pos, "a number")
                result = result * Polynomial.constant(1 / divisor.constant_term())
            elif kind in ("num", "var") or (kind == "op" and val == "("):
                result = result * self.factor()
            else:
                return result

    def factor(self) -> Polynomial:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "." in val:
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", pos, "integer")
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            return Polynomial.constant(Fraction(val))
        if kind == "var":
            return Polynomial.x() if val == "x" else Polynomial.y()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "op" and val in "+-":
            inner = self.factor()
            return -inner if val == "-" else inner
        raise PolynomialSyntaxError(f"unexpected {val or 'end of input'!r}", pos, "number, x, y or '('")


def parse_polynomial(text: str, require_germ: bool = True) -> Polynomial:
    """Parse ``text`` into a canonical :class:`Polynomial`.

    Raises PolynomialSyntaxError with a character position, and NonGermError
    when the polynomial has a nonzero constant term.
    """
    poly = _Parser(text).parse()
    if require_germ and poly.constant_term() != 0:
        raise NonGermError(f"{text!r} does not vanish at the origin (constant term {poly.constant_term()})")
    return poly


def require_nonzero(f: Polynomial):
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")


def from_terms(items: Iterable[Tuple[int, int, Fraction]]) -> Polynomial:
    return Polynomial({(i, j): c for i, j, c in items})
