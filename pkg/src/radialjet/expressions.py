"""A minimal polynomial expression grammar for the command line.

Grammar (whitespace ignored)::

    expr     :=  term (("+" | "-") term)*
    term     :=  factor ("*" factor)*
    factor   :=  base ("^" nat)?
    base     :=  "-" base | rational | variable | "(" expr ")"
    rational :=  int ("/" nat)?
    variable :=  "z" nat          (z1, z2, ...)

"/" only joins two integer literals into an exact rational; there is no
general division.  Exponents are non-negative integer literals.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .jets import EXACT, Jet, MultiIndex


class ExpressionError(ValueError):
    """Malformed polynomial expression."""


_TOKEN = re.compile(r"\s*(?:(\d+)|z(\d+)|([+\-*^()/]))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise ExpressionError(f"unexpected character at position {pos}: {text[pos:]!r}")
            break
        if match.group(1) is not None:
            tokens.append(("int", int(match.group(1))))
        elif match.group(2) is not None:
            tokens.append(("var", int(match.group(2))))
        else:
            tokens.append((match.group(3), None))
        pos = match.end()
    return tokens


class _Poly(dict):
    """Sparse polynomial: exponent tuple -> Fraction (tuples padded on demand)."""

    @staticmethod
    def const(c) -> "_Poly":
        p = _Poly()
        if c:
            p[()] = Fraction(c)
        return p

    @staticmethod
    def var(j: int) -> "_Poly":
        p = _Poly()
        p[tuple(0 for _ in range(j - 1)) + (1,)] = Fraction(1)
        return p

    def add(self, other: "_Poly") -> "_Poly":
        out = _Poly(self)
        for k, v in other.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out

    def neg(self) -> "_Poly":
        return _Poly({k: -v for k, v in self.items()})

    def mul(self, other: "_Poly") -> "_Poly":
        out = _Poly()
        for ka, va in self.items():
            for kb, vb in other.items():
                width = max(len(ka), len(kb))
                a = ka + (0,) * (width - len(ka))
                b = kb + (0,) * (width - len(kb))
                key = tuple(x + y for x, y in zip(a, b))
                s = out.get(key, Fraction(0)) + va * vb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def pow(self, e: int) -> "_Poly":
        out = _Poly.const(1)
        for _ in range(e):
            out = out.mul(self)
        return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind!r}, got {tok[0]!r} at token {self.pos}")
        self.pos += 1
        return tok

    def parse(self) -> _Poly:
        poly = self.expr()
        if self.pos != len(self.tokens):
            raise ExpressionError(f"trailing input at token {self.pos}")
        return poly

    def expr(self) -> _Poly:
        out = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _ = self.take()
            rhs = self.term()
            out = out.add(rhs if op == "+" else rhs.neg())
        return out

    def term(self) -> _Poly:
        out = self.factor()
        while self.peek()[0] == "*":
            self.take()
            out = out.mul(self.factor())
        return out

    def factor(self) -> _Poly:
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            _, e = self.take("int")
            return base.pow(e)
        return base

    def base(self) -> _Poly:
        kind, value = self.peek()
        if kind == "-":
            self.take()
            return self.base().neg()
        if kind == "int":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                _, q = self.take("int")
                if q == 0:
                    raise ExpressionError("zero denominator")
                return _Poly.const(Fraction(value, q))
            return _Poly.const(value)
        if kind == "var":
            self.take()
            return _Poly.var(value)
        if kind == "(":
            self.take()
            out = self.expr()
            self.take(")")
            return out
        raise ExpressionError(f"unexpected token {kind!r} at position {self.pos}")


def parse_polynomial(
    text: str, n: int | None = None, D: int | None = None, regime: str = EXACT
) -> Jet:
    """Parse an expression into a jet.

    ``n`` defaults to the highest variable index used (at least 1) and
    ``D`` to the total degree of the polynomial; explicit values must be
    large enough to hold every term.
    """
    poly = _Parser(_tokenize(text)).parse()
    width = max((len(k) for k in poly), default=0)
    degree = max((sum(k) for k in poly), default=0)
    n = max(width, 1) if n is None else n
    D = degree if D is None else D
    if width > n:
        raise ExpressionError(f"expression uses z{width} but n={n}")
    if degree > D:
        raise ExpressionError(f"expression has degree {degree} but cap D={D}")
    coeffs = {MultiIndex(k + (0,) * (n - len(k))): v for k, v in poly.items()}
    return Jet.from_coeffs(n, D, coeffs, regime)
