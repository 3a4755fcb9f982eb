"""Rational-map expression parsing, canonical printing, and exact lowering.

Grammar (recursive descent):

    expr   := ('+' | '-')? term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' integer)?
    base   := number | 'i' | 'z' | '(' expr ')'

Number literals are integers or terminating decimals, read exactly (no
floats).  A number literal immediately followed by 'z' or '(' multiplies
implicitly ("2z", "4(z+1)").  Exponents are nonnegative integers.  Lowering
evaluates the tree in the exact rational-function field, so the resulting
RationalMap is the normalized form of the written formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .maps import RationalMap, constant_map, identity_map
from .polynomials import Polynomial
from .rationals import GaussianRational, I as IMAG_UNIT


class ParseError(ValueError):
    """Syntax error with the offset and the token set that was expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + ", ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class LoweringError(ValueError):
    """Semantic error found while lowering syntax to a rational map."""


# -- syntax tree -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Num:
    value: Fraction


@dataclass(frozen=True, slots=True)
class Imag:
    pass


@dataclass(frozen=True, slots=True)
class Var:
    pass


@dataclass(frozen=True, slots=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True, slots=True)
class Power:
    base: "Node"
    exponent: int


Node = Union[Num, Imag, Var, Neg, BinOp, Power]


# -- tokenizer -------------------------------------------------------------------

_OPERATORS = "+-*/^()"


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # "number", "z", "i", an operator character, or "end"
    text: str
    offset: int
    value: Fraction | None = None


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            if pos < n and text[pos] == ".":
                pos += 1
                if pos >= n or not text[pos].isdigit():
                    raise ParseError("malformed decimal literal", pos, ("digit",))
                while pos < n and text[pos].isdigit():
                    pos += 1
            literal = text[start:pos]
            tokens.append(_Token("number", literal, start, Fraction(literal)))
            # implicit multiplication: number directly followed by 'z' or '('
            if pos < n and text[pos] in ("z", "("):
                tokens.append(_Token("*", "*", pos))
            continue
        if ch == "z" or ch == "i":
            tokens.append(_Token(ch, ch, pos))
            pos += 1
            continue
        if ch in _OPERATORS:
            tokens.append(_Token(ch, ch, pos))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos, ("number", "z", "i", "operator"))
    tokens.append(_Token("end", "", n))
    return tokens


# -- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.kind!r}", tok.offset, (kind,))
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r}", tok.offset, ("+", "-", "*", "/", "^", "end"))
        return node

    def expr(self) -> Node:
        negated = False
        if self.peek().kind in ("+", "-"):
            negated = self.advance().kind == "-"
        node = self.term()
        if negated:
            node = Neg(node)
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.base()
        if self.peek().kind == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "number" or tok.value.denominator != 1:
                raise ParseError("exponent must be a nonnegative integer", tok.offset, ("integer",))
            self.advance()
            node = Power(node, int(tok.value))
        return node

    def base(self) -> Node:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(tok.value)
        if tok.kind == "i":
            self.advance()
            return Imag()
        if tok.kind == "z":
            self.advance()
            return Var()
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok.kind!r}", tok.offset, ("number", "i", "z", "("))


# -- canonical printing of syntax --------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC_ADD if node.op in "+-" else _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_ADD
    if isinstance(node, Power):
        return _PREC_POW
    return _PREC_ATOM


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    # terminating decimals round-trip through the tokenizer as the same Num
    q = value.denominator
    twos = fives = 0
    while q % 2 == 0:
        q //= 2
        twos += 1
    while q % 5 == 0:
        q //= 5
        fives += 1
    if q == 1:
        places = max(twos, fives)
        scaled = value.numerator * 10**places // value.denominator
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(places + 1, "0")
        whole, frac = digits[:-places], digits[-places:].rstrip("0") or "0"
        return f"{sign}{whole}.{frac}"
    return f"{value.numerator}/{value.denominator}"


def print_node(node: Node, parent_prec: int = 0) -> str:
    if isinstance(node, Num):
        text = _format_fraction(node.value)
        # p/q falls back to a division expression and needs product parens
        prec = _PREC_MUL if "/" in text else _PREC_ATOM
    elif isinstance(node, Imag):
        text, prec = "i", _PREC_ATOM
    elif isinstance(node, Var):
        text, prec = "z", _PREC_ATOM
    elif isinstance(node, Neg):
        text = "-" + print_node(node.operand, _PREC_MUL)
        prec = _PREC_ADD
    elif isinstance(node, Power):
        text = print_node(node.base, _PREC_POW + 1) + "^" + str(node.exponent)
        prec = _PREC_POW
    else:
        prec = _PREC_ADD if node.op in "+-" else _PREC_MUL
        left = print_node(node.left, prec)
        right = print_node(node.right, prec + 1)
        text = f"{left}{node.op}{right}"
    if prec < parent_prec:
        return f"({text})"
    return text


# -- lowering ----------------------------------------------------------------------


def lower(node: Node) -> RationalMap:
    if isinstance(node, Num):
        return constant_map(GaussianRational(node.value))
    if isinstance(node, Imag):
        return constant_map(IMAG_UNIT)
    if isinstance(node, Var):
        return identity_map()
    if isinstance(node, Neg):
        return -lower(node.operand)
    if isinstance(node, Power):
        return lower(node.base) ** node.exponent
    left = lower(node.left)
    right = lower(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right.num.is_zero():
        raise LoweringError("division by the zero polynomial")
    return left / right


@dataclass(frozen=True, slots=True)
class MapExpression:
    """Parsed map formula: source text plus its syntax tree."""

    source: str
    ast: Node

    def canonical_text(self) -> str:
        return print_node(self.ast)

    def to_map(self) -> RationalMap:
        return lower(self.ast)


def parse_map(text: str) -> MapExpression:
    """Parse a formula in z; raises ParseError with offset and expectations."""
    return MapExpression(text, _Parser(text).parse())


# -- canonical printing of normalized maps ------------------------------------------


def _clear_denominators(f: RationalMap) -> tuple[Polynomial, Polynomial]:
    denoms = [1]
    for poly in (f.num, f.den):
        for c in poly.coeffs:
            denoms.append(c.re.denominator)
            denoms.append(c.im.denominator)
    lam = 1
    for d in denoms:
        g = _int_gcd(lam, d)
        lam = lam // g * d
    num = f.num.scale(Fraction(lam))
    den = f.den.scale(Fraction(lam))
    ints = [
        abs(int(part))
        for poly in (num, den)
        for c in poly.coeffs
        for part in (c.re, c.im)
        if part
    ]
    g = 0
    for v in ints:
        g = _int_gcd(g, v)
    if g > 1:
        num = num.scale(Fraction(1, g))
        den = den.scale(Fraction(1, g))
    return num, den


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


def _coeff_text(c: GaussianRational) -> tuple[str, bool]:
    """(text, needs_parens_when_multiplied)"""
    if c.im == 0:
        return str(c.re), False
    if c.re == 0:
        if c.im == 1:
            return "i", False
        if c.im == -1:
            return "-i", False
        return f"{c.im}*i", True
    im = f"+{c.im}*i" if c.im > 0 else f"{c.im}*i"
    im = im.replace("1*i", "i") if abs(c.im) == 1 else im
    return f"({c.re}{im})", False


def polynomial_text(p: Polynomial) -> str:
    """Descending powers with explicit * and ^; Gaussian-integer coefficients
    expected (see _clear_denominators)."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if not c:
            continue
        if k == 0:
            body, _ = _coeff_text(c)
            term = body
        else:
            zpow = "z" if k == 1 else f"z^{k}"
            if c.im == 0 and c.re == 1:
                term = zpow
            elif c.im == 0 and c.re == -1:
                term = f"-{zpow}"
            else:
                body, parens = _coeff_text(c)
                if parens:
                    body = f"({body})"
                term = f"{body}*{zpow}"
        if parts and not term.startswith("-"):
            parts.append("+")
        parts.append(term)
    return "".join(parts)


def _is_atomic_poly_text(p: Polynomial) -> bool:
    nonzero = [(k, c) for k, c in enumerate(p.coeffs) if c]
    if len(nonzero) != 1:
        return False
    k, c = nonzero[0]
    if k == 0:
        return c.im == 0 and c.re > 0
    return c.im == 0 and c.re == 1


def map_text(f: RationalMap) -> str:
    """Canonical expression string for a normalized map.

    Denominators are cleared so both parts print with Gaussian-integer
    coefficients; the string re-parses and lowers back to an equal map.
    """
    num, den = _clear_denominators(f)
    if den.degree == 0 and den.coeff(0).re == 1 and den.coeff(0).im == 0:
        return polynomial_text(num)
    num_text = polynomial_text(num)
    den_text = polynomial_text(den)
    if not _is_atomic_poly_text(num):
        num_text = f"({num_text})"
    if not _is_atomic_poly_text(den):
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"


def moebius_text(m) -> str:
    return map_text(m.as_rational_map())
