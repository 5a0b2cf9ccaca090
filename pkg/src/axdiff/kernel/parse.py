"""Recursive-descent parser and printer for rational expressions.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-')? atom ('^' nonneg-int)?
    atom   := integer | identifier | '(' expr ')'

In form mode an extra atom ``d(expr)`` is accepted; it denotes the
differential of ``expr`` and is used by the ``lie`` command.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from axdiff.kernel.ratfunc import MPoly, RatFunc, to_fraction


class ParseError(ValueError):
    """Malformed input; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos
        self.text = text
        self.reason = message


class UnknownSymbolError(ValueError):
    def __init__(self, name: str, pos: int | None = None):
        where = "" if pos is None else f" at position {pos}"
        super().__init__(f"undeclared symbol {name}{where}")
        self.name = name
        self.pos = pos


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Diff:
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Diff]

_TOKEN = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S)")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        start = pos
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_diff: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_diff = allow_diff

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        if self.tok[0] != kind:
            self.fail(f"expected {kind!r}")
        return self.advance()

    def fail(self, message):
        kind, value, pos = self.tok
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"{message}, found {found}", pos, self.text)

    def parse(self) -> Node:
        if self.tok[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            self.fail("unexpected trailing input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.advance()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.tok[0] in ("*", "/"):
            op = self.advance()[0]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        negate = False
        if self.tok[0] == "-":
            self.advance()
            negate = True
        node = self.atom()
        if self.tok[0] == "^":
            self.advance()
            if self.tok[0] != "int":
                self.fail("expected a nonnegative integer exponent")
            node = Pow(node, int(self.advance()[1]))
        return Neg(node) if negate else node

    def atom(self) -> Node:
        kind, value, pos = self.tok
        if kind == "int":
            self.advance()
            return Num(int(value))
        if kind == "ident":
            self.advance()
            if self.allow_diff and value == "d" and self.tok[0] == "(":
                self.advance()
                inner = self.expr()
                self.expect(")")
                return Diff(inner)
            return Var(value, pos)
        if kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("expected a number, identifier or '('")


def parse_ast(text: str, *, allow_diff: bool = False) -> Node:
    return _Parser(text, allow_diff).parse()


def evaluate(node: Node, variables: Sequence[str], *, diff=None):
    """Evaluate an AST over QQ(variables).

    ``diff`` maps a ``RatFunc`` to a differential form; it is only consulted
    for ``Diff`` nodes, and the arithmetic then happens on whatever objects it
    returns.
    """
    variables = tuple(variables)

    def ev(n):
        if isinstance(n, Num):
            return RatFunc.const(variables, n.value)
        if isinstance(n, Var):
            if n.name not in variables:
                raise UnknownSymbolError(n.name, n.pos)
            return RatFunc.var(variables, n.name)
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Pow):
            return ev(n.base) ** n.exp
        if isinstance(n, Diff):
            if diff is None:
                raise ValueError("d(...) is only allowed in differential forms")
            inner = ev(n.arg)
            if not isinstance(inner, RatFunc):
                raise ValueError("d(...) applied to a form")
            return diff(inner)
        left, right = ev(n.left), ev(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        if n.op == "*":
            if not isinstance(left, RatFunc) and not isinstance(right, RatFunc):
                raise ValueError("product of two differential forms")
            return left * right
        if not isinstance(right, RatFunc):
            raise ValueError("division by a differential form")
        return left / right

    return ev(node)


def parse_expr(text: str, variables: Sequence[str]) -> RatFunc:
    """Parse ``text`` into the canonical ``RatFunc`` over ``variables``.

    >>> str(parse_expr("(t^2-1)/(t-1)", ["t"]))
    't + 1'
    """
    return evaluate(parse_ast(text), variables)


# -- printing ----------------------------------------------------------------

def _format_rational(q) -> str:
    q = to_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(p: MPoly) -> str:
    names = [str(s) for s in p.ring.symbols]
    if not p:
        return "0"
    parts = []
    for monom, coeff in p.terms():
        c = to_fraction(coeff)
        factors = []
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not mono:
            body = _format_rational(c)
        elif c == 1:
            body = mono
        else:
            body = f"{_format_rational(c)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _needs_parens(p: MPoly) -> bool:
    if len(p) > 1:
        return True
    (monom, coeff), = p.terms()
    c = to_fraction(coeff)
    factors = sum(1 for e in monom if e)
    return (c.denominator != 1) or (c < 0) or (factors and c != 1) or factors > 1


def format_ratfunc(f: RatFunc) -> str:
    num, den = f.num, f.den
    if den.is_ground:
        return format_poly(num)
    n = format_poly(num)
    d = format_poly(den)
    if len(num) > 1:
        n = f"({n})"
    if _needs_parens(den):
        d = f"({d})"
    return f"{n}/{d}"
