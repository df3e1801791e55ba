"""Parser for the expression grammar used on the command line and in fixtures.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*``/``/``, then ``+``/``-``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

``p/q`` literals are ordinary integer division.  Positions are 0-based
character offsets into the source.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .algebra import RationalFunction, VariableTable

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ExpressionError(ValueError):
    def __init__(self, code: str, position: int, detail: str = ""):
        msg = f"{code}({position})" + (f": {detail}" if detail else "")
        super().__init__(msg)
        self.code = code
        self.position = position
        self.detail = detail


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, END
    text: str
    pos: int


def tokenize(src: str) -> List[Token]:
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(Token("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(Token("NAME", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionError("SYNTAX_ERROR", m.start(3), f"unexpected character {ch!r}")
            out.append(Token("OP", ch, m.start(3)))
        pos = m.end()
    out.append(Token("END", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, table: VariableTable):
        self.tokens = tokenize(src)
        self.i = 0
        self.table = table

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, op: str) -> Optional[Token]:
        t = self.peek()
        if t.kind == "OP" and t.text == op:
            self.i += 1
            return t
        return None

    def fail(self, what: str):
        t = self.peek()
        found = "end of input" if t.kind == "END" else repr(t.text)
        raise ExpressionError("SYNTAX_ERROR", t.pos, f"expected {what}, found {found}")

    def parse(self) -> RationalFunction:
        val = self.expr()
        if self.peek().kind != "END":
            self.fail("operator or end of input")
        return val

    def expr(self) -> RationalFunction:
        val = self.term()
        while True:
            if self.accept("+"):
                val = val + self.term()
            elif self.accept("-"):
                val = val - self.term()
            else:
                return val

    def term(self) -> RationalFunction:
        val = self.unary()
        while True:
            if self.accept("*"):
                val = val * self.unary()
            elif self.peek().kind == "OP" and self.peek().text == "/":
                t = self.take()
                rhs = self.unary()
                if rhs.is_zero():
                    raise ExpressionError("SYNTAX_ERROR", t.pos, "division by zero")
                val = val / rhs
            else:
                return val

    def unary(self) -> RationalFunction:
        if self.accept("-"):
            return -self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        if self.accept("^"):
            neg = bool(self.accept("-"))
            t = self.peek()
            if t.kind != "INT":
                self.fail("integer exponent")
            self.take()
            k = -int(t.text) if neg else int(t.text)
            if k < 0 and base.is_zero():
                raise ExpressionError("SYNTAX_ERROR", t.pos, "zero to a negative power")
            base = base ** k
        return base

    def atom(self) -> RationalFunction:
        t = self.peek()
        if t.kind == "INT":
            self.take()
            return RationalFunction.constant(self.table, int(t.text))
        if t.kind == "NAME":
            self.take()
            if t.text not in self.table:
                raise ExpressionError("UNKNOWN_VARIABLE", t.pos, t.text)
            return RationalFunction.var(self.table, t.text)
        if self.accept("("):
            val = self.expr()
            if not self.accept(")"):
                self.fail("')'")
            return val
        self.fail("number, variable or '('")


def parse_expression(src: str, table: VariableTable) -> RationalFunction:
    """Parse ``src`` exactly into a rational function over ``table``."""
    return _Parser(src, table).parse()
