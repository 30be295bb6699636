"""Recursive-descent parser for the formula DSL.

Grammar (loosest to tightest binding):

    formula := or_expr (U interval? formula)?          -- right-associative
    or_expr := and_expr ('|' and_expr)*
    and_expr := unary ('&' unary)*
    unary   := '!' unary | 'G' interval? unary | 'F' interval? unary | primary
    primary := 'true' | 'false' | '(' formula ')'
             | name '(' args ')' (cmp number)?
    interval := '[' number ',' (number | 'inf') ']'
    cmp     := '>' | '>=' | '<' | '<='

A comparison like ``v(SV) > 5`` is sugar for the margin atom ``v_gt(SV,5)``;
it is accepted for the five state channels s, v, a, d, theta.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from ..errors import FormulaSyntaxError, MalformedInterval
from ..trace import CHANNELS
from .ast import (Atom, Const, Eventually, Formula, Globally, Interval, Not,
                  Until)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+(\.\d*)?([eE][+-]?\d+)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<cmp>>=|<=|>|<)
  | (?P<sym>[()\[\],&|!-])
""", re.VERBOSE)

_CMP_SUFFIX = {">": "gt", ">=": "ge", "<": "lt", "<=": "le"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append(_Tok(kind, m.group(), m.start()))
    out.append(_Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {tok.text or 'end'!r}", tok.pos)
        return tok

    def fail(self, msg: str):
        raise FormulaSyntaxError(msg, self.peek().pos)

    # formula := or_expr (U interval? formula)?
    def formula(self) -> Formula:
        left = self.or_expr()
        if self.peek().text == "U":
            self.next()
            ivl = self.interval_opt()
            right = self.formula()
            return Until(ivl, left, right)
        return left

    def or_expr(self) -> Formula:
        node = self.and_expr()
        while self.peek().text == "|":
            self.next()
            node = node | self.and_expr()
        return node

    def and_expr(self) -> Formula:
        node = self.unary()
        while self.peek().text == "&":
            self.next()
            node = node & self.unary()
        return node

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return Not(self.unary())
        if tok.text == "G":
            self.next()
            return Globally(self.interval_opt(), self.unary())
        if tok.text == "F":
            self.next()
            return Eventually(self.interval_opt(), self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.next()
        if tok.text == "(":
            node = self.formula()
            self.expect(")")
            return node
        if tok.text == "true":
            return Const(True)
        if tok.text == "false":
            return Const(False)
        if tok.kind == "ident":
            self.expect("(")
            args = self.args()
            self.expect(")")
            if self.peek().kind == "cmp":
                op = self.next()
                value = self.number()
                if tok.text not in CHANNELS:
                    raise FormulaSyntaxError(
                        f"comparison only supported over channels {CHANNELS}", tok.pos)
                return Atom(f"{tok.text}_{_CMP_SUFFIX[op.text]}", args + (value,))
            return Atom(tok.text, args)
        raise FormulaSyntaxError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def args(self) -> tuple:
        if self.peek().text == ")":
            return ()
        out = [self.arg()]
        while self.peek().text == ",":
            self.next()
            out.append(self.arg())
        return tuple(out)

    def arg(self):
        tok = self.peek()
        if tok.kind == "ident":
            return self.next().text
        return self.number()

    def number(self) -> float:
        sign = 1.0
        if self.peek().text == "-":
            self.next()
            sign = -1.0
        tok = self.next()
        if tok.text == "inf":
            return sign * math.inf
        if tok.kind != "number":
            raise FormulaSyntaxError(f"expected a number, found {tok.text!r}", tok.pos)
        return sign * float(tok.text)

    def interval_opt(self) -> Interval:
        if self.peek().text != "[":
            return Interval()
        open_tok = self.next()
        lo = self.number()
        self.expect(",")
        hi = self.number()
        self.expect("]")
        if lo < 0 or lo > hi:
            raise MalformedInterval(f"bad interval [{lo}, {hi}]", open_tok.pos)
        return Interval(lo, hi)


def parse(text: str) -> Formula:
    """Parse formula text; raises FormulaSyntaxError with a position."""
    p = _Parser(text)
    node = p.formula()
    tok = p.peek()
    if tok.kind != "eof":
        raise FormulaSyntaxError(f"trailing input {tok.text!r}", tok.pos)
    return node
