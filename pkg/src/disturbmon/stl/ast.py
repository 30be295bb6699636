"""Formula abstract syntax and the canonical printer.

Operator precedence, loosest to tightest: U, |, &, temporal prefix (G/F),
!. Omitted intervals mean [0, inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import MalformedInterval

INF = math.inf


@dataclass(frozen=True)
class Interval:
    lo: float = 0.0
    hi: float = INF

    def __post_init__(self):
        if self.lo < 0 or self.lo > self.hi or math.isnan(self.lo) or math.isnan(self.hi):
            raise MalformedInterval(f"bad interval [{self.lo}, {self.hi}]", 0)

    @property
    def untimed(self) -> bool:
        return self.lo == 0.0 and self.hi == INF

    def render(self) -> str:
        if self.untimed:
            return ""
        return f"[{_num(self.lo)},{_num(self.hi)}]"


UNTIMED = Interval()


def _num(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        if x == int(x) and abs(x) < 1e15:
            return str(int(x))
        return repr(x)
    return str(x)


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str
    args: tuple = ()


@dataclass(frozen=True, eq=True)
class Not(Formula):
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Globally(Formula):
    interval: Interval
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=True)
class Eventually(Formula):
    interval: Interval
    child: Formula

    def children(self):
        return (self.child,)


@dataclass(frozen=True, eq=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


TRUE = Const(True)
FALSE = Const(False)


def G(child: Formula, lo: float = 0.0, hi: float = INF) -> Globally:
    return Globally(Interval(lo, hi), child)


def F(child: Formula, lo: float = 0.0, hi: float = INF) -> Eventually:
    return Eventually(Interval(lo, hi), child)


def U(left: Formula, right: Formula, lo: float = 0.0, hi: float = INF) -> Until:
    return Until(Interval(lo, hi), left, right)


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# Binding strength; higher binds tighter.
_PREC_UNTIL = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_PREFIX = 4
_PREC_ATOM = 5


def _prec(f: Formula) -> int:
    if isinstance(f, Until):
        return _PREC_UNTIL
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, (Not, Globally, Eventually)):
        return _PREC_PREFIX
    return _PREC_ATOM


def pretty(f: Formula) -> str:
    """Render in the concrete grammar; parse(pretty(f)) reproduces f."""

    def wrap(child: Formula, minimum: int) -> str:
        text = pretty(child)
        return f"({text})" if _prec(child) < minimum else text

    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.name}({','.join(_num(a) for a in f.args)})" if f.args else f"{f.name}()"
    if isinstance(f, Not):
        return f"!{wrap(f.child, _PREC_PREFIX)}"
    if isinstance(f, Globally):
        return f"G{f.interval.render()} {wrap(f.child, _PREC_PREFIX)}"
    if isinstance(f, Eventually):
        return f"F{f.interval.render()} {wrap(f.child, _PREC_PREFIX)}"
    if isinstance(f, And):
        # Parsing is left-associative; a same-level right child needs parens.
        return f"{wrap(f.left, _PREC_AND)} & {wrap(f.right, _PREC_AND + 1)}"
    if isinstance(f, Or):
        return f"{wrap(f.left, _PREC_OR)} | {wrap(f.right, _PREC_OR + 1)}"
    if isinstance(f, Until):
        # Right-associative: the left operand needs parens even at equal level.
        left = pretty(f.left)
        if _prec(f.left) <= _PREC_UNTIL:
            left = f"({left})"
        return f"{left} U{f.interval.render()} {wrap(f.right, _PREC_UNTIL)}"
    raise TypeError(f"not a formula: {f!r}")


def preorder(f: Formula) -> list[tuple[int, Formula]]:
    """Stable (id, node) pairs; ids index the pre-order traversal."""
    out = []

    def walk(node: Formula):
        out.append((len(out), node))
        for c in node.children():
            walk(c)

    walk(f)
    return out


def node_label(f: Formula) -> str:
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!"
    if isinstance(f, And):
        return "&"
    if isinstance(f, Or):
        return "|"
    if isinstance(f, Globally):
        return f"G{f.interval.render()}"
    if isinstance(f, Eventually):
        return f"F{f.interval.render()}"
    if isinstance(f, Until):
        return f"U{f.interval.render()}"
    raise TypeError(f"not a formula: {f!r}")
