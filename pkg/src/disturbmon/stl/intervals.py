"""Finite unions of intervals over a bounded time domain.

The dense-time monitor represents where a formula holds as a normalized
interval set: sorted, pairwise disjoint, non-touching maximal intervals
with explicit endpoint closedness. All set operations are exact.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True)
class Ival:
    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"reversed interval [{self.lo}, {self.hi}]")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be a closed point")

    def contains(self, t: float) -> bool:
        if t < self.lo or t > self.hi:
            return False
        if t == self.lo and not self.lo_closed:
            return False
        if t == self.hi and not self.hi_closed:
            return False
        return True

    def __str__(self):
        l = "[" if self.lo_closed else "("
        r = "]" if self.hi_closed else ")"
        return f"{l}{self.lo}, {self.hi}{r}"


def _connected(a: Ival, b: Ival) -> bool:
    """True when a ∪ b is one interval (a.lo <= b.lo assumed)."""
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return False


class IntervalSet:
    """Normalized union of intervals; immutable."""

    __slots__ = ("ivals", "_los")

    def __init__(self, ivals=()):
        merged: list[Ival] = []
        for iv in sorted(ivals, key=lambda i: (i.lo, not i.lo_closed)):
            if merged and _connected(merged[-1], iv):
                last = merged[-1]
                if iv.hi > last.hi:
                    hi, hic = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, hic = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, hic = last.hi, last.hi_closed
                merged[-1] = Ival(last.lo, hi, last.lo_closed, hic)
            else:
                merged.append(iv)
        self.ivals = tuple(merged)
        self._los = [iv.lo for iv in self.ivals]

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def point(cls, t: float) -> "IntervalSet":
        return cls((Ival(t, t, True, True),))

    @classmethod
    def closed(cls, lo: float, hi: float) -> "IntervalSet":
        return cls((Ival(lo, hi, True, True),))

    def is_empty(self) -> bool:
        return not self.ivals

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.ivals == other.ivals

    def __hash__(self):
        return hash(self.ivals)

    def __str__(self):
        return " ∪ ".join(map(str, self.ivals)) if self.ivals else "∅"

    def _at(self, t: float) -> Ival | None:
        """The (unique) interval with lo <= t that could contain t."""
        i = bisect_right(self._los, t) - 1
        return self.ivals[i] if i >= 0 else None

    def contains(self, t: float) -> bool:
        iv = self._at(t)
        return iv is not None and iv.contains(t)

    def covers_closed(self, lo: float, hi: float) -> bool:
        """Is [lo, hi] a subset of this set? Requires lo <= hi."""
        iv = self._at(lo)
        if iv is None or not iv.contains(lo):
            return False
        return hi < iv.hi or (hi == iv.hi and iv.hi_closed)

    def covers_clopen(self, lo: float, hi: float) -> bool:
        """Is [lo, hi) a subset of this set? Vacuously true when lo >= hi."""
        if lo >= hi:
            return True
        iv = self._at(lo)
        if iv is None or not iv.contains(lo):
            return False
        return hi <= iv.hi

    def intersects_closed(self, lo: float, hi: float) -> bool:
        """Does this set contain any point of [lo, hi]?"""
        return self.first_in_closed(lo, hi) is not None

    def first_in_closed(self, lo: float, hi: float):
        """Infimum of the set restricted to [lo, hi].

        Returns (value, attained) or None when the restriction is empty.
        """
        start = max(0, bisect_right(self._los, lo) - 1)
        for iv in self.ivals[start:]:
            if iv.lo > hi:
                return None
            lo_eff = max(iv.lo, lo)
            hi_eff = min(iv.hi, hi)
            if lo_eff > hi_eff:
                continue
            if lo_eff == hi_eff:
                if iv.contains(lo_eff):
                    return lo_eff, True
                continue
            return lo_eff, iv.contains(lo_eff)
        return None

    def endpoints(self) -> list[float]:
        out = []
        for iv in self.ivals:
            out.append(iv.lo)
            out.append(iv.hi)
        return out

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.ivals + other.ivals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a in self.ivals:
            for b in other.ivals:
                if b.lo > a.hi:
                    break
                lo = max(a.lo, b.lo)
                hi = min(a.hi, b.hi)
                if lo > hi:
                    continue
                lo_closed = a.contains(lo) and b.contains(lo)
                hi_closed = a.contains(hi) and b.contains(hi)
                if lo == hi:
                    if lo_closed and hi_closed:
                        out.append(Ival(lo, hi, True, True))
                else:
                    out.append(Ival(lo, hi, lo_closed, hi_closed))
        return IntervalSet(out)

    def complement(self, lo: float, hi: float) -> "IntervalSet":
        """Complement within the closed domain [lo, hi]."""
        clipped = self.intersect(IntervalSet.closed(lo, hi)).ivals
        out = []
        cur, cur_closed = lo, True
        for iv in clipped:
            if cur < iv.lo:
                out.append(Ival(cur, iv.lo, cur_closed, not iv.lo_closed))
            elif cur == iv.lo and cur_closed and not iv.lo_closed:
                out.append(Ival(cur, cur, True, True))
            cur, cur_closed = iv.hi, not iv.hi_closed
        if cur < hi or (cur == hi and cur_closed):
            out.append(Ival(cur, hi, cur_closed, True))
        return IntervalSet(out)
