"""Exact rationals, open rational intervals and finite rational sequences.

Rationals are :class:`fractions.Fraction`.  An endpoint of ``None`` stands for
-inf (as ``lo``) or +inf (as ``hi``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

Rational = Fraction
FiniteSeq = Tuple[Fraction, ...]
RatLike = Union[Fraction, int, str]


def Q(x: RatLike) -> Fraction:
    """Coerce ints, ``"a/b"`` strings and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use an exact rational")
    return Fraction(x)


def fmt_q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class OpenInterval:
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    empty: bool = False

    def __post_init__(self):
        if self.empty:
            object.__setattr__(self, "lo", None)
            object.__setattr__(self, "hi", None)
            return
        if self.lo is not None:
            object.__setattr__(self, "lo", Q(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", Q(self.hi))
        if self.lo is not None and self.hi is not None and self.lo >= self.hi:
            object.__setattr__(self, "lo", None)
            object.__setattr__(self, "hi", None)
            object.__setattr__(self, "empty", True)

    @classmethod
    def of(cls, lo: Optional[RatLike], hi: Optional[RatLike]) -> "OpenInterval":
        return cls(None if lo is None else Q(lo), None if hi is None else Q(hi))

    @property
    def bounded(self) -> bool:
        return not self.empty and self.lo is not None and self.hi is not None

    def __contains__(self, x: Fraction) -> bool:
        if self.empty:
            return False
        return (self.lo is None or self.lo < x) and (self.hi is None or x < self.hi)

    def contains_closure(self, x: Fraction) -> bool:
        if self.empty:
            return False
        return (self.lo is None or self.lo <= x) and (self.hi is None or x <= self.hi)

    def issubset(self, other: "OpenInterval") -> bool:
        if self.empty:
            return True
        if other.empty:
            return False
        lo_ok = other.lo is None or (self.lo is not None and self.lo >= other.lo)
        hi_ok = other.hi is None or (self.hi is not None and self.hi <= other.hi)
        return lo_ok and hi_ok

    def midpoint(self) -> Fraction:
        if not self.bounded:
            raise ValueError(f"midpoint of unbounded or empty interval {self}")
        return (self.lo + self.hi) / 2

    def dist(self, x: Fraction) -> Fraction:
        """Distance from ``x`` to the closure of the interval."""
        if self.empty:
            raise ValueError("distance to the empty interval")
        if self.lo is not None and x < self.lo:
            return self.lo - x
        if self.hi is not None and x > self.hi:
            return x - self.hi
        return Fraction(0)

    def to_json(self) -> dict:
        if self.empty:
            return {"empty": True}
        return {
            "lo": None if self.lo is None else fmt_q(self.lo),
            "hi": None if self.hi is None else fmt_q(self.hi),
            "lo_inf": self.lo is None,
            "hi_inf": self.hi is None,
        }

    @classmethod
    def from_json(cls, d: dict) -> "OpenInterval":
        if d.get("empty"):
            return EMPTY
        lo = None if d.get("lo_inf") else Q(d["lo"])
        hi = None if d.get("hi_inf") else Q(d["hi"])
        return cls(lo, hi)

    def __repr__(self) -> str:
        if self.empty:
            return "(empty)"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"({lo}, {hi})"


EMPTY = OpenInterval(empty=True)
REALS = OpenInterval()


def interval_intersect(a: OpenInterval, b: OpenInterval) -> OpenInterval:
    if a.empty or b.empty:
        return EMPTY
    if a.lo is None:
        lo = b.lo
    elif b.lo is None:
        lo = a.lo
    else:
        lo = max(a.lo, b.lo)
    if a.hi is None:
        hi = b.hi
    elif b.hi is None:
        hi = a.hi
    else:
        hi = min(a.hi, b.hi)
    return OpenInterval(lo, hi)


def interval_len(a: OpenInterval) -> Union[Fraction, float]:
    """Length ``hi - lo``; ``math.inf`` when unbounded."""
    if a.empty:
        raise ValueError("length of the empty interval")
    if a.lo is None or a.hi is None:
        return math.inf
    return a.hi - a.lo


def seq(xs: Iterable[RatLike]) -> FiniteSeq:
    return tuple(Q(x) for x in xs)


def seq_extend(p: Sequence[Fraction], xs: Iterable[RatLike]) -> FiniteSeq:
    return tuple(p) + seq(xs)


def is_prefix(p: Sequence[Fraction], q: Sequence[Fraction]) -> bool:
    return len(p) <= len(q) and tuple(q[: len(p)]) == tuple(p)


def seq_to_json(p: Sequence[Fraction]) -> list:
    return [fmt_q(x) for x in p]


def seq_from_json(xs: list) -> FiniteSeq:
    return tuple(Q(x) for x in xs)
