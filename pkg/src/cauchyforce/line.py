"""Conditions ``(p, I)`` on the space of rational Cauchy sequences.

``p`` is a committed finite prefix and ``I`` an open interval that every later
entry, and the limit, must lie in.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .exact import (
    EMPTY,
    REALS,
    FiniteSeq,
    OpenInterval,
    interval_intersect,
    is_prefix,
    seq,
    seq_from_json,
    seq_to_json,
)
from .sequences import CauchySeq, constant


@dataclass(frozen=True)
class CondLine:
    p: FiniteSeq
    I: OpenInterval

    def __post_init__(self):
        object.__setattr__(self, "p", seq(self.p))
        if self.I.empty:
            object.__setattr__(self, "p", ())

    @classmethod
    def make(cls, p: Iterable = (), I: OpenInterval = REALS) -> "CondLine":
        return cls(seq(p), I)

    @property
    def is_empty(self) -> bool:
        return self.I.empty

    def to_json(self) -> dict:
        return {"p": seq_to_json(self.p), "I": self.I.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "CondLine":
        return cls(seq_from_json(d["p"]), OpenInterval.from_json(d["I"]))


EMPTY_LINE = CondLine((), EMPTY)
TOP_LINE = CondLine((), REALS)


def overhang_inside(longer: Sequence[Fraction], shorter: Sequence[Fraction], I: OpenInterval) -> bool:
    return all(x in I for x in longer[len(shorter):])


def cond_extends(q: CondLine, p: CondLine) -> bool:
    """``q <= p``: q's prefix extends p's, ``J ⊆ I`` and the new entries lie in ``I``."""
    if q.is_empty:
        return True
    if p.is_empty:
        return False
    return is_prefix(p.p, q.p) and q.I.issubset(p.I) and overhang_inside(q.p, p.p, p.I)


def cond_compat_seq(c: CondLine, r: CauchySeq, probe: int) -> bool:
    """Prefix, entries ``len(p)..probe`` in ``I``, and the fixture's limit in ``I``."""
    if r.known_limit is None:
        raise ValueError("compatibility needs a fixture with a known limit")
    if c.is_empty:
        return False
    if r.prefix(len(c.p)) != c.p:
        return False
    if not all(r(n) in c.I for n in range(len(c.p), max(probe, len(c.p)) + 1)):
        return False
    return r.known_limit in c.I


def cond_compat(a: CondLine, b: CondLine) -> bool:
    if a.is_empty or b.is_empty:
        return False
    short, long_ = (a, b) if len(a.p) <= len(b.p) else (b, a)
    if not is_prefix(short.p, long_.p):
        return False
    if not overhang_inside(long_.p, short.p, short.I):
        return False
    return not interval_intersect(a.I, b.I).empty


def cond_glb(a: CondLine, b: CondLine) -> CondLine:
    if not cond_compat(a, b):
        raise ValueError(f"incompatible conditions {a} and {b}")
    longer = a.p if len(a.p) >= len(b.p) else b.p
    return CondLine(longer, interval_intersect(a.I, b.I))


@dataclass(frozen=True)
class CoverLine:
    base: CondLine
    members: Tuple[CondLine, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        bad = [m for m in self.members if not cond_extends(m, self.base)]
        if bad:
            raise ValueError(f"cover members do not extend the base: {bad}")

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "members": [m.to_json() for m in self.members]}


def cover_meet(C: CoverLine, q: CondLine) -> CoverLine:
    if not cond_extends(q, C.base):
        raise ValueError("q must extend the cover's base")
    out = [cond_glb(m, q) for m in C.members if cond_compat(m, q)]
    return CoverLine(q, tuple(m for m in out if not m.is_empty))


def cover_flatten(C: CoverLine, subcovers: Sequence[CoverLine]) -> CoverLine:
    """Union of covers of the members of ``C``; ``subcovers[i]`` covers ``C.members[i]``."""
    if len(subcovers) != len(C.members):
        raise ValueError("one subcover per member")
    for m, sub in zip(C.members, subcovers):
        if sub.base != m:
            raise ValueError("subcover base mismatch")
    return CoverLine(C.base, tuple(x for sub in subcovers for x in sub.members))


def grid_sequences(c: CondLine, k: int = 4) -> List[CauchySeq]:
    """Sequences ``p`` followed by a constant at interior grid points of ``I``
    (endpoints and midpoints of a k-fold subdivision, nudged inside)."""
    if not c.I.bounded:
        raise ValueError("grid needs a bounded interval")
    lo, hi = c.I.lo, c.I.hi
    pts = []
    for i in range(2 * k + 1):
        x = lo + (hi - lo) * Fraction(i, 2 * k)
        x = min(max(x, lo + (hi - lo) / (8 * k)), hi - (hi - lo) / (8 * k))
        pts.append(x)
    out = []
    for x in pts:
        pre = c.p
        out.append(prefixed_constant(pre, x))
    return out


def prefixed_constant(pre: Sequence[Fraction], x: Fraction) -> CauchySeq:
    """The sequence ``pre`` followed by the constant ``x``."""
    pre = tuple(pre)

    def env(n: int) -> Fraction:
        return max([abs(v - x) for v in pre[n:]], default=Fraction(0))

    return CauchySeq(lambda n: pre[n] if n < len(pre) else x, x, env, f"{list(map(str, pre))}+const({x})")


def coverage_failures(C: CoverLine, seqs: Iterable[CauchySeq], probe: int) -> List[CauchySeq]:
    """Sampled sequences compatible with the base but with no member."""
    bad = []
    for r in seqs:
        if cond_compat_seq(C.base, r, probe) and not any(
            cond_compat_seq(m, r, probe) for m in C.members
        ):
            bad.append(r)
    return bad
