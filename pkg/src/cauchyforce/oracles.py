"""Strategy oracles: purported moduli and limits for the generic sequence.

An oracle is asked a :class:`Query` at a condition and returns an extension of
that condition together with the value it commits to there.  Built-in
strategies are registered by name in :data:`ORACLES`; external ones speak a
newline-delimited JSON protocol over a subprocess.
"""
from __future__ import annotations

import json
import math
import subprocess
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Optional, Tuple, Union

from .exact import OpenInterval, Q, fmt_q, interval_len
from .line import CondLine
from .product import CondProd

Cond = Union[CondLine, CondProd]


@dataclass(frozen=True)
class Query:
    kind: str  # "modulus" | "value" | "limit"
    n: int
    eps: Optional[Fraction] = None

    def to_json(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.eps is not None:
            d["eps"] = fmt_q(self.eps)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Query":
        return cls(d["kind"], int(d["n"]), None if d.get("eps") is None else Q(d["eps"]))


def cond_to_json(c: Cond) -> dict:
    return c.to_json()


def cond_from_json(d: dict) -> Cond:
    return CondProd.from_json(d) if "comps" in d else CondLine.from_json(d)


def value_to_json(v):
    return v if isinstance(v, int) else fmt_q(v)


def value_from_json(v, query: Query):
    return int(v) if query.kind == "modulus" else Q(v)


class StrategyOracle:
    name = "oracle"
    declared_support: Optional[FrozenSet[int]] = None
    serial = False  # True when answers must not be requested concurrently

    def answer(self, cond: Cond, query: Query) -> Tuple[Cond, object]:
        raise NotImplementedError

    def close(self) -> None:
        pass


def _point_in(I: OpenInterval) -> Fraction:
    if I.bounded:
        return I.midpoint()
    if I.lo is not None:
        return I.lo + 1
    if I.hi is not None:
        return I.hi - 1
    return Fraction(0)


# -- line strategies (purported moduli) ----------------------------------

class StubbornConstant(StrategyOracle):
    """Always ``f(n) = m``, committed on the queried condition itself."""

    name = "stubborn-constant"

    def __init__(self, m: int = 5):
        self.m = m

    def answer(self, cond, query):
        return cond, self.m


class LengthEcho(StrategyOracle):
    """``f(n)`` = length of the queried prefix; keeps the right half of the interval."""

    name = "length-echo"

    def answer(self, cond, query):
        I = cond.I
        return CondLine(cond.p, OpenInterval(I.midpoint(), I.hi)), len(cond.p)


class IntervalHalving(StrategyOracle):
    """Constant ``f(n) = n + 1``; halves the interval (keeping the right half)
    until it is no longer than ``eps / 2``."""

    name = "interval-halving"

    def answer(self, cond, query):
        I = cond.I
        while interval_len(I) > query.eps / 2:
            I = OpenInterval(I.midpoint(), I.hi)
        return CondLine(cond.p, I), query.n + 1


class CenterShrink(StrategyOracle):
    """Constant ``f(n) = 2n``; keeps a centred sub-interval of length ``eps / 3``."""

    name = "center-shrink"

    def answer(self, cond, query):
        I = cond.I
        w = min(interval_len(I), query.eps / 3) / 2
        c = I.midpoint()
        return CondLine(cond.p, OpenInterval(c - w, c + w)), 2 * query.n


class FlipFlop(StrategyOracle):
    """Planted inconsistency: extends the prefix by one entry and answers the
    length of the queried prefix, so it contradicts itself one step later."""

    name = "flip-flop"

    def answer(self, cond, query):
        I = cond.I
        c = I.midpoint()
        w = min(interval_len(I), query.eps / 3) / 2
        return CondLine(cond.p + (c,), OpenInterval(c - w, c + w)), len(cond.p)


# -- product strategies (purported limits) -------------------------------

def _ensure_comps(cond: CondProd, k: int) -> CondProd:
    """Extend so components ``0..k-1`` exist with non-empty prefixes."""
    comps = list(cond.comps)
    while len(comps) < k:
        comps.append(CondLine((), cond.tail))
    for j in range(k):
        if not comps[j].p:
            comps[j] = CondLine((_point_in(comps[j].I),), comps[j].I)
    return replace(cond, comps=tuple(comps))


class ConstLimit(StrategyOracle):
    """``f`` is the constant sequence ``c`` (support: empty)."""

    name = "const-limit"
    declared_support = frozenset()

    def __init__(self, c=Fraction(1, 3)):
        self.c = Q(c)

    def answer(self, cond, query):
        if query.kind == "modulus":
            return cond, 0
        return cond, self.c


class Comp0Echo(StrategyOracle):
    """``f(n) = Z_0(0)``, the first committed entry of component 0 (support {0}).
    It also commits an unused entry of component 1."""

    name = "comp0-echo"
    declared_support = frozenset({0})

    def answer(self, cond, query):
        cond = _ensure_comps(cond, 2)
        if query.kind == "modulus":
            return cond, 0
        return cond, cond.comps[0].p[0]


class SupportCheat(StrategyOracle):
    """Declares support {0} but answers ``Z_1(0)``."""

    name = "support-cheat"
    declared_support = frozenset({0})

    def answer(self, cond, query):
        cond = _ensure_comps(cond, 2)
        if query.kind == "modulus":
            return cond, 0
        return cond, cond.comps[1].p[0]


class Stonewall(StrategyOracle):
    """Answers the lower end of the queried tail and pins the tail to a sliver
    just above it, so the committed value moves whenever that end does."""

    name = "stonewall"
    declared_support = frozenset()

    def answer(self, cond, query):
        t = cond.tail
        cond = cond.with_tail(OpenInterval(t.lo, t.lo + (t.hi - t.lo) / 1000))
        if query.kind == "modulus":
            return cond, 0
        return cond, t.lo


class HalfClip(StrategyOracle):
    """Constant ``c`` that keeps only the lower half of every bounded tail."""

    name = "half-clip"
    declared_support = frozenset()

    def __init__(self, c=Fraction(1, 8)):
        self.c = Q(c)

    def answer(self, cond, query):
        t = cond.tail
        if t.bounded:
            cond = cond.with_tail(OpenInterval(t.lo, t.midpoint()))
        if query.kind == "modulus":
            return cond, 0
        return cond, self.c


class TailFlip(StrategyOracle):
    """Planted inconsistency: answers the lower tail endpoint of the query and
    keeps only the upper half of the tail."""

    name = "tail-flip"
    declared_support = frozenset()

    def answer(self, cond, query):
        t = cond.tail
        out = cond.with_tail(OpenInterval(t.midpoint(), t.hi))
        if query.kind == "modulus":
            return out, 0
        return out, t.lo


class CanonBreaker(StrategyOracle):
    """Adds components up to index 3, the last one squeezed into the bottom
    tenth of the tail, so its sup is too far from the tail's."""

    name = "canon-breaker"
    declared_support = frozenset()

    def answer(self, cond, query):
        t = cond.tail
        comps = list(cond.comps)
        while len(comps) < 3:
            comps.append(CondLine((), t))
        comps.append(CondLine((), OpenInterval(t.lo, t.lo + (t.hi - t.lo) / 10)))
        return replace(cond, comps=tuple(comps)), 0 if query.kind == "modulus" else t.lo


# -- subprocess bridge ---------------------------------------------------

class OracleSpawnError(RuntimeError):
    pass


class SubprocessOracle(StrategyOracle):
    """Newline-delimited JSON: ``{"query": {...,"cond": ...}}`` -> ``{"cond": ..., "value": ...}``."""

    serial = True

    def __init__(self, argv, declared_support: Optional[FrozenSet[int]] = None):
        self.name = "subprocess:" + " ".join(argv)
        self.declared_support = declared_support
        try:
            self.proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
            )
        except OSError as e:
            raise OracleSpawnError(str(e)) from e

    def answer(self, cond, query):
        req = {"query": dict(query.to_json(), cond=cond.to_json())}
        try:
            self.proc.stdin.write(json.dumps(req, sort_keys=True) + "\n")
            self.proc.stdin.flush()
            line = self.proc.stdout.readline()
        except (BrokenPipeError, OSError) as e:
            raise OracleSpawnError(f"oracle process died: {e}") from e
        if not line:
            raise OracleSpawnError("oracle process closed its output")
        resp = json.loads(line)
        return cond_from_json(resp["cond"]), value_from_json(resp["value"], query)

    def close(self):
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)


LINE_ORACLES: Dict[str, Callable[[], StrategyOracle]] = {
    "stubborn-constant": StubbornConstant,
    "length-echo": LengthEcho,
    "naive-length": LengthEcho,
    "interval-halving": IntervalHalving,
    "center-shrink": CenterShrink,
    "flip-flop": FlipFlop,
}

PRODUCT_ORACLES: Dict[str, Callable[[], StrategyOracle]] = {
    "const-limit": ConstLimit,
    "comp0-echo": Comp0Echo,
    "support-cheat": SupportCheat,
    "stonewall": Stonewall,
    "half-clip": HalfClip,
    "tail-flip": TailFlip,
    "canon-breaker": CanonBreaker,
}

ORACLES = {**LINE_ORACLES, **PRODUCT_ORACLES}


def make_oracle(name: str) -> StrategyOracle:
    try:
        return ORACLES[name]()
    except KeyError:
        raise KeyError(f"unknown oracle {name!r}; known: {', '.join(sorted(ORACLES))}") from None
