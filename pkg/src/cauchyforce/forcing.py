"""Decidable forcing of atomic facts about the generic sequence Z.

Verdicts are three-valued.  ``"undecided"`` is always a sound answer; the rules
below only say ``"forced"`` or ``"refuted"`` when every compatible point agrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

from .exact import OpenInterval, Q, fmt_q, interval_len
from .line import CondLine
from .product import CondProd
from .sequences import CauchySeq

FORCED, REFUTED, UNDECIDED = "forced", "refuted", "undecided"


@dataclass(frozen=True)
class AtomicFact:
    kind: str  # "Z_value" | "Z_gap_bound" | "Zj_value" | "and"
    args: Tuple = ()

    @classmethod
    def z_value(cls, n: int, q) -> "AtomicFact":
        return cls("Z_value", (n, Q(q)))

    @classmethod
    def gap(cls, M: int, N: int) -> "AtomicFact":
        if N <= 0:
            raise ValueError("N must be positive")
        return cls("Z_gap_bound", (M, N))

    @classmethod
    def zj_value(cls, j: int, n: int, q) -> "AtomicFact":
        return cls("Zj_value", (j, n, Q(q)))

    @classmethod
    def conj(cls, facts: Iterable["AtomicFact"]) -> "AtomicFact":
        return cls("and", tuple(facts))

    def to_json(self) -> dict:
        if self.kind == "and":
            return {"kind": "and", "facts": [f.to_json() for f in self.args]}
        return {"kind": self.kind, "args": [fmt_q(a) if isinstance(a, Fraction) else a for a in self.args]}

    @classmethod
    def from_json(cls, d: dict) -> "AtomicFact":
        if d["kind"] == "and":
            return cls.conj(cls.from_json(f) for f in d["facts"])
        if d["kind"] == "Z_value":
            return cls.z_value(int(d["args"][0]), d["args"][1])
        if d["kind"] == "Z_gap_bound":
            return cls.gap(int(d["args"][0]), int(d["args"][1]))
        if d["kind"] == "Zj_value":
            return cls.zj_value(int(d["args"][0]), int(d["args"][1]), d["args"][2])
        raise ValueError(f"unknown fact kind {d['kind']!r}")


def _value_verdict(p, I: OpenInterval, n: int, q: Fraction) -> str:
    if n < len(p):
        return FORCED if p[n] == q else REFUTED
    return UNDECIDED if q in I else REFUTED


def _gap_verdict(c: CondLine, M: int, N: int) -> str:
    tol = Fraction(1, N)
    fixed = c.p[M + 1:]
    if fixed and max(fixed) - min(fixed) > tol:
        return REFUTED
    # a fixed entry farther than 1/N from every admissible free entry
    if any(c.I.dist(x) > tol for x in fixed):
        return REFUTED
    if interval_len(c.I) > tol:
        return UNDECIDED
    if any(max(x - c.I.lo, c.I.hi - x) > tol for x in fixed):
        return UNDECIDED
    return FORCED


def forces_atomic(c: Union[CondLine, CondProd], a: AtomicFact) -> str:
    if a.kind == "and":
        return forces_conj(c, a.args)
    if isinstance(c, CondLine):
        if c.is_empty:
            return FORCED  # the empty condition forces everything
        if a.kind == "Z_value":
            return _value_verdict(c.p, c.I, *a.args)
        if a.kind == "Z_gap_bound":
            return _gap_verdict(c, *a.args)
        raise ValueError(f"{a.kind} is not a fact about a line condition")
    if a.kind != "Zj_value":
        raise ValueError(f"{a.kind} is not a fact about a product condition")
    j, n, q = a.args
    if j >= c.n:
        return UNDECIDED
    return _value_verdict(c.comps[j].p, c.comps[j].I, n, q)


def forces_conj(c, facts: Iterable[AtomicFact]) -> str:
    vs = [forces_atomic(c, f) for f in facts]
    if any(v == REFUTED for v in vs):
        return REFUTED
    if all(v == FORCED for v in vs):
        return FORCED
    return UNDECIDED


def holds_on(a: AtomicFact, r: CauchySeq, probe: int) -> bool:
    """Windowed truth of a line fact for a concrete sequence."""
    if a.kind == "and":
        return all(holds_on(f, r, probe) for f in a.args)
    if a.kind == "Z_value":
        n, q = a.args
        return r(n) == q
    if a.kind == "Z_gap_bound":
        M, N = a.args
        vals = [r(i) for i in range(M + 1, max(probe, M + 2) + 1)]
        if r.known_limit is not None:
            vals.append(r.known_limit)
        return max(vals) - min(vals) <= Fraction(1, N)
    raise ValueError(a.kind)


def cauchy_witness(X: CauchySeq, N: int) -> Tuple[CondLine, int]:
    """A condition containing fixture ``X`` that forces ``Z_gap_bound(M, N)``."""
    if X.known_limit is None or X.envelope is None:
        raise ValueError("cauchy_witness needs a fixture with limit and envelope")
    if N <= 0:
        raise ValueError("N must be positive")
    M = X.settle_index(Fraction(1, 4 * N))
    w = Fraction(3, 8 * N)
    L = X.known_limit
    return CondLine(X.prefix(M), OpenInterval(L - w, L + w)), M
