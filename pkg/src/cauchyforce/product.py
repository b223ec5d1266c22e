"""Conditions on spaces of Cauchy sequences of Cauchy sequences.

A condition lists component conditions ``(p_j, I_j)`` for ``j < n`` plus a tail
interval constraining ``lim X_j`` for ``j >= n`` and ``lim X``.  With
``conv2n`` set the ambient points obey the convergence function ``2^-n``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .exact import (
    REALS,
    OpenInterval,
    interval_intersect,
    is_prefix,
    seq,
    seq_from_json,
    seq_to_json,
)
from .line import CondLine, cond_compat, cond_compat_seq, cond_extends, cond_glb, overhang_inside
from .sequences import CauchySeq, dyadic, geometric, table


class AmbiguousOverlap(ValueError):
    pass


@dataclass(frozen=True)
class CondProd:
    comps: Tuple[CondLine, ...] = ()
    tail: OpenInterval = REALS
    conv2n: bool = False

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(self.comps))

    @classmethod
    def make(cls, comps: Iterable = (), tail: OpenInterval = REALS, conv2n: bool = False) -> "CondProd":
        cs = tuple(c if isinstance(c, CondLine) else CondLine(seq(c[0]), c[1]) for c in comps)
        return cls(cs, tail, conv2n)

    @property
    def n(self) -> int:
        return len(self.comps)

    @property
    def is_empty(self) -> bool:
        return self.tail.empty or any(c.is_empty for c in self.comps)

    def with_tail(self, tail: OpenInterval) -> "CondProd":
        return replace(self, tail=tail)

    def with_comp(self, j: int, comp: CondLine) -> "CondProd":
        cs = list(self.comps)
        cs[j] = comp
        return replace(self, comps=tuple(cs))

    def to_json(self) -> dict:
        return {
            "comps": [[seq_to_json(c.p), c.I.to_json()] for c in self.comps],
            "tail": self.tail.to_json(),
            "conv2n": self.conv2n,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CondProd":
        comps = tuple(CondLine(seq_from_json(s), OpenInterval.from_json(i)) for s, i in d["comps"])
        return cls(comps, OpenInterval.from_json(d["tail"]), bool(d.get("conv2n", False)))


def _comp_clauses(q: CondProd, p: CondProd, skip_comp: Optional[int] = None) -> bool:
    if q.n < p.n:
        return False
    for j in range(p.n):
        if j == skip_comp:
            # prefix still has to extend p_j through I_j; the interval is free
            if not (is_prefix(p.comps[j].p, q.comps[j].p) and overhang_inside(q.comps[j].p, p.comps[j].p, p.comps[j].I)):
                return False
        elif not cond_extends(q.comps[j], p.comps[j]):
            return False
    return all(q.comps[j].I.issubset(p.tail) for j in range(p.n, q.n))


def prod_extends(q: CondProd, p: CondProd) -> bool:
    return _comp_clauses(q, p) and q.tail.issubset(p.tail)


def j_extend(q: CondProd, p: CondProd, j: int) -> bool:
    """``q <=_j p``: like extension but component j's interval may leave ``I_j``."""
    if not 0 <= j < p.n:
        raise ValueError(f"component {j} out of range for n_p={p.n}")
    return _comp_clauses(q, p, skip_comp=j) and q.tail.issubset(p.tail)


def infty_extend(q: CondProd, p: CondProd) -> bool:
    """``q <=_inf p``: like extension but the tail need not shrink."""
    return _comp_clauses(q, p)


def step_ok(tag, new: CondProd, old: CondProd) -> bool:
    if tag == "ext":
        return prod_extends(new, old)
    if tag == "inf":
        return infty_extend(new, old)
    if isinstance(tag, (tuple, list)) and tag[0] == "j":
        return j_extend(new, old, int(tag[1]))
    raise ValueError(f"unknown step tag {tag!r}")


def validate_chain(start: CondProd, steps: Sequence[Tuple[object, CondProd]]) -> Optional[int]:
    """Index of the first invalid step, or None."""
    prev = start
    for i, (tag, cond) in enumerate(steps):
        if not step_ok(tag, cond, prev):
            return i
        prev = cond
    return None


def prod_compat(p: CondProd, q: CondProd) -> bool:
    if p.is_empty or q.is_empty:
        return False
    if p.n > q.n:
        p, q = q, p
    for j in range(p.n):
        if not cond_compat(p.comps[j], q.comps[j]):
            return False
    for j in range(p.n, q.n):
        if interval_intersect(q.comps[j].I, p.tail).empty:
            return False
    return not interval_intersect(p.tail, q.tail).empty


def prod_meet(p: CondProd, q: CondProd) -> CondProd:
    """One common extension of compatible ``p`` and ``q`` (middle components keep
    their prefixes and clip their intervals)."""
    if not prod_compat(p, q):
        raise ValueError("incompatible product conditions")
    if p.n > q.n:
        p, q = q, p
    comps = [cond_glb(p.comps[j], q.comps[j]) for j in range(p.n)]
    comps += [CondLine(q.comps[j].p, interval_intersect(q.comps[j].I, p.tail)) for j in range(p.n, q.n)]
    return CondProd(tuple(comps), interval_intersect(p.tail, q.tail), p.conv2n or q.conv2n)


def _grid(I: OpenInterval, grid: int) -> List[Fraction]:
    return [I.lo + (I.hi - I.lo) * Fraction(i, grid + 1) for i in range(1, grid + 1)]


def prod_meet_cover(p: CondProd, q: CondProd, grid: int = 3) -> List[CondProd]:
    """Finite family of common extensions; each middle component whose interval
    escapes the shorter condition's tail gets either no stub or one grid stub."""
    if not prod_compat(p, q):
        raise ValueError("incompatible product conditions")
    if prod_extends(q, p):
        return [q]
    if prod_extends(p, q):
        return [p]
    if p.n > q.n:
        p, q = q, p
    base = prod_meet(p, q)
    choices = []
    for j in range(p.n, q.n):
        K = q.comps[j].I
        if K.issubset(p.tail) or not K.bounded:
            choices.append([()])
        else:
            choices.append([()] + [(g,) for g in _grid(K, grid)])
    out = []
    for pick in itertools.product(*choices):
        comps = list(base.comps)
        for off, stub in enumerate(pick):
            j = p.n + off
            comps[j] = CondLine(q.comps[j].p + stub, comps[j].I)
        out.append(replace(base, comps=tuple(comps)))
    return out


def is_canonical(p: CondProd) -> bool:
    if not p.conv2n:
        raise ValueError("canonical form is defined only for conv2n spaces")
    sups = [c.I.hi for c in p.comps]
    if any(s is None for s in sups) or p.tail.hi is None:
        raise ValueError("canonical form needs finite sups")
    for j in range(p.n):
        if abs(sups[j] - p.tail.hi) > dyadic(j):
            return False
        for k in range(j + 1, p.n):
            if abs(sups[j] - sups[k]) > dyadic(j):
                return False
    return True


# -- points --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProductPoint:
    """A fixture point: component sequences with known limits, and the outer limit.

    ``|lim X_j - limit| <= 2^-j`` is assumed for every j (convergence function
    ``2^-n`` on limits)."""

    comp: Callable[[int], CauchySeq]
    limit: Fraction


def product_point(limit, offsets: Callable[[int], Fraction], scale=Fraction(1, 8),
                  ratio=Fraction(1, 2), prefixes: Optional[dict] = None) -> ProductPoint:
    """``lim X_k = limit + offsets(k) * 2^-(k+1)`` with ``|offsets(k)| <= 1``."""
    L = Fraction(limit)
    prefixes = prefixes or {}

    def comp(k: int) -> CauchySeq:
        base = geometric(L + Fraction(offsets(k)) * dyadic(k + 1), scale, ratio)
        pre = prefixes.get(k)
        return table(dict(enumerate(pre)), base) if pre else base

    return ProductPoint(comp, L)


def point_in(X: ProductPoint, p: CondProd, probe: int = 32, extra: int = 64) -> bool:
    for j in range(p.n):
        if not cond_compat_seq(p.comps[j], X.comp(j), probe):
            return False
    for j in range(p.n, p.n + extra):
        if X.comp(j).known_limit not in p.tail:
            return False
    r = dyadic(p.n + extra)
    return (X.limit - r) in p.tail and (X.limit + r) in p.tail and X.limit in p.tail


def _log2_ceil_inv(x: Fraction) -> int:
    """Least k >= 0 with 2^-k <= x."""
    k = 0
    while dyadic(k) > x:
        k += 1
    return k


def canonicalize_at(X: ProductPoint, p: CondProd) -> CondProd:
    if not point_in(X, p):
        raise ValueError("point is not in the condition")
    L = X.limit
    gaps = [d for d in (None if p.tail.lo is None else L - p.tail.lo,
                        None if p.tail.hi is None else p.tail.hi - L) if d is not None]
    delta = (min(gaps) if gaps else Fraction(2)) / 2
    N = max(p.n, _log2_ceil_inv(delta))
    slack = [delta]
    for k in range(N):
        I = p.comps[k].I if k < p.n else p.tail
        lk = X.comp(k).known_limit
        slack += [d for d in (None if I.lo is None else lk - I.lo, None if I.hi is None else I.hi - lk) if d is not None]
    r = min(slack) / 2
    n_q = max(N, _log2_ceil_inv(r) + 1)
    comps = []
    for k in range(n_q):
        xs = X.comp(k)
        lk = xs.known_limit
        J = OpenInterval(lk - r, lk + r)
        M = xs.settle_index(r / 2)
        if k < p.n:
            M = max(M, len(p.comps[k].p))
        comps.append(CondLine(xs.prefix(M), J))
    return CondProd(tuple(comps), OpenInterval(L - r, L + r), True)


# -- similarity ----------------------------------------------------------

def similar(p: CondProd, q: CondProd) -> bool:
    return (
        p.n == q.n
        and p.tail == q.tail
        and all(a.I == b.I and len(a.p) == len(b.p) for a, b in zip(p.comps, q.comps))
    )


def similar_J(p: CondProd, q: CondProd, J: Iterable[int]) -> bool:
    return similar(p, q) and all(p.comps[k].p == q.comps[k].p for k in J if k < p.n)


@dataclass(frozen=True)
class SimilarityMap:
    from_: CondProd
    to: CondProd

    def __post_init__(self):
        if not similar(self.from_, self.to):
            raise ValueError("similarity map endpoints are not similar")

    def reverse(self) -> "SimilarityMap":
        return SimilarityMap(self.to, self.from_)

    def to_json(self) -> dict:
        return {"from": self.from_.to_json(), "to": self.to.to_json()}


def _swap(t: Tuple[Fraction, ...], a: Tuple[Fraction, ...], b: Tuple[Fraction, ...], k: int):
    if a == b:
        return t
    if is_prefix(t, a):
        return b[: len(t)]
    if is_prefix(a, t):
        return b + t[len(a):]
    raise AmbiguousOverlap(f"component {k}: {t} is unrelated to {a}")


def apply_similarity(target: CondProd, m: SimilarityMap) -> CondProd:
    comps = list(target.comps)
    for k in range(min(target.n, m.from_.n)):
        a, b = m.from_.comps[k].p, m.to.comps[k].p
        comps[k] = CondLine(_swap(comps[k].p, a, b, k), comps[k].I)
    return replace(target, comps=tuple(comps))


def apply_similarity_point(X: ProductPoint, m: SimilarityMap) -> ProductPoint:
    """Image of a point: components passing through ``from`` go through ``to`` and
    vice versa; other components are fixed."""

    def comp(k: int) -> CauchySeq:
        xs = X.comp(k)
        if k >= m.from_.n:
            return xs
        a, b = m.from_.comps[k].p, m.to.comps[k].p
        pre = xs.prefix(len(a))
        if pre == a:
            new = b
        elif pre == b:
            new = a
        else:
            return xs
        return table(dict(enumerate(new)), xs)

    return ProductPoint(comp, X.limit)
