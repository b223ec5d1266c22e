"""Limit constructions for Cauchy sequences of Cauchy sequences.

Three positive cases are realized:

* ``pairs+mod``  -- entries are sequence/modulus pairs and the outer sequence has
  a modulus; the result carries a modulus too.
* ``pairs``      -- entries are pairs, no outer modulus; the result is a bare
  Cauchy sequence.
* ``plain+mod``  -- entries are bare sequences, the outer sequence has a modulus.
  No terminating rule exists in general, so the inner index is chosen by a
  capped oscillation search.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .exact import Q
from .sequences import (
    CauchySeq,
    Modulus,
    SearchCapExceeded,
    SeqModPair,
    constant,
    dyadic,
    geometric,
)

Entry = Union[CauchySeq, SeqModPair]


@dataclass(frozen=True, eq=False)
class OuterSeq:
    entries: Callable[[int], Entry]
    outer_mod: Optional[Modulus] = None
    known_limit: Optional[Fraction] = None  # fixture metadata

    def __call__(self, n: int) -> Entry:
        return self.entries(n)


def limit_pairs_with_modulus(S: OuterSeq) -> SeqModPair:
    if S.outer_mod is None:
        raise ValueError("pairs+mod needs an outer modulus")
    outer = S.outer_mod

    def y(k: int) -> Fraction:
        pair = S(k)
        return pair.seq(pair.mod(k))

    h = Modulus(lambda k: max(outer(k + 2), k + 2))
    return SeqModPair(CauchySeq(y, S.known_limit, name="lim(pairs+mod)"), h)


def limit_pairs_no_modulus(S: OuterSeq) -> CauchySeq:
    def y(n: int) -> Fraction:
        pair = S(n)
        return pair.seq(pair.mod(n))

    return CauchySeq(y, S.known_limit, name="lim(pairs)")


def stable_index(x: CauchySeq, tol: Fraction, window: int = 2, cap: int = 1 << 16) -> int:
    """Least ``i`` whose observed oscillation over ``[i, (i+1)*window]`` is <= tol."""
    if window < 2:
        raise ValueError("window must be >= 2")
    for i in range(cap):
        vals = [x(t) for t in range(i, (i + 1) * window + 1)]
        if max(vals) - min(vals) <= tol:
            return i
    raise SearchCapExceeded(f"no stable window within {cap} for {x.name}")


def limit_plain_with_modulus(
    S: OuterSeq, window: int = 2, osc_tol_shift: int = 0, cap: int = 1 << 16
) -> CauchySeq:
    if S.outer_mod is None:
        raise ValueError("plain+mod needs an outer modulus")
    outer = S.outer_mod

    def y(n: int) -> Fraction:
        x = S(outer(n + 3))
        if isinstance(x, SeqModPair):
            x = x.seq
        s = stable_index(x, dyadic(n + 3 + osc_tol_shift), window, cap)
        return x(s)

    return CauchySeq(y, S.known_limit, name="lim(plain+mod)")


def embed_constant(x: CauchySeq) -> OuterSeq:
    zero = Modulus(lambda k: 0)
    return OuterSeq(lambda n: SeqModPair(constant(x(n)), zero), None, x.known_limit)


CONSTRUCTIONS = ("pairs+mod", "pairs", "plain+mod")


def run_construction(name: str, S: OuterSeq, **kw):
    if name == "pairs+mod":
        return limit_pairs_with_modulus(S)
    if name == "pairs":
        return limit_pairs_no_modulus(S)
    if name == "plain+mod":
        return limit_plain_with_modulus(S, **kw)
    raise ValueError(f"unknown construction {name!r}")


# -- fixture families -----------------------------------------------------

def least_index(pred: Callable[[int], bool], cap: int = 1 << 20) -> int:
    n = 0
    while not pred(n):
        n += 1
        if n > cap:
            raise SearchCapExceeded("least_index")
    return n


def geometric_modulus(scale: Fraction, ratio: Fraction) -> Modulus:
    """``|X(m)-X(n)| <= 2|a||r|^min(m,n)`` for ``X(n) = L + a r^n``."""
    a, r = abs(Q(scale)), abs(Q(ratio))
    if a == 0 or r == 0:
        return Modulus(lambda k: 0 if a == 0 else 1)
    return Modulus(lambda k: least_index(lambda N: 2 * a * r**N <= dyadic(k)))


def geometric_family(
    limit, spread, scale, ratio, signs: Optional[Callable[[int], int]] = None
) -> OuterSeq:
    """Entries ``X_j(i) = L_j + scale*ratio^i`` with ``L_j = limit + sign(j)*spread*2^-(j+1)``."""
    L, b, a, r = Q(limit), Q(spread), Q(scale), Q(ratio)
    sg = signs or (lambda j: 1)
    inner = geometric_modulus(a, r)

    def entry(j: int) -> SeqModPair:
        return SeqModPair(geometric(L + sg(j) * b * dyadic(j + 1), a, r), inner)

    outer = Modulus(lambda k: least_index(lambda N: abs(b) * dyadic(N) <= dyadic(k)))
    return OuterSeq(entry, outer, L)
