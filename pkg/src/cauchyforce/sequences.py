"""Rational Cauchy streams, moduli of convergence and convergence functions.

Moduli are dyadic: ``f(k)`` claims ``|X(m) - X(n)| <= 2**-k`` for ``m, n >= f(k)``.
Every Cauchy-property check here is windowed; nothing is claimed beyond the
window that was scanned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Tuple

from .exact import Q, fmt_q

ONE = Fraction(1)


def dyadic(k: int) -> Fraction:
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)


class SearchCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CauchySeq:
    gen: Callable[[int], Fraction]
    known_limit: Optional[Fraction] = None
    # |gen(n) - known_limit| <= envelope(n); fixture metadata only
    envelope: Optional[Callable[[int], Fraction]] = None
    name: str = ""

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError(n)
        return self.gen(n)

    def prefix(self, length: int) -> Tuple[Fraction, ...]:
        return tuple(self.gen(i) for i in range(length))

    def check_envelope(self, upto: int) -> bool:
        if self.known_limit is None or self.envelope is None:
            raise ValueError("sequence carries no fixture metadata")
        return all(abs(self.gen(n) - self.known_limit) <= self.envelope(n) for n in range(upto))

    def settle_index(self, radius: Fraction, cap: int = 1 << 20) -> int:
        """Least M such that every entry from M on is within ``radius`` of the
        known limit, judged by the envelope (assumed non-increasing)."""
        if self.envelope is None:
            raise ValueError("sequence carries no envelope")
        if self.envelope(0) <= radius:
            return 0
        hi = 1
        while self.envelope(hi) > radius:
            hi *= 2
            if hi > cap:
                raise SearchCapExceeded(f"envelope never drops below {radius}")
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.envelope(mid) <= radius:
                hi = mid
            else:
                lo = mid
        return hi


def constant(c) -> CauchySeq:
    c = Q(c)
    return CauchySeq(lambda n: c, c, lambda n: Fraction(0), f"const({c})")


class Modulus:
    """Dyadic modulus; non-monotone inputs are wrapped as running maxima."""

    def __init__(self, f: Callable[[int], int]):
        self._f = f
        self._cache: list[int] = []

    def __call__(self, k: int) -> int:
        while len(self._cache) <= k:
            i = len(self._cache)
            v = self._f(i)
            self._cache.append(v if not self._cache else max(v, self._cache[-1]))
        return self._cache[k]


@dataclass(frozen=True, eq=False)
class ConvergenceFn:
    c: Callable[[int], Fraction]

    def __call__(self, n: int) -> Fraction:
        return self.c(n)


@dataclass(frozen=True, eq=False)
class SeqModPair:
    seq: CauchySeq
    mod: Modulus


def certifies(mod: Modulus, x: CauchySeq, ks, span: int = 8) -> Optional[Tuple[int, int, int]]:
    """Sample ``(k, m, n)`` with ``m, n`` in ``[mod(k), mod(k)+span]``; return the
    first triple breaking the dyadic bound, or None."""
    for k in ks:
        start = mod(k)
        vals = [x(i) for i in range(start, start + span + 1)]
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                if abs(vals[a] - vals[b]) > dyadic(k):
                    return (k, start + a, start + b)
    return None


def convfn_certifies(c: ConvergenceFn, x: CauchySeq, ns, span: int = 8) -> Optional[Tuple[int, int, int]]:
    for n in ns:
        vals = [x(i) for i in range(n, n + span + 1)]
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                if abs(vals[a] - vals[b]) > c(n):
                    return (n, n + a, n + b)
    return None


def modulus_to_convfn(d: Callable[[int], int]) -> ConvergenceFn:
    """``c(n) = 2**-m`` for the greatest ``m`` with ``max(m, d(m)) <= n``; 1 if none."""

    def c(n: int) -> Fraction:
        best = 0
        for m in range(1, n + 1):
            if d(m) <= n:
                best = m
            else:
                break  # d monotone: no larger m can qualify
        return dyadic(best)

    return ConvergenceFn(c)


def convfn_to_modulus(c: Callable[[int], Fraction], cap: int = 1 << 24) -> Modulus:
    """``d(n)`` is the least ``m`` with ``c(m) <= 2**-n`` (galloping search, c decreasing)."""

    def d(n: int) -> int:
        target = dyadic(n)
        if c(0) <= target:
            return 0
        hi = 1
        while c(hi) > target:
            hi *= 2
            if hi > cap:
                raise SearchCapExceeded(f"c(m) > 2^-{n} for all m <= {cap}")
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if c(mid) <= target:
                hi = mid
            else:
                lo = mid
        return hi

    return Modulus(d)


@dataclass(frozen=True)
class CauchyCheck:
    verdict: str  # "witness" | "counterexample" | "inconclusive"
    M: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None


def check_cauchy_for(x: CauchySeq, N: int, bound_idx: int) -> CauchyCheck:
    """Look for the least ``M <= bound_idx // 2`` with every pair in
    ``[M, bound_idx]`` within ``1/N``."""
    tol = Fraction(1, N)
    vals = [x(i) for i in range(bound_idx + 1)]
    hi = [Fraction(0)] * (bound_idx + 1)
    lo = [Fraction(0)] * (bound_idx + 1)
    hi[-1] = lo[-1] = vals[-1]
    for i in range(bound_idx - 1, -1, -1):
        hi[i] = max(vals[i], hi[i + 1])
        lo[i] = min(vals[i], lo[i + 1])
    for M in range(bound_idx // 2 + 1):
        if hi[M] - lo[M] <= tol:
            return CauchyCheck("witness", M=M)
    if hi[bound_idx // 2] - lo[bound_idx // 2] > tol:
        for m in range(bound_idx + 1):
            for n in range(m + 1, bound_idx + 1):
                if abs(vals[m] - vals[n]) > tol:
                    return CauchyCheck("counterexample", pair=(m, n))
    return CauchyCheck("inconclusive")


def seq_dist(x: CauchySeq, y: CauchySeq) -> CauchySeq:
    lim = None
    if x.known_limit is not None and y.known_limit is not None:
        lim = abs(x.known_limit - y.known_limit)
    env = None
    if x.envelope is not None and y.envelope is not None:
        env = lambda n: x.envelope(n) + y.envelope(n)
    return CauchySeq(lambda n: abs(x(n) - y(n)), lim, env, f"|{x.name}-{y.name}|")


@dataclass(frozen=True)
class Verdict:
    holds: bool
    index: Optional[int] = None  # refuting index, or the N found for holds


def seq_less(x: CauchySeq, y: CauchySeq, m: int, N: int, probe: int) -> Verdict:
    """Check the witness pair ``(m, N)`` for ``x < y`` on indices ``N+1..probe``."""
    if probe < N:
        raise ValueError("probe must be >= N")
    gap = Fraction(1, m)
    for k in range(N + 1, probe + 1):
        if not x(k) + gap < y(k):
            return Verdict(False, k)
    return Verdict(True, N)


def seq_is_zero(x: CauchySeq, k: int, probe: int) -> Verdict:
    """Find ``N <= probe // 2`` with ``|x(i)| < 1/k`` for ``N < i <= probe``."""
    tol = Fraction(1, k)
    bad = [i for i in range(probe + 1) if not abs(x(i)) < tol]
    last_bad = bad[-1] if bad else -1
    if last_bad <= probe // 2:
        return Verdict(True, max(last_bad, 0))
    return Verdict(False, last_bad)


# -- fixtures -------------------------------------------------------------

def geometric(limit, scale=1, ratio=Fraction(1, 2)) -> CauchySeq:
    L, a, r = Q(limit), Q(scale), Q(ratio)
    if not -1 < r < 1:
        raise ValueError("ratio must lie in (-1, 1)")
    return CauchySeq(
        lambda n: L + a * r**n, L, lambda n: abs(a) * abs(r) ** n, f"geom({L},{a},{r})"
    )


def harmonic(limit, scale=1) -> CauchySeq:
    L, a = Q(limit), Q(scale)
    return CauchySeq(
        lambda n: L + a / (n + 1), L, lambda n: abs(a) / (n + 1), f"harm({L},{a})"
    )


def table(entries: dict, tail: CauchySeq) -> CauchySeq:
    entries = {int(i): Q(v) for i, v in entries.items()}
    L = tail.known_limit

    def gen(n):
        return entries.get(n, tail(n))

    env = None
    if L is not None and tail.envelope is not None:
        def env(n):
            extra = [abs(v - L) for i, v in entries.items() if i >= n]
            return max([tail.envelope(n)] + extra)
    return CauchySeq(gen, L, env, f"table({tail.name})")


def fixture_from_json(d: dict) -> CauchySeq:
    kind = d.get("kind")
    if kind == "geometric":
        return geometric(d["limit"], d.get("scale", 1), d.get("ratio", "1/2"))
    if kind == "harmonic":
        return harmonic(d["limit"], d.get("scale", 1))
    if kind == "constant":
        return constant(d["value"])
    if kind == "table":
        return table({int(i): v for i, v in d["entries"]}, fixture_from_json(d["tail"]))
    raise ValueError(f"unknown fixture kind {kind!r}")


def fixture_to_json_limit(x: CauchySeq) -> Optional[str]:
    return None if x.known_limit is None else fmt_q(x.known_limit)
