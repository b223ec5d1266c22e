"""Random generators shared by property tests and the acceptance gate."""
import random
from fractions import Fraction

from cauchyforce.exact import OpenInterval
from cauchyforce.line import CondLine
from cauchyforce.product import CondProd
from cauchyforce.sequences import CauchySeq, geometric, harmonic, table


def rand_q(rng, lo=-4, hi=4, den=12):
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def rand_interval(rng, unbounded=0.1):
    a, b = rand_q(rng), rand_q(rng)
    while a == b:
        b = rand_q(rng)
    lo, hi = min(a, b), max(a, b)
    r = rng.random()
    if r < unbounded / 2:
        lo = None
    elif r < unbounded:
        hi = None
    return OpenInterval(lo, hi)


def point_inside(rng, I):
    if I.bounded:
        m = rng.randint(2, 24)
        return I.lo + (I.hi - I.lo) * Fraction(rng.randint(1, m - 1), m)
    if I.lo is not None:
        return I.lo + Fraction(rng.randint(1, 40), rng.randint(1, 8))
    if I.hi is not None:
        return I.hi - Fraction(rng.randint(1, 40), rng.randint(1, 8))
    return rand_q(rng)


def sub_interval(rng, I):
    a, b = point_inside(rng, I), point_inside(rng, I)
    if a == b:
        return OpenInterval(a - (a - (I.lo if I.lo is not None else a - 1)) / 2, a) if rng.random() < 0.5 else I
    if rng.random() < 0.15:
        return I
    return OpenInterval(min(a, b), max(a, b))


def rand_line(rng, max_len=3, unbounded=0.1):
    return CondLine(tuple(rand_q(rng) for _ in range(rng.randint(0, max_len))), rand_interval(rng, unbounded))


def rand_extension(rng, c, max_new=2):
    p = c.p + tuple(point_inside(rng, c.I) for _ in range(rng.randint(0, max_new)))
    return CondLine(p, sub_interval(rng, c.I))


def rand_fixture(rng, limit=None):
    L = rand_q(rng) if limit is None else limit
    kind = rng.random()
    if kind < 0.4:
        return geometric(L, Fraction(rng.randint(-16, 16), rng.randint(1, 8)), Fraction(rng.choice([-1, 1]), rng.randint(2, 4)))
    if kind < 0.7:
        return harmonic(L, Fraction(rng.randint(-4, 4), rng.randint(1, 4)))
    base = geometric(L, Fraction(1, rng.randint(1, 8)), Fraction(1, 2))
    return table({i: rand_q(rng) for i in range(rng.randint(0, 4))}, base)


def line_through(rng, r, probe=40):
    """A random condition compatible with fixture ``r``: a prefix of ``r`` and an
    interval around the limit wide enough to hold every later entry."""
    k = rng.randint(0, 6)
    w = r.envelope(k) + Fraction(1, rng.randint(1, 16))
    L = r.known_limit
    left = w * Fraction(rng.randint(8, 16), 8)
    right = w * Fraction(rng.randint(8, 16), 8)
    return CondLine(r.prefix(k), OpenInterval(L - left, L + right))


def rand_canonical(rng, max_n=3):
    """A canonical product condition with bounded intervals."""
    T = rand_q(rng, -2, 2)
    n = rng.randint(0, max_n)
    tail_len = Fraction(rng.randint(1, 16), 8)
    comps = []
    for j in range(n):
        s = T + Fraction(rng.randint(-8, 8), 8) * Fraction(1, 2 ** (j + 1))
        length = Fraction(rng.randint(1, 16), 8)
        I = OpenInterval(s - length, s)
        pre = tuple(point_inside(rng, I) for _ in range(rng.randint(0, 2)))
        comps.append(CondLine(pre, I))
    return CondProd(tuple(comps), OpenInterval(T - tail_len, T), True)


def seeded(seed):
    return random.Random(seed)


def rand_prod_extension(rng, p, max_new=2):
    """A random q <= p (component-wise extensions, new components inside the
    tail, tail shrunk)."""
    comps = [rand_extension(rng, c) for c in p.comps]
    for _ in range(rng.randint(0, max_new)):
        I = sub_interval(rng, p.tail)
        comps.append(CondLine(tuple(point_inside(rng, I) for _ in range(rng.randint(0, 2))), I))
    return CondProd(tuple(comps), sub_interval(rng, p.tail), p.conv2n)


def rand_prod(rng, max_n=3):
    n = rng.randint(0, max_n)
    return CondProd(tuple(rand_line(rng, unbounded=0) for _ in range(n)), rand_interval(rng, 0), False)


def rand_wide_canonical(rng, max_n=3, committed=None):
    """A canonical product condition with a tail of length 3 to 6, roomy enough
    to place a tail far from any committed limit value.  Only components in
    ``committed`` (all, if None) may carry prefix entries."""
    h = rand_q(rng, -2, 2)
    length = Fraction(rng.randint(24, 48), 8)
    comps = []
    for j in range(rng.randint(0, max_n)):
        hj = h + Fraction(rng.randint(0, 8), 8) / 2 ** (j + 1)
        I = OpenInterval(hj - length - Fraction(rng.randint(0, 8), 8), hj)
        k = rng.randint(0, 2) if committed is None or j in committed else 0
        comps.append(CondLine(tuple(point_inside(rng, I) for _ in range(k)), I))
    return CondProd(tuple(comps), OpenInterval(h - length, h), True)
