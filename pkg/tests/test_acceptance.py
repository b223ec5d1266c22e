"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _gen import (  # noqa: E402
    line_through, point_inside, rand_canonical, rand_extension, rand_fixture, rand_line,
    rand_wide_canonical,
)
from cauchyforce.adversary import (  # noqa: E402
    SUPPORT_VIOLATION, VIOLATION, default_root, refute_finite_support_limit, refute_limit,
    refute_modulus, refute_modulus_limit,
)
from cauchyforce.checker import check_trace, check_witness, mutation_suite  # noqa: E402
from cauchyforce.cli import demo_traces  # noqa: E402
from cauchyforce.completion import CONSTRUCTIONS, geometric_family, run_construction  # noqa: E402
from cauchyforce.exact import OpenInterval  # noqa: E402
from cauchyforce.forcing import FORCED, UNDECIDED, AtomicFact, cauchy_witness, forces_atomic  # noqa: E402
from cauchyforce.line import (  # noqa: E402
    CondLine, CoverLine, cond_compat, cond_compat_seq, cond_extends, cond_glb, cover_flatten,
    cover_meet, coverage_failures, grid_sequences,
)
from cauchyforce.oracles import make_oracle  # noqa: E402
from cauchyforce.product import CondProd, is_canonical, step_ok  # noqa: E402
from cauchyforce.sequences import (  # noqa: E402
    CauchySeq, Modulus, SeqModPair, certifies, convfn_to_modulus, dyadic, modulus_to_convfn,
)

F = Fraction
RESULTS = []


def report(k, ok, detail):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# 1 ------------------------------------------------------------------------

def _cover_instance(rng):
    lo = F(rng.randint(-8, 0), 4)
    base = CondLine((), OpenInterval(lo, lo + 2))
    cuts = sorted({base.I.lo + 2 * F(rng.randint(1, 15), 16) for _ in range(3)})
    pts = [base.I.lo] + cuts + [base.I.hi]
    pieces = tuple(CondLine((), OpenInterval(pts[i], pts[i + 1])) for i in range(len(pts) - 1))
    C = CoverLine(base, (base,) + pieces)
    subs = [CoverLine(m, (m, CondLine((m.I.midpoint(),), m.I))) for m in C.members]
    return base, C, subs


def criterion_1(n=10_000, cover_every=1):
    rng = random.Random(1)
    bad = covers = 0
    for i in range(n):
        a = rand_line(rng)
        b = rand_extension(rng, a)
        c = rand_extension(rng, b)
        ok = cond_extends(a, a) and cond_extends(b, a) and cond_extends(c, b) and cond_extends(c, a)
        if cond_extends(a, b) and not a == b:
            ok = False
        x, y = rand_line(rng), rand_line(rng)
        if cond_extends(x, y) and cond_extends(y, x) and x != y:
            ok = False
        # glb of two conditions sitting above a common extension
        ga = CondLine(c.p[: rng.randint(len(a.p), len(c.p))], a.I)
        gb = CondLine(c.p[: rng.randint(len(a.p), len(c.p))], c.I)
        if cond_extends(c, ga) and cond_extends(c, gb):
            g = cond_glb(ga, gb)
            ok &= cond_compat(ga, gb) and cond_extends(g, ga) and cond_extends(g, gb) and cond_extends(c, g)
        # compatibility with a common sequence makes conditions compatible
        r = rand_fixture(rng)
        ok &= cond_compat(line_through(rng, r), line_through(rng, r))
        if i % cover_every == 0:
            covers += 1
            base, C, subs = _cover_instance(rng)
            flat = cover_flatten(C, subs)
            pool = grid_sequences(base, 6) + [rand_fixture(rng, point_inside(rng, base.I)) for _ in range(6)]
            pool = [s for s in pool if cond_compat_seq(base, s, 24)]
            ok &= all(cond_extends(m, base) for m in flat.members)
            ok &= not coverage_failures(flat, pool, 24)
            q = rand_extension(rng, base)
            met = cover_meet(flat, q)
            ok &= all(cond_extends(m, q) for m in met.members)
            ok &= not coverage_failures(met, [s for s in pool if cond_compat_seq(q, s, 24)], 24)
        bad += not ok
    return report(1, bad == 0, f"{n} order/glb instances, {covers} cover-of-cover and cover-meet checks, "
                               f"{bad} failures")


# 2 ------------------------------------------------------------------------

def criterion_2():
    r = CauchySeq(lambda n: F(1, n + 1), F(0))
    a = not cond_compat_seq(CondLine((), OpenInterval.of(0, 2)), r, 64)
    b = cond_compat_seq(CondLine((), OpenInterval.of(-1, 2)), r, 64)
    p = CondProd((CondLine((), OpenInterval.of(0, 1)), CondLine((), OpenInterval.of(0, 10))),
                 OpenInterval.of(0, 10), True)
    c = not is_canonical(p)
    return report(2, a and b and c, f"1/(n+1) vs (0,2) incompatible={a}, vs (-1,2) compatible={b}, "
                                    f"sups 1 and 10 non-canonical={c}")


# 3 ------------------------------------------------------------------------

def _direct_convfn(d, n):
    best = 0
    for m in range(1, n + 1):
        if max(m, d(m)) <= n:
            best = m
    return dyadic(best)


def _direct_modulus(c, n):
    m = 0
    while c(m) > dyadic(n):
        m += 1
    return m


def criterion_3(inputs=24):
    rng = random.Random(3)
    bad = 0
    for _ in range(inputs):
        steps = [rng.randint(0, 4) for _ in range(rng.randint(1, 10))]
        d = Modulus(lambda k, s=steps: sum(s[: k % len(s) + 1]) + 2 * (k // len(s)) + k)
        c = modulus_to_convfn(d)
        bad += any(c(n) != _direct_convfn(d, n) for n in range(65))
        back = convfn_to_modulus(c)
        bad += any(back(n) != _direct_modulus(c, n) for n in range(65))
    c = lambda n: dyadic(n)
    round_trip = all(modulus_to_convfn(convfn_to_modulus(c))(n) == c(n) for n in range(65))
    return report(3, bad == 0 and round_trip,
                  f"{inputs} monotone moduli on 0..64, {bad} mismatches, 2^-n round trip exact={round_trip}")


# 4 ------------------------------------------------------------------------

def _family(rng):
    limit = F(rng.randint(-50, 50), rng.randint(1, 20))
    spread = F(rng.randint(1, 24), 4)
    scale = F(rng.choice([-1, 1]) * rng.randint(1, 8), rng.randint(1, 8))
    ratio = F(rng.choice([-1, 1]), rng.randint(2, 5))
    signs = (lambda j: 1) if rng.random() < 0.5 else (lambda j: -1 if j % 2 else 1)
    return geometric_family(limit, spread, scale, ratio, signs)


def criterion_4(families=64, depth=24):
    rng = random.Random(4)
    far = cert = 0
    for _ in range(families):
        S = _family(rng)
        for name in CONSTRUCTIONS:
            res = run_construction(name, S)
            y = res.seq if isinstance(res, SeqModPair) else res
            far += sum(abs(y(n) - S.known_limit) > dyadic(n - 2) for n in range(depth + 1))
            if name == "pairs+mod":
                cert += certifies(res.mod, res.seq, range(12), span=6) is not None
    return report(4, far == 0 and cert == 0, f"{families} families x 3 constructions, n <= {depth}: "
                                             f"{far} terms beyond 2^-n+2, {cert} modulus certificate failures")


# 5 ------------------------------------------------------------------------

def _entries_check(out):
    w = out.witness
    rec = out.records[w["record"]]
    C = out.final_cond
    i, j = w["positions"]
    return (rec.query.kind == "modulus" and cond_extends(C, rec.answer) and min(i, j) >= rec.value
            and abs(C.p[i] - C.p[j]) > F(1, rec.query.n))


def criterion_5(random_roots=30):
    rng = random.Random(5)
    roots = [default_root(1)] + [rand_line(rng, unbounded=0) for _ in range(random_roots)]
    bad, worst = 0, 0
    for name in ("interval-halving", "length-echo", "stubborn-constant", "center-shrink"):
        for p in roots:
            out = refute_modulus(p, make_oracle(name))
            worst = max(worst, len(out.records))
            ok = (out.tag == VIOLATION and len(out.records) <= 10_000
                  and check_witness(out.to_json()).ok and _entries_check(out))
            bad += not ok
    return report(5, bad == 0, f"4 strategies x {len(roots)} roots, {bad} failures, at most {worst} queries")


# 6 ------------------------------------------------------------------------

def _chain_ok(out):
    prev, n = out.root, 0
    for s in out.steps:
        if s.tag == "inf" or (isinstance(s.tag, tuple) and s.tag[0] == "j"):
            n += 1
            if not step_ok(s.tag, s.cond, prev):
                return False, n
        prev = s.cond
    return True, n


def criterion_6(random_roots=20):
    rng = random.Random(6)
    canon = [rand_canonical(rng) for _ in range(random_roots)]
    runs = [(refute_limit, default_root(2), name) for name in ("const-limit", "comp0-echo", "half-clip")]
    runs += [(refute_modulus_limit, default_root(3), name) for name in ("const-limit", "half-clip")]
    for q in canon:
        runs += [(refute_limit, CondProd(q.comps, q.tail, False), name) for name in ("const-limit", "comp0-echo")]
        runs += [(refute_modulus_limit, q, name) for name in ("const-limit", "comp0-echo")]
    bad = links = 0
    for engine, root, name in runs:
        out = engine(root, make_oracle(name))
        chain, n = _chain_ok(out)
        links += n
        bad += not (out.tag == VIOLATION and len(out.records) <= 10_000 and chain
                    and check_trace(out.to_json()).ok)
    return report(6, bad == 0, f"{len(runs)} limit/modulus-limit runs, {links} j/inf links validated, "
                               f"{bad} failures")


# 7 ------------------------------------------------------------------------

def criterion_7(trials=100):
    over = invalid = 0
    for s in range(trials):
        rng = random.Random(7000 + s)
        for name in ("const-limit", "comp0-echo"):
            out = refute_finite_support_limit(rand_wide_canonical(rng), make_oracle(name), seed=s)
            transfer = [st for st in out.steps if st.tag != "answer"]
            invalid += not (out.tag == VIOLATION and check_trace(out.to_json()).ok)
            over += out.tag == VIOLATION and len(transfer) > out.params["n_r"] + 5
    builtin = [refute_finite_support_limit(default_root(4), make_oracle(name), seed=0)
               for name in ("const-limit", "comp0-echo")]
    builtin_ok = all(o.tag == VIOLATION and check_witness(o.to_json()).ok for o in builtin)
    hits = 0
    for s in range(trials):
        root = rand_wide_canonical(random.Random(7500 + s), committed={0})
        out = refute_finite_support_limit(root, make_oracle("support-cheat"), seed=s)
        hits += out.tag == SUPPORT_VIOLATION and check_trace(out.to_json()).ok
    ok = over == 0 and invalid == 0 and builtin_ok and hits >= 0.95 * trials
    return report(7, ok, f"honest: {2 * trials} transfers, {over} over n_r+5, {invalid} invalid; "
                         f"built-ins refuted={builtin_ok}; cheat exposed {hits}/{trials}")


# 8 ------------------------------------------------------------------------

def _facts(rng, c):
    n = rng.randint(0, len(c.p) + 2)
    if rng.random() < 0.5:
        q = c.p[n] if n < len(c.p) and rng.random() < 0.6 else F(rng.randint(-48, 48), rng.randint(1, 12))
        return AtomicFact.z_value(n, q)
    return AtomicFact.gap(rng.randint(0, len(c.p) + 1), rng.randint(1, 8))


def criterion_8(samples=10_000, witnesses=500):
    rng = random.Random(8)
    bad = decided = 0
    for _ in range(samples):
        c = rand_line(rng, unbounded=0.05)
        d = rand_extension(rng, rand_extension(rng, c))
        a = _facts(rng, c)
        v = forces_atomic(c, a)
        if v != UNDECIDED:
            decided += 1
            bad += forces_atomic(d, a) != v
    wbad = 0
    for _ in range(witnesses):
        X = rand_fixture(rng)
        N = rng.randint(1, 5000)
        cond, M = cauchy_witness(X, N)
        wbad += not (cond.I.hi - cond.I.lo < F(1, N) and cond_compat_seq(cond, X, M + 64)
                     and forces_atomic(cond, AtomicFact.gap(M, N)) == FORCED)
    return report(8, bad == 0 and wbad == 0, f"{samples} pairs ({decided} decided), {bad} verdict flips; "
                                             f"{witnesses} witnesses, {wbad} failures")


# 9 ------------------------------------------------------------------------

def criterion_9(mutants=50):
    first = [o.dumps() for o in demo_traces(11)]
    second = [o.dumps() for o in demo_traces(11)]
    same = first == second
    docs = [json.loads(t) for t in first]
    suite = mutation_suite(docs, mutants)
    rejected = located = 0
    for _, d in suite:
        r = check_trace(d)
        rejected += not r.ok
        located += (not r.ok) and bool(r.where)
    ok = same and len(suite) >= mutants and rejected == len(suite) and located == len(suite)
    return report(9, ok, f"{len(first)} traces byte-identical={same}; {rejected}/{len(suite)} mutants rejected, "
                         f"{located} with the failing location named")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 10)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    t0 = time.time()
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed in {time.time() - t0:.1f}s")
    sys.exit(0 if all(results) else 1)
