"""Refutation engines.

Each engine plays against a strategy oracle that claims to compute a modulus
or a limit for the generic sequence, and tries to build a condition extending
one of the oracle's answers that contradicts what the oracle committed to.
The result is an :class:`Outcome` carrying the full trace (every query, every
answer, every step of the extension chain) so that :mod:`cauchyforce.checker`
can re-validate it without trusting the engine.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence

from .exact import OpenInterval, fmt_q, interval_intersect, interval_len, is_prefix
from .line import CondLine, cond_compat, cond_extends, overhang_inside
from .oracles import Query, StrategyOracle, cond_to_json, value_to_json
from .product import CondProd, is_canonical, prod_compat, prod_extends, prod_meet, similar_J, step_ok
from .sequences import dyadic

VIOLATION = "Violation"
INCONSISTENCY = "InconsistencyWitness"
LIMIT_CONTRADICTION = "LimitContradiction"
SUPPORT_VIOLATION = "SupportViolationWitness"
EXHAUSTED = "Exhausted"

DEFAULT_MAX_STEPS = 10_000


class OracleContractViolation(Exception):
    """The oracle answered with something that is not an extension of the query
    (or, in canonical runs, not canonical)."""

    def __init__(self, message, outcome=None):
        super().__init__(message)
        self.outcome = outcome


class _OutOfBudget(Exception):
    pass


class _Found(Exception):
    def __init__(self, tag, witness):
        self.tag, self.witness = tag, witness


def extends(a, b) -> bool:
    return prod_extends(a, b) if isinstance(a, CondProd) else cond_extends(a, b)


def compatible(a, b) -> bool:
    return prod_compat(a, b) if isinstance(a, CondProd) else cond_compat(a, b)


def boundary_step(new: CondProd, old: CondProd, root: CondProd) -> bool:
    """Intervals (tail and components) may move anywhere inside ``root``, but
    committed prefixes only grow."""
    if new.n < old.n or not prod_extends(new, root):
        return False
    return all(is_prefix(old.comps[j].p, new.comps[j].p) for j in range(old.n))


@dataclass
class Record:
    idx: int
    query_cond: object
    query: Query
    answer: object
    value: object

    def to_json(self):
        return {
            "idx": self.idx,
            "query_cond": cond_to_json(self.query_cond),
            "query": self.query.to_json(),
            "answer": cond_to_json(self.answer),
            "value": value_to_json(self.value),
        }


@dataclass
class Step:
    tag: object
    cond: object
    records: tuple = ()
    info: dict = field(default_factory=dict)

    def to_json(self):
        d = {"tag": list(self.tag) if isinstance(self.tag, tuple) else self.tag,
             "cond": cond_to_json(self.cond), "records": list(self.records)}
        if self.info:
            d["info"] = self.info
        return d


@dataclass
class Outcome:
    tag: str
    theorem: int
    root: object
    params: dict
    records: List[Record]
    steps: List[Step]
    witness: Optional[dict] = None

    @property
    def final_cond(self):
        return self.steps[-1].cond if self.steps else self.root

    def to_json(self) -> dict:
        return {
            "header": dict(self.params, theorem=self.theorem),
            "root": cond_to_json(self.root),
            "records": [r.to_json() for r in self.records],
            "steps": [dict(s.to_json(), k=k) for k, s in enumerate(self.steps)],
            "outcome": {"tag": self.tag, "witness": self.witness},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


class Session:
    """Bookkeeping for one run: query budget, answer validation and the trace."""

    def __init__(self, oracle: StrategyOracle, root, theorem: int, params: dict,
                 max_steps: int = DEFAULT_MAX_STEPS, canonical: bool = False):
        self.oracle = oracle
        self.root = root
        self.theorem = theorem
        self.params = dict(params, oracle=oracle.name, max_steps=max_steps)
        self.max_steps = max_steps
        self.canonical = canonical
        self.records: List[Record] = []
        self.steps: List[Step] = []

    @property
    def budget_left(self) -> int:
        return self.max_steps - len(self.records)

    def ask(self, cond, query: Query) -> Record:
        if self.budget_left <= 0:
            raise _OutOfBudget()
        ans, val = self.oracle.answer(cond, query)
        rec = Record(len(self.records), cond, query, ans, val)
        self.records.append(rec)
        problem = None
        if type(ans) is not type(cond) or not extends(ans, cond):
            problem = f"answer to query #{rec.idx} does not extend the queried condition"
        elif ans.is_empty:
            problem = f"answer to query #{rec.idx} is the empty condition"
        elif self.canonical and not _canonical(ans):
            problem = f"answer to query #{rec.idx} is not canonical"
        elif query.kind == "modulus" and not (isinstance(val, int) and val >= 0):
            problem = f"answer to query #{rec.idx} is not a natural number"
        elif query.kind != "modulus" and not isinstance(val, Fraction):
            problem = f"answer to query #{rec.idx} is not a rational"
        if problem:
            raise OracleContractViolation(problem, self.outcome("OracleContractViolation", None))
        return rec

    def step(self, tag, cond, records=(), **info):
        self.steps.append(Step(tag, cond, tuple(r.idx for r in records), info))

    def echo(self, rec: Record) -> Record:
        """Re-ask the same question at the oracle's own answer."""
        again = self.ask(rec.answer, rec.query)
        if again.value != rec.value:
            raise _Found(INCONSISTENCY, {"kind": "inconsistency", "records": [rec.idx, again.idx]})
        return again

    def outcome(self, tag, witness) -> Outcome:
        return Outcome(tag, self.theorem, self.root, self.params, self.records, self.steps, witness)


def _canonical(c: CondProd) -> bool:
    try:
        return is_canonical(c)
    except ValueError:
        return False


def _least_n_below(x: Fraction) -> int:
    n = 1
    while Fraction(1, n) >= x:
        n += 1
    return n


# -- first theorem: no modulus of convergence on the line ----------------

def _spread_violation(ses: Session, rec: Record, tol: Fraction):
    """An answer whose interval is longer than ``tol`` is refuted on the spot:
    pad past the claimed index and append two far-apart entries."""
    ans = rec.answer
    J = ans.I
    if interval_len(J) <= tol:
        return None
    q = ans.p
    while len(q) <= rec.value:
        q = q + (J.midpoint(),)
    d = (interval_len(J) - tol) / 4
    a, b = J.lo + d, J.hi - d
    C = CondLine(q + (a, b), J)
    ses.step("ext", C)
    return {"kind": "two_entries", "record": rec.idx, "positions": [len(q), len(q) + 1]}


def refute_modulus(p: CondLine, oracle: StrategyOracle, max_steps: int = DEFAULT_MAX_STEPS,
                   n: Optional[int] = None, resolution: int = 12, seed: int = 0) -> Outcome:
    """Defeat a purported modulus of convergence for the generic sequence below ``p``.

    The oracle is asked for ``m`` with all entries past ``m`` within ``1/n`` of
    each other.  The engine then marches the committed prefix across the whole
    interval of ``p`` while keeping every answer it relies on at the same ``m``;
    two entries near opposite ends of the interval refute the claim.
    """
    I = p.I
    if p.is_empty or not I.bounded:
        raise ValueError("need a non-empty condition with a bounded interval")
    length = interval_len(I)
    n = n or _least_n_below(length / 2)
    tol = Fraction(1, n)
    if tol >= length:
        raise ValueError(f"1/n must be shorter than the interval (n={n})")
    eps = (length - tol) / 2
    query = Query("modulus", n, tol)
    ses = Session(oracle, p, 1, {"seed": seed, "n": n, "eps": fmt_q(eps)}, max_steps)
    try:
        rec = ses.ask(p, query)
        ses.step("answer", rec.answer, [rec])
        w = _spread_violation(ses, rec, tol)
        if w:
            return ses.outcome(VIOLATION, w)
        cur = ses.echo(rec)
        ses.step("probe", cur.answer, [cur])
        w = _spread_violation(ses, cur, tol)
        if w:
            return ses.outcome(VIOLATION, w)
        return _march_line(ses, p, query, cur, tol, eps, resolution)
    except _Found as f:
        return ses.outcome(f.tag, f.witness)
    except _OutOfBudget:
        return ses.outcome(EXHAUSTED, None)


def _march_line(ses, p, query, cur, tol, eps, resolution):
    I = p.I
    m = cur.value
    q, J = cur.answer.p, cur.answer.I
    while len(q) <= m:
        q = q + (J.midpoint(),)
    ses.step("ext", CondLine(q, J))
    direction = 1 if J.hi < I.hi else -1
    first = None  # (position, value) of the entry placed near the first extreme
    while True:
        near = J.hi if direction > 0 else J.lo
        if (direction > 0 and J.hi > I.hi - eps) or (direction < 0 and J.lo < I.lo + eps):
            if direction > 0:
                v = (max(J.lo, I.hi - eps) + J.hi) / 2
                newJ = OpenInterval(J.lo, v)
            else:
                v = (J.lo + min(J.hi, I.lo + eps)) / 2
                newJ = OpenInterval(v, J.hi)
            pos = len(q)
            q = q + (v,)
            J = newJ
            if first is None:
                first = (pos, v)
                direction = -direction
                ses.step("ext", CondLine(q, J), case="turnaround", dir=direction)
                continue
            ses.step("ext", CondLine(q, J), case="A", dir=direction)
            return ses.outcome(VIOLATION, {"kind": "two_entries", "record": cur.idx,
                                           "positions": [first[0], pos]})
        if ses.budget_left <= 1:
            return _limit_probe(ses, query, cur, q, J, near)
        far = I.hi if direction > 0 else I.lo
        delta = interval_len(J) / 4
        accepted = None
        for t in range(resolution):
            if ses.budget_left <= 1:
                break
            b = near + (far - near) / 2 ** t
            window = OpenInterval(near - delta, b) if direction > 0 else OpenInterval(b, near + delta)
            rec = ses.ask(CondLine(q, window), query)
            if rec.value != m:
                if compatible(rec.answer, cur.answer):
                    raise _Found(INCONSISTENCY, {"kind": "inconsistency", "records": [cur.idx, rec.idx]})
                continue
            A = rec.answer.I
            if (direction > 0 and A.hi > near) or (direction < 0 and A.lo < near):
                accepted = rec
                break
        if accepted is not None:
            A = accepted.answer
            x = near if near in A.I else A.I.midpoint()
            J = OpenInterval(x, A.I.hi) if direction > 0 else OpenInterval(A.I.lo, x)
            q = A.p + (x,)
            reached = A.I.hi if direction > 0 else A.I.lo
            ses.step("probe", CondLine(q, J), [accepted], case="I", dir=direction,
                     reached=fmt_q(reached), fraction=fmt_q((reached - near) / (far - near)))
            cur = accepted
            w = _spread_violation(ses, cur, tol)
            if w:
                return ses.outcome(VIOLATION, w)
        else:
            x = J.midpoint()
            q = q + (x,)
            J = OpenInterval(x, J.hi) if direction > 0 else OpenInterval(J.lo, x)
            ses.step("ext", CondLine(q, J), case="II", dir=direction)


def _limit_probe(ses, query, cur, q, J, point):
    """Out of budget: ask once more around the accumulated boundary point; a
    different index on a compatible condition contradicts the last answer."""
    d = interval_len(J)
    window = interval_intersect(OpenInterval(point - d, point + d), ses.root.I)
    rec = ses.ask(CondLine(q, window), query)
    if rec.value != cur.value and compatible(rec.answer, cur.answer):
        return ses.outcome(LIMIT_CONTRADICTION, {"kind": "inconsistency", "records": [cur.idx, rec.idx]})
    return ses.outcome(EXHAUSTED, None)


# -- product space: fact-preserving marches ------------------------------

@dataclass
class Fact:
    """A committed answer: ``query`` returned ``value``; ``rec`` is the latest
    record asserting it."""
    query: Query
    value: object
    rec: Record


def _reassert(ses: Session, probe: CondProd, facts: Sequence[Fact]):
    """Ask every fact again, sequentially, starting at ``probe``.  Returns the
    new records, or None if some value moved on an incompatible condition."""
    c, recs = probe, []
    for f in facts:
        r = ses.ask(c, f.query)
        if r.value != f.value:
            if compatible(r.answer, f.rec.answer):
                raise _Found(INCONSISTENCY, {"kind": "inconsistency", "records": [f.rec.idx, r.idx]})
            return None
        recs.append(r)
        c = r.answer
    return recs


def _march(ses, cur, facts, make_probe, relation, progress, resolution, jump=None):
    """One boundary-point step: try probes at dyadic fractions ``1, 1/2, 1/4, ...``
    of the way toward the target; keep the first one whose answers preserve
    every fact, relate to ``cur`` by ``relation`` and make progress.  A direct
    ``jump`` probe, if given, is tried before the others (reported as t = -1)."""
    candidates = ([(-1, jump)] if jump is not None else []) + [
        (t, None) for t in range(resolution)]
    for t, probe in candidates:
        if probe is None:
            probe = make_probe(Fraction(1, 2 ** t))
        if probe is None:
            continue
        recs = _reassert(ses, probe, facts)
        if recs is None:
            continue
        new = recs[-1].answer
        if relation(new, cur) and progress(new):
            return new, recs, t
    return None


def _fraction(t):
    return "jump" if t < 0 else f"1/{2 ** t}"


def _refresh(facts, recs):
    return [Fact(f.query, f.value, r) for f, r in zip(facts, recs)]


def infty_extend_preserving(ses, cur, facts, x, resolution=16, jump_tail=None):
    """Chain of tail-widening steps from ``cur`` until the tail contains ``x``,
    keeping every fact; returns the final condition and refreshed facts.
    ``jump_tail`` (containing ``x``) is tried first at every step."""
    root = ses.root
    while x not in cur.tail:
        up = x >= cur.tail.hi
        near = cur.tail.hi if up else cur.tail.lo
        far = root.tail.hi if up else root.tail.lo
        c0 = cur

        def make_probe(s, c0=c0, near=near, far=far, up=up):
            b = near + (far - near) * s
            t = OpenInterval(c0.tail.lo, b) if up else OpenInterval(b, c0.tail.hi)
            return c0.with_tail(t)

        got = _march(ses, cur, facts, make_probe, lambda a, b: step_ok("inf", a, b),
                     lambda a, up=up, near=near: (a.tail.hi > near) if up else (a.tail.lo < near),
                     resolution, None if jump_tail is None else cur.with_tail(jump_tail))
        if got is None:
            raise _OutOfBudget()
        cur, recs, t = got
        facts = _refresh(facts, recs)
        ses.step("inf", cur, recs, target=fmt_q(x), fraction=_fraction(t))
    return cur, facts


def j_extend_preserving(ses, cur, facts, j, x, resolution=16):
    """Like :func:`infty_extend_preserving` for the interval of component ``j``."""
    root = ses.root
    bound = root.comps[j].I if j < root.n else root.tail
    while x not in cur.comps[j].I:
        K = cur.comps[j].I
        up = x >= K.hi
        near = K.hi if up else K.lo
        far = bound.hi if up else bound.lo
        c0 = cur

        def make_probe(s, c0=c0, K=K, near=near, far=far, up=up):
            b = near + (far - near) * s
            I = OpenInterval(K.lo, b) if up else OpenInterval(b, K.hi)
            return c0.with_comp(j, CondLine(c0.comps[j].p, I))

        got = _march(ses, cur, facts, make_probe, lambda a, b: step_ok(("j", j), a, b),
                     lambda a, up=up, near=near: (a.comps[j].I.hi > near) if up else (a.comps[j].I.lo < near),
                     resolution)
        if got is None:
            raise _OutOfBudget()
        cur, recs, t = got
        facts = _refresh(facts, recs)
        ses.step(("j", j), cur, recs, target=fmt_q(x), fraction=_fraction(t))
    return cur, facts


def _separation(ses, C, value_fact, modulus_fact=None):
    ses.step("ext", C)
    w = {"kind": "tail_separation", "value_record": value_fact.rec.idx,
         "modulus_record": None if modulus_fact is None else modulus_fact.rec.idx}
    return ses.outcome(VIOLATION, w)


def _separation_bound(value_fact, modulus_fact):
    if modulus_fact is not None:
        return modulus_fact.query.eps
    return dyadic(value_fact.query.n)


def _commit_modulus_and_value(ses, start, mq):
    r1 = ses.ask(start, mq)
    ses.step("answer", r1.answer, [r1])
    r1 = ses.echo(r1)
    ses.step("answer", r1.answer, [r1])
    vq = Query("value", r1.value)
    r2 = ses.ask(r1.answer, vq)
    ses.step("answer", r2.answer, [r2])
    r2 = ses.echo(r2)
    ses.step("answer", r2.answer, [r2])
    # the modulus fact is re-asserted at the latest condition so that both
    # records sit on one chain
    r1b = _reassert(ses, r2.answer, [Fact(mq, r1.value, r1)])
    if r1b is None:
        raise _OutOfBudget()
    ses.step("answer", r1b[0].answer, r1b)
    return Fact(mq, r1.value, r1b[0]), Fact(vq, r2.value, r2)


# -- second theorem: no limit operator on the Cauchy-modulus space -------

def refute_limit(p: CondProd, oracle: StrategyOracle, max_steps: int = DEFAULT_MAX_STEPS,
                 resolution: int = 16, seed: int = 0) -> Outcome:
    """Defeat a purported (modulus, limit) pair for sequences of reals.

    The oracle is first pinned inside the bottom third of the tail, where it
    must commit to a modulus ``N`` for ``1/l`` and a value ``v`` at ``N``.  The
    tail is then pushed (by tail- and component-widening steps that keep both
    commitments) up to a point in the top part, and finally shrunk around it.
    """
    t = p.tail
    if p.is_empty or not t.bounded:
        raise ValueError("need a non-empty condition with a bounded tail")
    length = interval_len(t)
    l = 1
    while Fraction(6, l) >= length:
        l += 1
    eps = Fraction(1, l)
    L = t.lo + 5 * length / 6
    ses = Session(oracle, p, 2, {"seed": seed, "l": l, "target": fmt_q(L), "schedule": "round-robin"},
                  max_steps)
    try:
        p0 = p.with_tail(OpenInterval(t.lo, t.lo + length / 3))
        ses.step("ext", p0)
        mf, vf = _commit_modulus_and_value(ses, p0, Query("modulus", l, eps))
        cur = mf.rec.answer
        facts = [mf, vf]
        if cur.tail.dist(vf.value) > eps:
            return _separation(ses, cur, vf, mf)
        rho = length / 24
        cur, facts = infty_extend_preserving(ses, cur, facts, L, resolution,
                                             OpenInterval(L - rho, L + rho))
        for j in range(p.n, cur.n):
            if L not in cur.comps[j].I:
                cur, facts = j_extend_preserving(ses, cur, facts, j, L, resolution)
        C = cur.with_tail(interval_intersect(cur.tail, OpenInterval(L - rho, L + rho)))
        return _separation(ses, C, facts[1], facts[0])
    except _Found as f:
        return ses.outcome(f.tag, f.witness)
    except _OutOfBudget:
        return ses.outcome(EXHAUSTED, None)


# -- third theorem: canonical conditions, limit with a modulus -----------

def refute_modulus_limit(p: CondProd, oracle: StrategyOracle, max_steps: int = DEFAULT_MAX_STEPS,
                         resolution: int = 16, seed: int = 0) -> Outcome:
    """Defeat a purported limit-with-modulus on the fast-converging space.

    Works only with canonical conditions: every probe is canonical and every
    answer must be.  After the oracle commits to ``N`` for ``eps`` and a value
    ``v`` at ``N``, the tail boundary farther from ``v`` is marched away until
    the tail can be cut to lie more than ``eps`` from ``v``.
    """
    if not (p.conv2n and _canonical(p)) or p.is_empty or not p.tail.bounded:
        raise ValueError("need a canonical condition with a bounded tail")
    t = p.tail
    k = 0
    while dyadic(k) >= interval_len(t) / 2:
        k += 1
    eps = dyadic(k)
    ses = Session(oracle, p, 3, {"seed": seed, "k": k}, max_steps, canonical=True)
    try:
        mf, vf = _commit_modulus_and_value(ses, p, Query("modulus", k, eps))
        cur, facts = mf.rec.answer, [mf, vf]
        v = vf.value
        up = v <= t.midpoint()
        target = v + eps if up else v - eps
        while (cur.tail.hi <= target) if up else (cur.tail.lo >= target):
            near = cur.tail.hi if up else cur.tail.lo
            c0 = cur

            def make_probe(s, c0=c0, near=near):
                b = near + ((t.hi if up else t.lo) - near) * s
                comps = []
                for j, c in enumerate(c0.comps):
                    B = p.comps[j].I if j < p.n else t
                    K = c.I
                    K = OpenInterval(K.lo, max(K.hi, min(B.hi, b))) if up else OpenInterval(min(K.lo, max(B.lo, b)), K.hi)
                    comps.append(CondLine(c.p, K))
                tail = OpenInterval(c0.tail.lo, b) if up else OpenInterval(b, c0.tail.hi)
                probe = CondProd(tuple(comps), tail, True)
                return probe if _canonical(probe) else None

            jump = make_probe(Fraction(1))
            if jump is not None:
                cut = (target + t.hi) / 2 if up else (target + t.lo) / 2
                jt = OpenInterval(cut, t.hi) if up else OpenInterval(t.lo, cut)
                jump = jump.with_tail(jt) if _canonical(jump.with_tail(jt)) else None
            got = _march(ses, cur, facts, make_probe, lambda a, b: boundary_step(a, b, p),
                         lambda a: (a.tail.hi > near) if up else (a.tail.lo < near), resolution, jump)
            if got is None:
                raise _OutOfBudget()
            cur, recs, s = got
            facts = _refresh(facts, recs)
            ses.step("bd", cur, recs, fraction=_fraction(s))
        if up:
            cut = OpenInterval(max(cur.tail.lo, (target + cur.tail.hi) / 2), cur.tail.hi)
        else:
            cut = OpenInterval(cur.tail.lo, min(cur.tail.hi, (target + cur.tail.lo) / 2))
        return _separation(ses, cur.with_tail(cut), facts[1], facts[0])
    except _Found as f:
        return ses.outcome(f.tag, f.witness)
    except _OutOfBudget:
        return ses.outcome(EXHAUSTED, None)


# -- fourth theorem: finitely supported limit operators -------------------

def _prefix_fits(a: CondLine, b: CondLine) -> bool:
    if len(a.p) <= len(b.p):
        return is_prefix(a.p, b.p) and overhang_inside(b.p, a.p, a.I)
    return is_prefix(b.p, a.p) and overhang_inside(a.p, b.p, b.I)


def _rewrite_prefix(a: CondLine, b: CondLine):
    """A prefix of the same length as ``a.p`` that fits with ``b``, or None."""
    if len(a.p) <= len(b.p):
        s = b.p[: len(a.p)]
        return s if overhang_inside(b.p, s, a.I) else None
    return b.p + (b.I.midpoint(),) * (len(a.p) - len(b.p))


def _gap(K: OpenInterval, L: OpenInterval) -> Fraction:
    if not interval_intersect(K, L).empty:
        return Fraction(0)
    return max(L.lo - K.hi, K.lo - L.hi, Fraction(0))


def _toward_hull(K: OpenInterval, L: OpenInterval, s: Fraction) -> OpenInterval:
    lo, hi = min(K.lo, L.lo), max(K.hi, L.hi)
    return OpenInterval(K.lo + (lo - K.lo) * s, K.hi + (hi - K.hi) * s)


def extension_transfer(ses: Session, fact: Fact, r: CondProd, support, resolution: int = 16):
    """Carry the committed value from the oracle's answer over to an extension of
    ``r``, which agrees with that answer on ``support``.

    Components outside the support whose prefixes clash with ``r`` are rewritten
    through a similarity fixing the support, and the oracle is asked again; a
    different value there exposes a dependence outside the declared support.
    Intervals are then moved toward ``r`` by canonical boundary steps.  Returns
    a common extension of the last answer and ``r`` plus the refreshed fact.
    """
    cur = fact.rec.answer
    for j in range(min(cur.n, r.n)):
        if j in support or _prefix_fits(cur.comps[j], r.comps[j]):
            continue
        s = _rewrite_prefix(cur.comps[j], r.comps[j])
        if s is None:
            raise _OutOfBudget()
        moved = cur.with_comp(j, CondLine(s, cur.comps[j].I))
        rec = ses.ask(moved, fact.query)
        if rec.value != fact.value:
            raise _Found(SUPPORT_VIOLATION, {"kind": "support", "records": [fact.rec.idx, rec.idx],
                                             "support": sorted(support)})
        cur = rec.answer
        fact = Fact(fact.query, fact.value, rec)
        ses.step("sim", cur, [rec], component=j)
    while not prod_compat(cur, r):
        c0 = cur

        def targets(c):
            out = {}
            for j in range(c.n):
                if j in support and j < r.n:
                    continue
                out[j] = r.comps[j].I if j < r.n else r.tail
            return out

        def make_probe(s, c0=c0):
            comps = list(c0.comps)
            for j, L in targets(c0).items():
                comps[j] = CondLine(comps[j].p, _toward_hull(comps[j].I, L, s))
            probe = CondProd(tuple(comps), _toward_hull(c0.tail, r.tail, s), c0.conv2n)
            if c0.conv2n and not _canonical(probe):
                return None
            return probe

        def total_gap(c):
            g = _gap(c.tail, r.tail)
            for j, L in targets(c).items():
                g += _gap(c.comps[j].I, L)
            return g

        g0 = total_gap(cur)
        got = _march(ses, cur, [fact], make_probe, lambda a, b: boundary_step(a, b, ses.root),
                     lambda a: total_gap(a) < g0 or prod_compat(a, r), resolution)
        if got is None:
            raise _OutOfBudget()
        cur, recs, s = got
        fact = Fact(fact.query, fact.value, recs[0])
        ses.step("bd", cur, recs, fraction=_fraction(s))
    C = prod_meet(cur, r)
    ses.step("meet", C)
    return C, fact


def _separated_target(root: CondProd, q: CondProd, support, v: Fraction, sep: Fraction):
    """A short tail interval inside the root, more than ``sep`` from ``v``.

    Support components of ``q`` keep their prefixes but may have their
    intervals cut down to end near the new tail's sup, so the sup only needs
    to lie above each such interval's inf and at most ``2^-(k+1)`` above its sup.
    """
    t = root.tail
    free = [root.comps[j].I for j in range(root.n) if j not in support]
    kept = [k for k in support if k < q.n]
    # window for the tail's sup; the tail's inf must stay above ``floor``
    top = min([t.hi] + [I.hi for I in free] + [q.comps[k].I.hi + dyadic(k + 1) for k in kept])
    bottom = max([t.lo] + [q.comps[k].I.lo for k in kept])
    floor = max([t.lo] + [I.lo for I in free])
    if bottom > top:
        return None
    width = sep / 4
    options = []
    above = max(floor, v + sep)
    if above < top:
        options.append(OpenInterval(max((above + top) / 2, top - width), top))
    below = min(top, v - sep)
    if bottom <= below:
        hi = below if below < v - sep else (max(bottom, floor) + below) / 2
        if hi >= bottom and max(floor, hi - width) < hi:
            options.append(OpenInterval(max(floor, hi - width), hi))
    options = [T for T in options if T.dist(v) > sep and T.hi > bottom]
    return max(options, key=lambda T: T.dist(v), default=None)


def refute_finite_support_limit(p: CondProd, oracle: StrategyOracle, n: int = 2,
                                support=None, max_steps: int = DEFAULT_MAX_STEPS,
                                resolution: int = 16, seed: int = 0) -> Outcome:
    """Defeat a limit operator that claims to read only finitely many components.

    The oracle commits, at ``p``, to a value ``v`` within ``2^-n`` of the limit.
    A canonical condition ``r`` is built that agrees with that answer on the
    declared support and puts every other component (and the tail) far from
    ``v``; the commitment is then transferred to a common extension of ``r``.
    """
    if not (p.conv2n and _canonical(p)) or p.is_empty or not p.tail.bounded:
        raise ValueError("need a canonical condition with a bounded tail")
    if support is None:
        support = oracle.declared_support
    if support is None:
        raise ValueError("oracle declares no support; pass one explicitly")
    support = frozenset(support)
    rng = random.Random(seed)
    ses = Session(oracle, p, 4, {"seed": seed, "n": n, "support": sorted(support)}, max_steps,
                  canonical=True)
    try:
        lq = Query("limit", n)
        rec = ses.ask(p, lq)
        ses.step("answer", rec.answer, [rec])
        rec = ses.echo(rec)
        ses.step("answer", rec.answer, [rec])
        q, v = rec.answer, rec.value
        bound = dyadic(n)
        T = _separated_target(p, q, support, v, 2 * bound)
        if T is None:
            return ses.outcome(EXHAUSTED, None)
        n_r = max([p.n, q.n] + [k + 1 for k in support])
        comps = []
        for j in range(n_r):
            if j in support:
                if j < q.n:
                    K = q.comps[j].I
                    comps.append(CondLine(q.comps[j].p, OpenInterval(K.lo, min(K.hi, T.hi))))
                else:
                    comps.append(CondLine((), T))
                continue
            base = p.comps[j].p if j < p.n else ()
            size = len(q.comps[j].p) if j < q.n else len(base) + 1
            extra = tuple(T.lo + (T.hi - T.lo) * Fraction(rng.randint(1, 999), 1000)
                          for _ in range(max(0, size - len(base))))
            comps.append(CondLine(base + extra, T))
        r = CondProd(tuple(comps), T, True)
        if not (prod_extends(r, p) and _canonical(r)):
            return ses.outcome(EXHAUSTED, None)
        ses.params["separated_tail"] = T.to_json()
        ses.params["n_r"] = n_r
        C, fact = extension_transfer(ses, Fact(lq, v, rec), r, support, resolution)
        return ses.outcome(VIOLATION, {"kind": "tail_separation", "value_record": fact.rec.idx,
                                       "modulus_record": None})
    except _Found as f:
        return ses.outcome(f.tag, f.witness)
    except _OutOfBudget:
        return ses.outcome(EXHAUSTED, None)


ENGINES = {1: refute_modulus, 2: refute_limit, 3: refute_modulus_limit, 4: refute_finite_support_limit}


def default_root(theorem: int):
    if theorem == 1:
        return CondLine((), OpenInterval.of(0, 1))
    if theorem == 2:
        return CondProd((), OpenInterval.of(0, 1), False)
    if theorem == 3:
        return CondProd((), OpenInterval.of(0, 1), True)
    return CondProd((), OpenInterval.of(-4, 4), True)
