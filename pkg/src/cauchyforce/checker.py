"""Independent re-validation of refutation traces.

Works on the JSON form of a trace and uses nothing but the exact-arithmetic
layer and the condition predicates: every recorded answer must extend its
query, every chain step must satisfy the relation it is tagged with, and the
final witness must exhibit the contradiction it claims.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .exact import Q, fmt_q, is_prefix
from .line import CondLine, cond_compat, cond_extends
from .oracles import Query, cond_from_json, value_from_json
from .product import CondProd, is_canonical, prod_compat, prod_extends, similar_J, step_ok
from .sequences import dyadic


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    where: str = ""
    reason: str = ""

    def __bool__(self):
        return self.ok


class _Reject(Exception):
    def __init__(self, where, reason):
        self.where, self.reason = where, reason


def _extends(a, b):
    if type(a) is not type(b):
        return False
    return prod_extends(a, b) if isinstance(a, CondProd) else cond_extends(a, b)


def _compat(a, b):
    return prod_compat(a, b) if isinstance(a, CondProd) else cond_compat(a, b)


def _canonical(c):
    try:
        return is_canonical(c)
    except ValueError:
        return False


def _need(cond, where, reason):
    if not cond:
        raise _Reject(where, reason)


@dataclass
class _Rec:
    query_cond: object
    query: Query
    answer: object
    value: object


def _load_records(doc, root, canonical):
    recs = []
    for i, d in enumerate(doc["records"]):
        where = f"record {i}"
        _need(d.get("idx") == i, where, "records out of order")
        query = Query.from_json(d["query"])
        r = _Rec(cond_from_json(d["query_cond"]), query, cond_from_json(d["answer"]),
                 value_from_json(d["value"], query))
        _need(_extends(r.query_cond, root), where, "queried condition does not extend the root")
        _need(_extends(r.answer, r.query_cond), where, "answer does not extend the queried condition")
        _need(not r.answer.is_empty, where, "answer is empty")
        if canonical:
            _need(_canonical(r.answer), where, "answer is not canonical")
        recs.append(r)
    return recs


def _boundary(new, old, root):
    return (new.n >= old.n and prod_extends(new, root)
            and all(is_prefix(old.comps[j].p, new.comps[j].p) for j in range(old.n)))


def _check_steps(doc, root, recs, support):
    prev = root
    conds = []
    for i, d in enumerate(doc["steps"]):
        where = f"step {i}"
        tag = d["tag"]
        tag = tuple(tag) if isinstance(tag, list) else tag
        cond = cond_from_json(d["cond"])
        ids = d.get("records", [])
        _need(all(0 <= k < len(recs) for k in ids), where, "unknown record")
        srecs = [recs[k] for k in ids]
        _need(_extends(cond, root), where, "condition does not extend the root")
        for r in srecs:
            _need(_extends(cond, r.answer), where, "condition does not extend a cited answer")
        if tag == "answer":
            _need(len(srecs) >= 1 and cond == srecs[-1].answer, where, "not the cited answer")
        elif tag == "ext":
            _need(_extends(cond, prev), where, "not an extension of the previous condition")
        elif tag == "meet":
            _need(_extends(cond, prev), where, "meet does not extend the previous condition")
        elif tag == "probe":
            _need(isinstance(cond, CondLine) and len(srecs) == 1, where, "malformed probe step")
            _need(is_prefix(prev.p, cond.p), where, "committed prefix was not kept")
        elif tag == "inf" or (isinstance(tag, tuple) and tag[0] == "j"):
            _need(len(srecs) >= 1 and cond == srecs[-1].answer, where, "not the cited answer")
            try:
                ok = step_ok(tag, cond, prev)
            except ValueError:
                ok = False
            _need(ok, where, f"not a {tag} step")
        elif tag == "bd":
            _need(len(srecs) >= 1 and cond == srecs[-1].answer, where, "not the cited answer")
            _need(_boundary(cond, prev, root), where, "boundary step lost a committed prefix")
        elif tag == "sim":
            _need(len(srecs) == 1 and cond == srecs[0].answer, where, "not the cited answer")
            _need(similar_J(prev, srecs[0].query_cond, support), where,
                  "rewritten query is not similar fixing the support")
        else:
            raise _Reject(where, f"unknown step tag {tag!r}")
        _check_progress(d.get("info", {}), tag, cond, prev, where)
        conds.append(cond)
        prev = cond
    return conds


def _check_progress(info, tag, cond, prev, where):
    """Marching steps must move the boundary they claim to move."""
    if tag == "probe" and "dir" in info:
        moved = cond.I.hi > prev.I.hi if info["dir"] > 0 else cond.I.lo < prev.I.lo
        _need(moved, where, "probe step made no progress")
    elif "target" in info and (tag == "inf" or isinstance(tag, tuple)):
        x = Q(info["target"])
        before = prev.tail if tag == "inf" else prev.comps[tag[1]].I
        after = cond.tail if tag == "inf" else cond.comps[tag[1]].I
        moved = after.hi > before.hi if x >= before.hi else after.lo < before.lo
        _need(moved, where, "marching step made no progress toward its target")


def _same_query(a: Query, b: Query):
    return a.kind == b.kind and a.n == b.n and a.eps == b.eps


def _check_witness(doc, recs, conds, support):
    out = doc["outcome"]
    tag, w = out["tag"], out["witness"]
    where = "witness"
    if tag == "Exhausted":
        _need(w is None, where, "an exhausted run carries no witness")
        return
    _need(isinstance(w, dict), where, "missing witness")
    kind = w.get("kind")
    ids = [k for k in (w.get("records") or []) + [w.get("record"), w.get("value_record"), w.get("modulus_record")]
           if k is not None]
    _need(all(isinstance(k, int) and 0 <= k < len(recs) for k in ids), where, "unknown record")
    if kind == "two_entries":
        _need(tag == "Violation" and conds, where, "tag/kind mismatch")
        r = recs[w["record"]]
        C = conds[-1]
        _need(r.query.kind == "modulus" and r.query.eps == Fraction(1, r.query.n), where, "not a modulus claim")
        _need(_extends(C, r.answer), where, "final condition does not extend the answer")
        i, j = w["positions"]
        _need(i != j and min(i, j) >= r.value and max(i, j) < len(C.p), where, "positions not past the claimed index")
        _need(abs(C.p[i] - C.p[j]) > r.query.eps, where, "entries are not far enough apart")
    elif kind == "tail_separation":
        _need(tag == "Violation" and conds, where, "tag/kind mismatch")
        C = conds[-1]
        v = recs[w["value_record"]]
        _need(_extends(C, v.answer), where, "final condition does not extend the value answer")
        if w.get("modulus_record") is not None:
            m = recs[w["modulus_record"]]
            _need(m.query.kind == "modulus" and v.query.kind == "value", where, "wrong query kinds")
            _need(v.query.n >= m.value, where, "value index is before the claimed modulus")
            _need(_extends(C, m.answer), where, "final condition does not extend the modulus answer")
            bound = m.query.eps
        else:
            _need(v.query.kind == "limit", where, "wrong query kind")
            bound = dyadic(v.query.n)
        _need(C.tail.dist(v.value) > bound, where, "committed value is not separated from the tail")
    elif kind == "inconsistency":
        _need(tag in ("InconsistencyWitness", "LimitContradiction"), where, "tag/kind mismatch")
        a, b = (recs[k] for k in w["records"])
        _need(_same_query(a.query, b.query), where, "different questions")
        _need(a.value != b.value, where, "answers agree")
        _need(_compat(a.answer, b.answer), where, "answers are incompatible")
    elif kind == "support":
        _need(tag == "SupportViolationWitness", where, "tag/kind mismatch")
        _need(frozenset(w.get("support", [])) == support, where, "support differs from the declared one")
        a, b = (recs[k] for k in w["records"])
        _need(_same_query(a.query, b.query), where, "different questions")
        _need(a.value != b.value, where, "answers agree")
        _need(isinstance(a.answer, CondProd) and similar_J(a.answer, b.query_cond, support), where,
              "second query is not a support-fixing rewrite of the first answer")
    else:
        raise _Reject(where, f"unknown witness kind {kind!r}")


def check_witness(doc) -> CheckResult:
    """Validate a trace that claims a witness; exhausted runs have none."""
    if not isinstance(doc, dict):
        doc = doc.to_json()
    if doc.get("outcome", {}).get("tag") == "Exhausted":
        raise ValueError("an exhausted run carries no witness to check")
    return check_trace(doc)


def check_trace(doc: dict) -> CheckResult:
    """Validate records, chain and (if any) witness of a trace."""
    try:
        header = doc["header"]
        root = cond_from_json(doc["root"])
        canonical = header.get("theorem") in (3, 4)
        support = frozenset(header.get("support", []))
        recs = _load_records(doc, root, canonical)
        conds = _check_steps(doc, root, recs, support)
        _check_witness(doc, recs, conds, support)
    except _Reject as r:
        return CheckResult(False, r.where, r.reason)
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError) as e:
        return CheckResult(False, "parse", f"{type(e).__name__}: {e}")
    return CheckResult(True)


# -- mutation suite ------------------------------------------------------

def _shift(x: str, by: Fraction) -> str:
    return fmt_q(Q(x) + by)


def _mutants(doc) -> List[Tuple[str, dict]]:
    """Semantic corruptions of one trace that a sound checker must reject."""
    out = []
    w = doc["outcome"]["witness"] or {}
    kind = w.get("kind")
    steps = doc["steps"]

    def mut(name, f):
        d = copy.deepcopy(doc)
        if f(d) is not False:
            out.append((name, d))

    if kind == "two_entries":
        def collapse(d):
            C = d["steps"][-1]["cond"]
            i, j = d["outcome"]["witness"]["positions"]
            C["p"][j] = C["p"][i]
        mut("collapse-entries", collapse)

        def early(d):
            r = d["records"][d["outcome"]["witness"]["record"]]
            d["outcome"]["witness"]["positions"][0] = r["value"] - 1
        mut("position-before-index", early)

        def bump_index(d):
            r = d["records"][d["outcome"]["witness"]["record"]]
            r["value"] = max(d["outcome"]["witness"]["positions"]) + 1
        mut("index-past-entries", bump_index)

        def widen(d):
            r = d["records"][d["outcome"]["witness"]["record"]]
            r["answer"]["I"]["lo"] = _shift(r["query_cond"]["I"]["lo"], Fraction(-1))
        mut("answer-not-extension", widen)

        for k in range(1, len(steps) - 1):
            if steps[k]["cond"]["p"]:
                def nudge(d, k=k):
                    p = d["steps"][k]["cond"]["p"]
                    p[-1] = _shift(p[-1], Fraction(1, 10 ** 9))
                mut(f"nudge-step-{k}", nudge)
                break
    if kind == "tail_separation":
        def cover(d):
            v = d["records"][d["outcome"]["witness"]["value_record"]]["value"]
            t = d["steps"][-1]["cond"]["tail"]
            t["lo"], t["hi"] = _shift(v, Fraction(-1, 10 ** 6)), _shift(v, Fraction(1, 10 ** 6))
        mut("tail-covers-value", cover)

        def revalue(d):
            rec = d["records"][d["outcome"]["witness"]["value_record"]]
            t = d["steps"][-1]["cond"]["tail"]
            rec["value"] = fmt_q((Q(t["lo"]) + Q(t["hi"])) / 2)
        mut("value-inside-tail", revalue)

        def escape(d):
            d["steps"][-1]["cond"]["tail"]["hi"] = _shift(d["root"]["tail"]["hi"], Fraction(1))
        mut("tail-escapes-root", escape)

        def wrong_kind(d):
            d["records"][d["outcome"]["witness"]["value_record"]]["query"]["kind"] = "modulus"
        mut("wrong-query-kind", wrong_kind)
    if kind == "inconsistency":
        def agree(d):
            a, b = d["outcome"]["witness"]["records"]
            d["records"][b]["value"] = d["records"][a]["value"]
        mut("answers-agree", agree)

        def other_q(d):
            b = d["outcome"]["witness"]["records"][1]
            d["records"][b]["query"]["n"] += 1
        mut("different-question", other_q)
    if kind == "support":
        def grow(d):
            d["outcome"]["witness"]["support"] = [0, 1]
            d["header"]["support"] = [0, 1]
        mut("support-grows", grow)

        def agree(d):
            a, b = d["outcome"]["witness"]["records"]
            d["records"][b]["value"] = d["records"][a]["value"]
        mut("answers-agree", agree)
    return out


def mutation_suite(docs, size: int = 50) -> List[Tuple[str, dict]]:
    """At least ``size`` mutants drawn round-robin from the given traces."""
    pools = [_mutants(d) for d in docs]
    out = []
    depth = 0
    while len(out) < size and any(depth < len(p) for p in pools):
        for k, pool in enumerate(pools):
            if depth < len(pool):
                name, d = pool[depth]
                out.append((f"trace{k}:{name}", d))
        depth += 1
    return out
