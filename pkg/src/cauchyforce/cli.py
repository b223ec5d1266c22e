"""Command-line front end: ``refute``, ``complete``, ``check``, ``demo``, ``selftest``.

Machine-readable JSON goes to ``--output`` (stdout by default); a short
human-readable summary goes to stderr.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass
from typing import Optional

from . import adversary, checker, completion
from .exact import fmt_q
from .oracles import ORACLES, OracleSpawnError, SubprocessOracle, cond_from_json, make_oracle
from .sequences import SearchCapExceeded, SeqModPair, fixture_from_json

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_EXHAUSTED = 2
EXIT_CONTRACT = 3
EXIT_USAGE = 64
EXIT_SPAWN = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass
class RunConfig:
    command: str
    space: str = "line"
    oracle: Optional[str] = None
    seed: int = 0
    max_steps: int = adversary.DEFAULT_MAX_STEPS
    output: Optional[str] = None


SPACES = {1: "line", 2: "product", 3: "product-conv2n", 4: "product-conv2n"}


def _emit(text: str, output: Optional[str]):
    if output and output != "-":
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _parse_support(s):
    if s is None:
        return None
    s = s.strip()
    try:
        return frozenset(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad --support {s!r}; expected comma-separated integers") from None


def _resolve_oracle(args, support):
    if args.oracle_cmd:
        return SubprocessOracle(shlex.split(args.oracle_cmd), support)
    if not args.oracle:
        raise UsageError("one of --oracle or --oracle-cmd is required")
    try:
        return make_oracle(args.oracle)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def run_refutation(theorem, oracle, root=None, seed=0, max_steps=adversary.DEFAULT_MAX_STEPS,
                   support=None, n=None):
    root = root if root is not None else adversary.default_root(theorem)
    kw = {"seed": seed, "max_steps": max_steps}
    if theorem == 1 and n is not None:
        kw["n"] = n
    if theorem == 4:
        kw["support"] = support
        if n is not None:
            kw["n"] = n
    return adversary.ENGINES[theorem](root, oracle, **kw)


def cmd_refute(args) -> int:
    cfg = RunConfig("refute", SPACES[args.theorem], args.oracle or args.oracle_cmd, args.seed,
                    args.max_steps, args.output)
    support = _parse_support(args.support)
    root = None
    if args.root:
        try:
            root = cond_from_json(json.loads(args.root))
        except (ValueError, KeyError, TypeError) as e:
            raise UsageError(f"bad --root: {e}") from None
    try:
        oracle = _resolve_oracle(args, support)
    except OracleSpawnError as e:
        print(f"cannot start oracle: {e}", file=sys.stderr)
        return EXIT_SPAWN
    try:
        out = run_refutation(args.theorem, oracle, root, cfg.seed, cfg.max_steps, support, args.n)
    except adversary.OracleContractViolation as e:
        if e.outcome is not None:
            _emit(e.outcome.dumps(), cfg.output)
        print(f"oracle contract violation: {e}", file=sys.stderr)
        return EXIT_CONTRACT
    except OracleSpawnError as e:
        print(f"oracle failed: {e}", file=sys.stderr)
        return EXIT_SPAWN
    except ValueError as e:
        raise UsageError(str(e)) from None
    finally:
        oracle.close()
    _emit(out.dumps(), cfg.output)
    print(f"theorem {args.theorem} vs {oracle.name}: {out.tag} after {len(out.records)} queries, "
          f"{len(out.steps)} steps", file=sys.stderr)
    return EXIT_EXHAUSTED if out.tag == adversary.EXHAUSTED else EXIT_OK


def outer_from_json(d: dict) -> completion.OuterSeq:
    fam = d.get("family")
    if fam == "geometric":
        return completion.geometric_family(d["limit"], d.get("spread", 1), d.get("scale", 1),
                                           d.get("ratio", "1/2"))
    if fam == "constant-embed":
        return completion.embed_constant(fixture_from_json(d["seq"]))
    raise ValueError(f"unknown family {fam!r}")


def cmd_complete(args) -> int:
    try:
        with open(args.fixture) as fh:
            fixture = json.load(fh)
        S = outer_from_json(fixture)
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad fixture: {e}") from None
    res = completion.run_construction(args.construction, S)
    seq = res.seq if isinstance(res, SeqModPair) else res
    try:
        doc = {"construction": args.construction, "terms": [fmt_q(seq(n)) for n in range(args.terms + 1)]}
        if isinstance(res, SeqModPair):
            doc["modulus"] = [res.mod(k) for k in range(args.terms + 1)]
    except SearchCapExceeded as e:
        print(f"search cap exceeded: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    if S.known_limit is not None:
        doc["known_limit"] = fmt_q(S.known_limit)
    _emit(json.dumps(doc, sort_keys=True), args.output)
    print(f"{args.construction}: {args.terms + 1} terms", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        with open(args.trace) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as e:
        raise UsageError(f"cannot read trace: {e}") from None
    if not isinstance(doc, dict):
        raise UsageError("trace is not a JSON object")
    try:
        res = checker.check_witness(doc)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if res.ok:
        print(f"valid: {doc['outcome']['tag']}", file=sys.stderr)
        return EXIT_OK
    print(f"invalid at {res.where}: {res.reason}", file=sys.stderr)
    return EXIT_VERIFY


DEMO_RUNS = [
    (1, "interval-halving"), (1, "length-echo"), (1, "stubborn-constant"), (1, "center-shrink"),
    (1, "flip-flop"), (2, "const-limit"), (2, "comp0-echo"), (2, "half-clip"), (2, "stonewall"),
    (3, "const-limit"), (3, "half-clip"), (4, "const-limit"), (4, "comp0-echo"), (4, "support-cheat"),
]


def demo_traces(seed=0):
    return [run_refutation(th, make_oracle(name), seed=seed) for th, name in DEMO_RUNS]


def cmd_demo(args) -> int:
    rows = []
    for (th, name), out in zip(DEMO_RUNS, demo_traces(args.seed)):
        ok = checker.check_trace(out.to_json()).ok
        rows.append({"theorem": th, "oracle": name, "outcome": out.tag, "queries": len(out.records),
                     "checked": ok})
        print(f"theorem {th}  {name:18s} {out.tag:24s} queries={len(out.records):4d} checked={ok}",
              file=sys.stderr)
    _emit(json.dumps(rows, sort_keys=True, indent=1), args.output)
    return EXIT_OK if all(r["checked"] for r in rows) else EXIT_VERIFY


def cmd_selftest(args) -> int:
    docs = [out.to_json() for out in demo_traces(args.seed)]
    bad = [i for i, d in enumerate(docs) if not checker.check_trace(d).ok]
    mutants = checker.mutation_suite(docs, args.mutants)
    accepted = [name for name, d in mutants if checker.check_trace(d).ok]
    for name, d in mutants:
        r = checker.check_trace(d)
        print(f"{name:40s} rejected at {r.where}: {r.reason}" if not r.ok else f"{name:40s} ACCEPTED",
              file=sys.stderr)
    print(f"{len(docs) - len(bad)}/{len(docs)} genuine traces valid; "
          f"{len(mutants) - len(accepted)}/{len(mutants)} mutants rejected", file=sys.stderr)
    return EXIT_OK if not bad and not accepted and len(mutants) >= args.mutants else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cauchyforce", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("refute", help="run a refutation engine against an oracle")
    r.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), required=True)
    r.add_argument("--oracle", help="built-in oracle: " + ", ".join(sorted(ORACLES)))
    r.add_argument("--oracle-cmd", help="command line of a subprocess oracle")
    r.add_argument("--support", help="declared support, e.g. '0,2' ('' for none)")
    r.add_argument("--root", help="starting condition as JSON")
    r.add_argument("--n", type=int, help="precision index for the question asked")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-steps", type=int, default=adversary.DEFAULT_MAX_STEPS)
    r.add_argument("--output", "-o")
    r.set_defaults(func=cmd_refute)

    c = sub.add_parser("complete", help="run a completion construction on a fixture family")
    c.add_argument("--fixture", required=True)
    c.add_argument("--construction", choices=completion.CONSTRUCTIONS, default="pairs+mod")
    c.add_argument("--terms", type=int, default=16)
    c.add_argument("--output", "-o")
    c.set_defaults(func=cmd_complete)

    k = sub.add_parser("check", help="re-validate a trace")
    k.add_argument("trace")
    k.set_defaults(func=cmd_check)

    d = sub.add_parser("demo", help="run every built-in refutation and check it")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--output", "-o")
    d.set_defaults(func=cmd_demo)

    s = sub.add_parser("selftest", help="checker against genuine and corrupted traces")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mutants", type=int, default=50)
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
