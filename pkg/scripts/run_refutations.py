#!/usr/bin/env python3
"""Run every built-in refutation over a range of seeds, write the traces and
a CSV summary, and re-check each trace."""
import argparse
import csv
import os
import time

from cauchyforce.checker import check_trace
from cauchyforce.cli import DEMO_RUNS, run_refutation
from cauchyforce.oracles import make_oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", default="runs")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for seed in range(args.seeds):
        for th, name in DEMO_RUNS:
            t0 = time.perf_counter()
            out = run_refutation(th, make_oracle(name), seed=seed)
            dt = time.perf_counter() - t0
            path = os.path.join(args.out, f"t{th}_{name}_s{seed}.json")
            with open(path, "w") as fh:
                fh.write(out.dumps() + "\n")
            rows.append({"theorem": th, "oracle": name, "seed": seed, "outcome": out.tag,
                         "queries": len(out.records), "steps": len(out.steps),
                         "checked": check_trace(out.to_json()).ok, "seconds": f"{dt:.4f}"})
    with open(os.path.join(args.out, "summary.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    bad = [r for r in rows if not r["checked"]]
    print(f"{len(rows)} runs, {len(bad)} failed the checker; summary in {args.out}/summary.csv")


if __name__ == "__main__":
    main()
