#!/usr/bin/env python3
"""A stand-alone oracle speaking the newline-delimited JSON protocol.

Each request line is ``{"query": {"kind", "n", "eps", "cond"}}``; the reply is
``{"cond": <extension of cond>, "value": ...}``.  This one never extends the
condition: it answers a constant index for modulus questions and a constant
rational for value/limit questions.

    cauchyforce refute --theorem 1 --oracle-cmd "python3 scripts/example_oracle.py"
    cauchyforce refute --theorem 4 --support "" --oracle-cmd "python3 scripts/example_oracle.py --value 1/5"
"""
import argparse
import json
import sys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--index", type=int, default=5)
    ap.add_argument("--value", default="1/3")
    args = ap.parse_args()
    for line in sys.stdin:
        if not line.strip():
            continue
        q = json.loads(line)["query"]
        value = args.index if q["kind"] == "modulus" else args.value
        sys.stdout.write(json.dumps({"cond": q["cond"], "value": value}) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
