#!/usr/bin/env python3
"""Run the three completion constructions on random geometric families and
report the worst observed distance to the known limit, scaled by 2^n."""
import argparse
import random
from fractions import Fraction

from cauchyforce.completion import CONSTRUCTIONS, geometric_family, run_construction
from cauchyforce.sequences import SeqModPair


def random_family(rng):
    limit = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
    spread = Fraction(rng.randint(1, 24), 4)  # |L_j - L| <= 3 * 2^-j keeps the diagonal within 2^-n+2
    scale = Fraction(rng.choice([-1, 1]) * rng.randint(1, 8), rng.randint(1, 8))
    ratio = Fraction(1, rng.randint(2, 5))
    signs = (lambda j: 1) if rng.random() < 0.5 else (lambda j: -1 if j % 2 else 1)
    return geometric_family(limit, spread, scale, ratio, signs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--families", type=int, default=64)
    ap.add_argument("--depth", type=int, default=24)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    families = [random_family(rng) for _ in range(args.families)]
    for name in CONSTRUCTIONS:
        worst = Fraction(0)
        for S in families:
            res = run_construction(name, S)
            y = res.seq if isinstance(res, SeqModPair) else res
            for n in range(args.depth + 1):
                worst = max(worst, abs(y(n) - S.known_limit) * 2 ** n)
        print(f"{name:10s} max_n |y(n) - L| * 2^n = {float(worst):.4f}")


if __name__ == "__main__":
    main()
