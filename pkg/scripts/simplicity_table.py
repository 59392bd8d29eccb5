"""Least certified constant C_i for A_n and for invariant subalgebras."""
import argparse
import random

from holofilt.bernstein import WeightedRingSpec
from holofilt.invariants import named_group
from holofilt.simplicity import bavula_constant, min_constant_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--imax", type=int, default=6)
    ap.add_argument("--cmax", type=int, default=5)
    ap.add_argument("--samples", type=int, default=4, help="random homogeneous deltas per level")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for n, group in [(1, None), (1, "cyclic-sign(1)"), (2, None), (2, "diag-signs(1,1)")]:
        spec = WeightedRingSpec(n)
        G = named_group(group) if group else None
        imax = args.imax if n == 1 else min(args.imax, 3)
        table = min_constant_table(spec, imax, args.cmax, group=G, random_samples=args.samples,
                                   rng=random.Random(args.seed))
        label = f"A_{n}" + (f"^{group}" if group else "")
        cs = [table[i]["C"] for i in range(imax + 1)]
        print(f"{label:22} C_i = {cs}   (closed-form bound {bavula_constant(spec)})")


if __name__ == "__main__":
    main()
