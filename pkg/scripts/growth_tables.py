"""Dimension tables and growth fits for Bernstein filtrations and for R, R_f."""
import argparse

from holofilt.bernstein import WeightedRingSpec, bf_dim_sequence
from holofilt.coeff import Poly
from holofilt.dmod import holonomic_growth_report
from holofilt.filtration import dim_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--imax", type=int, default=60)
    ap.add_argument("--window", type=int, default=24)
    args = ap.parse_args()

    print("n  weights  slope  degree  multiplicity  stable")
    for n, w, a in [(1, (1,), 2), (1, (1,), 3), (2, (1, 1), 2), (2, (1, 2), 3), (3, (1, 1, 1), 2)]:
        spec = WeightedRingSpec(n, weights=w, slope=a)
        est = dim_estimate(bf_dim_sequence(spec, args.imax), args.window)
        print(f"{n}  {w!s:8} {a:5}  {est.degree!s:6}  {est.multiplicity!s:12}  {est.stable}")

    print()
    for f in ["x1", "x1^2", "x1*x2"]:
        poly = Poly.from_text(f)
        spec = WeightedRingSpec(poly.nvars)
        rep = holonomic_growth_report("R_f", spec, 20, f=poly)
        e = rep["estimate"]
        print(f"R_f, f = {f}: dims {rep['dims'][:6]}... degree {e['degree']} multiplicity {e['multiplicity']}")


if __name__ == "__main__":
    main()
