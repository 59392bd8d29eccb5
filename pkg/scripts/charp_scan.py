"""F-splitting scans over the built-in prime characteristic fixtures."""
import argparse

from holofilt.charp import (agrees_with_brute_force, containment_checks, f_regularity_scan,
                            ffrt_class_sets, named_ring)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--emax", type=int, default=3)
    ap.add_argument("--slow", action="store_true", help="include the 8-variable fixture")
    args = ap.parse_args()

    rings = ["xy-hypersurface-p2", "poly-ring-p2", "quadric-p3", "cusp-p5"]
    if args.slow:
        rings.append("eg62-p2")
    for name in rings:
        pres = named_ring(name)
        rep = f_regularity_scan(pres, args.emax if name != "eg62-p2" else 1)
        counts = [l["generator_count"] for l in rep.levels]
        line = f"{name:20} {rep.verdict}; generators per level {counts}"
        if pres.p == 2:
            line += f"; brute force e=1 agrees: {agrees_with_brute_force(pres)}"
        print(line)

    for p in (2, 3):
        c = containment_checks(p, 8, 2, 2)
        print(f"level containments p={p}: {c['passed']} "
              f"({c['checked_order_in_level']} + {c['checked_level_in_order']} operators)")
    print("Veronese n=2 r=2 p=3 FFRT class sets:", ffrt_class_sets(2, 2, 3, 2))


if __name__ == "__main__":
    main()
