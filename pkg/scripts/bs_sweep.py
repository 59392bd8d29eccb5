"""Solve for b-functions of a few small polynomials at increasing level bounds."""
import argparse
import json

from holofilt.coeff import Poly
from holofilt.dmod import bs_solve
from holofilt.invariants import named_group

CASES = [("x", ["x"], None), ("x^2", ["x"], None), ("x^3", ["x"], None),
         ("x*y", ["x", "y"], None), ("x^2 + y^2", ["x", "y"], None),
         ("x^2", ["x"], "cyclic-sign(1)")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--sdeg", type=int, default=1)
    ap.add_argument("--bdeg", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rows = []
    for text, names, group in CASES:
        f = Poly.from_text(text, names)
        G = named_group(group) if group else None
        for level in args.levels:
            r = bs_solve(f, level, args.sdeg, args.bdeg, group=G)
            rows.append({"f": text, "group": group, "level": level,
                         "b": r.b.to_text() if r else None,
                         "verified": bool(r and r.verified),
                         "seconds": round(r.seconds, 2) if r else None})
            if r:
                break
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    for row in rows:
        tag = f" over {row['group']}" if row["group"] else ""
        print(f"{row['f']}{tag}, level {row['level']}: b = {row['b']}  verified={row['verified']}")


if __name__ == "__main__":
    main()
