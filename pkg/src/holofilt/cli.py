"""Command line front door.  Exit codes: 0 ok, 1 verification failure, 2 usage error."""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .coeff import Poly, Q, check_prime, infer_names
from .weyl import WeylOperator


class UsageError(Exception):
    def __init__(self, path, msg):
        super().__init__(f"{path}: {msg}")
        self.path = path


@dataclass
class JobSpec:
    command: str
    action: str
    ring: dict = field(default_factory=dict)
    group: str | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "json"


def _guard(path, fn, *args):
    try:
        return fn(*args)
    except UsageError:
        raise
    except (ValueError, ZeroDivisionError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(path, str(exc)) from None


def _names(args, text):
    if getattr(args, "vars", None):
        return [v.strip() for v in args.vars.split(",") if v.strip()]
    return infer_names(text) or ["x"]


def _poly(args, text, path, p=None):
    return _guard(path, lambda: Poly.from_text(text, _names(args, text), p=p))


def _op(text, n, names, path):
    return _guard(path, lambda: WeylOperator.from_text(text, n, names))


def _spec(args):
    from .bernstein import WeightedRingSpec
    n = args.n
    w = tuple(int(v) for v in str(args.weights).split(",")) if args.weights else None
    return _guard("ring", lambda: WeightedRingSpec(n, w, Q(args.slope)))


def _group(args, n):
    if not getattr(args, "group", None):
        return None
    from .invariants import group_from_json, named_group
    text = args.group.strip()
    G = _guard("group", lambda: group_from_json(text) if text.startswith("[") else named_group(text))
    if G.n != n:
        raise UsageError("group", f"group acts on {G.n} variables, ring has {n}")
    return G


# ---------------------------------------------------------------------------


def job_weyl(args, job):
    from .weyl import apply, bracket_chain, weyl_mul
    n = args.n
    names = [v.strip() for v in args.vars.split(",")] if args.vars else None
    a = _op(args.a, n, names, "params.a")
    if args.action == "mul":
        b = _op(args.b, n, names, "params.b")
        return {"product": weyl_mul(a, b).to_text(names)}, True
    f = Poly.from_text(args.f, names or [f"x{k + 1}" for k in range(n)]) if args.f else None
    if f is None:
        raise UsageError("params.f", "required")
    if args.action == "apply":
        return {"image": apply(a, f).to_text(names)}, True
    return {"bracket": bracket_chain(a, f, args.i).to_text(names), "i": args.i}, True


def job_bf(args, job):
    from .bernstein import bf_basis, bf_dim_sequence, eps_and_order_domination, slope_witness
    from .filtration import dim_estimate
    spec = _spec(args)
    job.ring = spec.describe()
    if args.action == "dim":
        seq = bf_dim_sequence(spec, args.imax)
        res = {"dims": seq.values, "csv": seq.to_csv()}
        if args.window:
            res["estimate"] = dim_estimate(seq, args.window).to_dict()
        return res, True
    if args.action == "basis":
        lev = bf_basis(spec, args.i)
        return {"i": args.i, "dim": lev.dim,
                "basis": [WeylOperator({k: 1}, spec.n).to_text() for k in lev.keys]}, True
    if args.action == "order":
        r = eps_and_order_domination(spec, args.imax)
        return {k: str(v) if k == "epsilon" else v for k, v in r.items()}, r["verified"]
    other = spec.with_slope(Q(args.slope2))
    r = slope_witness(spec, other, args.imax)
    return r, r["certified"]


def job_filtration(args, job):
    from .filtration import DimSequence, dim_estimate, length_bound
    if args.action == "estimate":
        try:
            with open(args.input) as fh:
                seq = DimSequence.from_csv(fh.read())
        except OSError as exc:
            raise UsageError("params.input", str(exc)) from None
        est = _guard("params.window", dim_estimate, seq, args.window)
        return {"estimate": est.to_dict(), "entries": len(seq)}, True
    if args.action == "length":
        val = _guard("params", length_bound, args.eG, args.eF, args.C, args.theta)
        return {"length_bound": str(val)}, True
    # bernstein: growth of R and R_f against the algebra filtration
    from .bernstein import WeightedRingSpec, bf_dim_sequence
    from .dmod import holonomic_growth_report
    from .filtration import bernstein_check
    spec = _guard("ring", lambda: WeightedRingSpec(args.n, None, Q(args.slope)))
    job.ring = spec.describe()
    window = args.window
    alg = bf_dim_sequence(spec, args.imax)
    f = _poly(args, args.f, "params.f") if args.f else Poly.var(0, args.n)
    rep_r = holonomic_growth_report("R", spec, args.imax, window=window)
    rep_f = holonomic_growth_report("R_f", spec, args.imax, f=f, window=window)
    check_r = bernstein_check(alg, rep_r["dims"], window)
    check_f = bernstein_check(alg, rep_f["dims"], window)
    ok = bool(check_r["verdict"]) and bool(check_f["verdict"])
    return {"R": rep_r, "R_f": rep_f, "check_R": check_r, "check_R_f": check_f}, ok


def job_invariants(args, job):
    from .bernstein import WeightedRingSpec
    from .invariants import diff_signature_estimate, invariant_bf_basis, pseudoreflections
    spec = _guard("ring", lambda: WeightedRingSpec(args.n, None, Q(args.slope)))
    job.ring = spec.describe()
    G = _group(args, args.n)
    if G is None:
        from .invariants import trivial_group
        G = trivial_group(args.n)
    if args.action == "basis":
        sp = invariant_bf_basis(G, spec, args.i)
        return {"order": G.order, "pseudoreflections": len(pseudoreflections(G)), "i": args.i,
                "dim": sp.dim, "basis": [b.to_text() for b in sp.basis]}, True
    est = diff_signature_estimate(G, spec, args.imax)
    ok = all(d > 0 for d in est["dims"][1:])
    return est, ok


def job_simplicity(args, job):
    from .bernstein import WeightedRingSpec
    from .simplicity import membership_certificate, min_constant_table, reduce_to_unit
    spec = _guard("ring", lambda: WeightedRingSpec(args.n, None, Q(args.slope)))
    job.ring = spec.describe()
    G = _group(args, args.n)
    if args.action == "certify":
        delta = _op(args.op, args.n, None, "params.op")
        out = {}
        if G is None:
            red = _guard("params.op", reduce_to_unit, delta, spec)
            out["reduction"] = red.to_dict()
        cert = _guard("params.op", membership_certificate, delta, args.i, args.C, spec, G)
        out["membership"] = None if cert is None else cert.to_dict()
        ok = cert is not None and cert.verified and out.get("reduction", {"verified": True})["verified"]
        return out, ok
    rng = random.Random(job.seed)
    table = min_constant_table(spec, args.imax, args.cmax, G, args.samples, rng)
    ok = all(row["C"] is not None for row in table.values())
    return {"table": {str(i): row for i, row in table.items()}}, ok


def job_bs(args, job):
    from .dmod import bs_solve
    f = _poly(args, args.f, "params.f")
    names = _names(args, args.f)
    G = _group(args, f.nvars)
    res = _guard("params", bs_solve, f, args.level, args.sdeg, args.bdeg, G)
    if res is None:
        return {"found": False, "search_bounds": {"level": args.level, "s_degree": args.sdeg,
                                                  "b_degree_max": args.bdeg}}, True
    out = res.to_dict(names)
    out["found"] = True
    return out, res.verified


def job_dmod(args, job):
    from .bernstein import WeightedRingSpec
    from .dmod import LocalizedElement, holonomic_growth_report, localize_act, localize_act_closed
    if args.action == "act":
        f = _poly(args, args.f, "params.f")
        names = _names(args, args.f)
        num = _guard("params.num", lambda: Poly.from_text(args.num, names))
        delta = _op(args.op, f.nvars, names, "params.op")
        v = LocalizedElement(num, args.t, f)
        img = localize_act(delta, v)
        ok = img == localize_act_closed(delta, v)
        return {"image": img.to_text(names), "closed_form_agrees": ok}, ok
    spec = _guard("ring", lambda: WeightedRingSpec(args.n, None, Q(args.slope)))
    job.ring = spec.describe()
    f = _poly(args, args.f, "params.f") if args.f else None
    rep = _guard("params", holonomic_growth_report, args.module, spec, args.imax, f, None, args.window)
    return rep, True


def job_charp(args, job):
    from . import charp
    if args.action == "split":
        text = args.ring.strip()
        pres = _guard("ring", lambda: charp.Presentation.from_dict(json.loads(text))
                      if text.startswith("{") else charp.named_ring(text))
        job.ring = pres.to_dict()
        rep = charp.f_regularity_scan(pres, args.emax)
        out = rep.to_dict()
        if args.brute and pres.p == 2:
            out["brute_force_e1_agrees"] = charp.agrees_with_brute_force(pres, 1)
            return out, rep.chain_verified and out["brute_force_e1_agrees"]
        return out, rep.chain_verified
    if args.action == "ffrt":
        _guard("params.p", check_prime, args.p)
        out = charp.veronese_ffrt(args.n, args.r, args.p, args.e)
        out["classes"] = {str(k): v for k, v in out["classes"].items()}
        out["module_multiplicities"] = {str(k): v for k, v in out["module_multiplicities"].items()}
        return out, out["total"] == out["expected_total"]
    if args.action == "containment":
        rep = charp.containment_checks(args.p, args.imax, args.nmax, args.emax)
        rep["failures"] = [list(map(str, f)) for f in rep["failures"]]
        return rep, rep["passed"]
    _guard("params.p", check_prime, args.p)
    op = _guard("params.op", charp.DividedPowerOperator.from_text, args.op, args.n, args.p)
    try:
        lev = charp.level_of(op)
    except ArithmeticError as exc:
        return {"op": op.to_text(), "error": str(exc)}, False
    return {"op": op.to_text(), "level": lev, "order": op.order(),
            "beta_bound": charp.level_by_beta(op)}, True


JOBS = {"weyl": job_weyl, "bf": job_bf, "filtration": job_filtration, "invariants": job_invariants,
        "simplicity": job_simplicity, "bs": job_bs, "dmod": job_dmod, "charp": job_charp}


def _ring_args(p, slope=True, weights=False):
    p.add_argument("--n", type=int, default=1)
    if weights:
        p.add_argument("--weights", default=None)
    if slope:
        p.add_argument("--slope", default="2")


def build_parser():
    ap = argparse.ArgumentParser(prog="holofilt", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--vars", default=None, help="comma separated variable names")
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weyl").add_subparsers(dest="action", required=True)
    for name in ("mul", "apply", "bracket"):
        q = w.add_parser(name, parents=[common])
        q.add_argument("--n", type=int, default=1)
        q.add_argument("--a", required=True)
        q.add_argument("--b", default="1")
        q.add_argument("--f", default=None)
        q.add_argument("--i", type=int, default=1)

    b = sub.add_parser("bf").add_subparsers(dest="action", required=True)
    q = b.add_parser("dim", parents=[common])
    _ring_args(q, weights=True)
    q.add_argument("--imax", type=int, required=True)
    q.add_argument("--window", type=int, default=None)
    q = b.add_parser("basis", parents=[common])
    _ring_args(q, weights=True)
    q.add_argument("--i", type=int, required=True)
    q = b.add_parser("order", parents=[common])
    _ring_args(q, weights=True)
    q.add_argument("--imax", type=int, default=12)
    q = b.add_parser("slopes", parents=[common])
    _ring_args(q, weights=True)
    q.add_argument("--slope2", required=True)
    q.add_argument("--imax", type=int, default=12)

    f = sub.add_parser("filtration").add_subparsers(dest="action", required=True)
    q = f.add_parser("estimate", parents=[common])
    q.add_argument("--input", required=True)
    q.add_argument("--window", type=int, required=True)
    q = f.add_parser("length", parents=[common])
    q.add_argument("--eG", required=True)
    q.add_argument("--eF", required=True)
    q.add_argument("--C", type=int, required=True)
    q.add_argument("--theta", required=True)
    q = f.add_parser("bernstein", parents=[common])
    _ring_args(q)
    q.add_argument("--f", default=None)
    q.add_argument("--imax", type=int, default=24)
    q.add_argument("--window", type=int, default=8)

    v = sub.add_parser("invariants").add_subparsers(dest="action", required=True)
    for name in ("basis", "signature"):
        q = v.add_parser(name, parents=[common])
        _ring_args(q)
        q.add_argument("--group", default=None)
        q.add_argument("--i", type=int, default=2)
        q.add_argument("--imax", type=int, default=12)

    s = sub.add_parser("simplicity").add_subparsers(dest="action", required=True)
    q = s.add_parser("certify", parents=[common])
    _ring_args(q)
    q.add_argument("--group", default=None)
    q.add_argument("--op", required=True)
    q.add_argument("--i", type=int, required=True)
    q.add_argument("--C", type=int, default=1)
    q = s.add_parser("table", parents=[common])
    _ring_args(q)
    q.add_argument("--group", default=None)
    q.add_argument("--imax", type=int, default=4)
    q.add_argument("--cmax", type=int, default=5)
    q.add_argument("--samples", type=int, default=0)

    bs = sub.add_parser("bs").add_subparsers(dest="action", required=True)
    q = bs.add_parser("solve", parents=[common])
    q.add_argument("--f", required=True)
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--sdeg", type=int, default=1)
    q.add_argument("--bdeg", type=int, default=3)
    q.add_argument("--group", default=None)

    d = sub.add_parser("dmod").add_subparsers(dest="action", required=True)
    q = d.add_parser("act", parents=[common])
    q.add_argument("--op", required=True)
    q.add_argument("--num", default="1")
    q.add_argument("--t", type=int, default=1)
    q.add_argument("--f", required=True)
    q = d.add_parser("growth", parents=[common])
    _ring_args(q)
    q.add_argument("--module", choices=["R", "R_f"], default="R")
    q.add_argument("--f", default=None)
    q.add_argument("--imax", type=int, default=16)
    q.add_argument("--window", type=int, default=None)

    c = sub.add_parser("charp").add_subparsers(dest="action", required=True)
    q = c.add_parser("split", parents=[common])
    q.add_argument("--ring", required=True, help="fixture name or JSON presentation")
    q.add_argument("--emax", type=int, default=2)
    q.add_argument("--brute", action="store_true", help="cross-check e=1 by enumeration (p=2)")
    q = c.add_parser("ffrt", parents=[common])
    for nm in ("n", "r", "p", "e"):
        q.add_argument(f"--{nm}", type=int, required=True)
    q = c.add_parser("level", parents=[common])
    q.add_argument("--op", required=True)
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--p", type=int, required=True)
    q = c.add_parser("containment", parents=[common])
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--imax", type=int, default=8)
    q.add_argument("--nmax", type=int, default=2)
    q.add_argument("--emax", type=int, default=2)
    return ap


_SKIP = {"command", "action", "output", "seed", "out"}


def _csv_of(result):
    if "csv" in result:
        return result["csv"]
    dims = result.get("dims")
    if dims is None:
        raise UsageError("output", "this job has no CSV form; use --json")
    lines = ["i,dim"] + [f"{i},{v}" for i, v in enumerate(dims)]
    return "\n".join(lines) + "\n"


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    job = JobSpec(args.command, args.action, group=getattr(args, "group", None), seed=args.seed,
                  output=args.output or "json",
                  params={k: v for k, v in sorted(vars(args).items()) if k not in _SKIP})
    try:
        result, ok = JOBS[args.command](args, job)
        if job.output == "csv":
            text = _csv_of(result)
        else:
            result.pop("csv", None)
            report = {"tool": "holofilt", "version": __version__, "job": asdict(job),
                      "ok": bool(ok), "result": result}
            text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
