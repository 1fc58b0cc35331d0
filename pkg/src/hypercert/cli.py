"""Command line front end.

Exit codes: 0 success / NO-consistent, 1 limitation verdict failed,
2 usage or parse error, 3 YES-witnessed, 4 inconclusive, 5 resource cap.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench, certify, generators, matio, oracle
from .core import CapacityError, DegenerateInputError, InvalidArgumentError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_YES = 3
EXIT_INCONCLUSIVE = 4
EXIT_CAP = 5

_DECISION_EXIT = {
    certify.NO_CONSISTENT: EXIT_OK,
    certify.YES_WITNESSED: EXIT_YES,
    certify.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _load(args):
    return matio.read_matrix(args.input)


def _check_budget(X, budget):
    n, d = X.shape
    if float(n) ** 2 * d**2 > budget:
        raise CapacityError(f"n^2 d^2 = {float(n) ** 2 * d**2:.3g} exceeds budget {budget:.3g} (raise --budget)")


def cmd_gen(args):
    params = {}
    if args.C is not None:
        params["C"] = args.C
    if args.c is not None:
        params["c"] = args.c
    if args.rho is not None:
        params["rho"] = args.rho
    if args.spike_mag is not None:
        params["spike_mag"] = args.spike_mag
    spec = generators.GeneratorSpec(
        kind=args.kind, n=args.n, d=args.d, q_hint=args.q_hint, seed=args.seed, params=params
    )
    X = generators.generate(spec)
    if args.out:
        matio.write_matrix(args.out, X)
        Path(str(args.out) + ".json").write_text(spec.to_json() + "\n")
    _emit({
        "n": X.shape[0],
        "d": X.shape[1],
        "checksum": matio.checksum(X),
        "out": args.out,
        "spec": json.loads(spec.to_json()),
    })
    return EXIT_OK


def _certify_one(method, X, args):
    if method == "proxy":
        return certify.proxy_certificate(X, args.q, eig_tol=args.eig_tol, max_iter=args.max_iter, seed=args.seed)[1]
    if method == "baseline":
        return certify.baseline_certificate(X, args.q, max_iter=args.max_iter, seed=args.seed)
    return certify.guth_certificate(X, args.q, eig_tol=args.eig_tol, max_iter=args.max_iter, seed=args.seed)


def cmd_certify(args):
    X = _load(args)
    _check_budget(X, args.budget)
    methods = ["proxy", "baseline", "guth"] if args.method == "all" else [args.method]
    reports = [_certify_one(m, X, args) for m in methods]
    if args.alpha is not None:
        reports = [certify.decide(r, args.alpha, args.beta) for r in reports]
    payload = [r.to_dict() for r in reports]
    if args.p is not None:
        pq = certify.p_to_q_certificate(X, args.p, args.q, eig_tol=args.eig_tol, max_iter=args.max_iter, seed=args.seed)
        payload.append(pq.to_dict())
    if args.json:
        _emit(payload, args.json_out)
    else:
        for r in reports:
            B = "-" if r.B is None else f"{r.B:.9g}"
            line = f"{r.method:9s} q={r.q} factor={r.factor:.6g} B={B} certified_upper={r.certified_upper:.9g}"
            if r.decision:
                line += f" decision={r.decision}"
                if r.decision == certify.YES_WITNESSED:
                    line += f" witness={r.best_provenance} {list(map(float, r.best_direction))}"
            print(line)
    if args.alpha is None:
        return EXIT_OK
    return _DECISION_EXIT[reports[0].decision]


def cmd_search(args):
    X = _load(args)
    _check_budget(X, args.budget)
    _, r = certify.proxy_certificate(X, args.q, eig_tol=args.eig_tol, max_iter=args.max_iter, seed=args.seed)
    _emit({
        "q": r.q,
        "B": r.B,
        "factor": r.factor,
        "best_direction": {"provenance": r.best_provenance, "coords": [float(c) for c in r.best_direction]},
        "seed": r.seed,
    })
    return EXIT_OK


def cmd_oracle(args):
    X = _load(args)
    warm = None
    if args.warm_from_proxy:
        _check_budget(X, args.budget)
        warm, _ = certify.proxy_certificate(X, args.q, seed=args.seed)
    res = oracle.oracle_lower_bound(X, args.q, restarts=args.restarts, seed=args.seed, warm_starts=warm)
    out = res.to_dict()
    out["seed"] = args.seed
    _emit(out)
    return EXIT_OK


def _int_list(text):
    return [int(t) for t in text.split(",") if t.strip()]


def cmd_bench_scaling(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in bench.METHODS:
            raise InvalidArgumentError(f"unknown method {m!r}")
    res = bench.bench_scaling(
        q=args.q,
        dims=_int_list(args.dims),
        n_rule=args.n_rule,
        seeds=args.seeds,
        methods=methods,
        budget=args.budget,
        restarts=args.restarts,
    )
    if args.csv:
        Path(args.csv).write_text("\n".join(res.csv_lines()) + "\n")
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(res.to_dict(), indent=2) + "\n")
    print(f"{'method':10s} {'slope':>8s}   medians by d")
    for m in methods:
        meds = "  ".join(f"d={d}:{v:.5g}" for d, v in res.medians[m].items())
        print(f"{m:10s} {res.slopes[m]:8.4f}   {meds}")
    return EXIT_OK


def cmd_limitation(args):
    per_seed, verdict = bench.limitation(d=args.d, C=args.C, seeds=args.seeds, q=args.q)
    _emit({
        "d": args.d,
        "C": args.C,
        "q": args.q,
        "seeds": [r.to_dict() for r in per_seed],
        "verdict": verdict,
    })
    return EXIT_OK if verdict["pass"] else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="hypercert", description="Certified bounds on 2->q operator norms.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded instance")
    g.add_argument("--kind", required=True, choices=generators.KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--q-hint", type=int, default=4)
    g.add_argument("--C", type=float, help="appendixA_spike size multiplier (n = C d^3)")
    g.add_argument("--c", type=float, help="rank_one row scale")
    g.add_argument("--rho", type=float, help="planted_spike row fraction")
    g.add_argument("--spike-mag", type=float, help="planted_spike magnitude")
    g.add_argument("--out", help="output path (.csv for CSV, anything else binary)")
    g.set_defaults(func=cmd_gen)

    def common(p):
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--q", type=int, default=4)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=float, default=bench.DEFAULT_BUDGET, help="max n^2 d^2")

    c = sub.add_parser("certify", help="certificates and YES/NO decision")
    common(c)
    c.add_argument("--method", choices=["proxy", "baseline", "guth", "all"], default="proxy")
    c.add_argument("--alpha", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--p", type=float, help="also run the p->q certificate")
    c.add_argument("--eig-tol", type=float, default=1e-10)
    c.add_argument("--max-iter", type=int, default=5000)
    c.add_argument("--json", action="store_true", help="print JSON reports")
    c.add_argument("--json-out", help="also write the JSON to this path")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", help="best list direction and its value")
    common(s)
    s.add_argument("--eig-tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=5000)
    s.set_defaults(func=cmd_search)

    o = sub.add_parser("oracle", help="multi-start ascent lower bound")
    common(o)
    o.add_argument("--restarts", type=int, default=64)
    o.add_argument("--warm-from-proxy", action="store_true")
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench-scaling", help="log-log scaling experiment on Gaussian data")
    b.add_argument("--q", type=int, default=4)
    b.add_argument("--dims", default="8,16,24,32")
    b.add_argument("--n-rule", default="4d2")
    b.add_argument("--seeds", type=int, default=3)
    b.add_argument("--methods", default="proxy,baseline,oracle")
    b.add_argument("--restarts", type=int, default=64)
    b.add_argument("--budget", type=float, default=bench.DEFAULT_BUDGET)
    b.add_argument("--csv")
    b.add_argument("--json-out")
    b.set_defaults(func=cmd_bench_scaling)

    lim = sub.add_parser("limitation", help="adversarial spike instance vs the rows+singular-vector list")
    lim.add_argument("--d", type=int, default=8)
    lim.add_argument("--C", type=float, default=50.0)
    lim.add_argument("--seeds", type=int, default=3)
    lim.add_argument("--q", type=int, default=4)
    lim.set_defaults(func=cmd_limitation)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidArgumentError, DegenerateInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
