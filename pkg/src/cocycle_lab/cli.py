"""Command line: ``cocycle-lab check|lyapunov|certify|transfer|counterexample``.

Exit status: 0 when the analysis completed, 2 when its verdict is negative
(falsified, violated, not bunched), 3 on input errors.
"""
from __future__ import annotations

import argparse
import math
import sys

from .cocycle import bunching_check, holder_estimate
from .counterexample import (
    CounterexampleParams,
    determine_k0,
    inequality_thresholds,
    random_v0_point,
    self_return_point,
    verify_cone_step,
    verify_exponent_bound,
    verify_not_uh,
)
from .errors import CocycleLabError, SpecParseError
from .lyapunov import gap_scan, sampled_exponent
from .report import ReportDocument, exponent_csv
from .specfile import load_spec, parse_point, spec_digest
from .transfer import run_transfer
from .uh import certify

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 2, 3


class InputError(Exception):
    pass


def _points(args):
    try:
        return [parse_point(p) for p in args.point or ()]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_check(args):
    spec = load_spec(args.spec)
    doc = ReportDocument("check", {"spec": args.spec}, spec_digest(spec))
    bunch = bunching_check(spec)
    alpha, c = holder_estimate(spec)
    doc.add("sft", {"size": spec.sft.size, "base": spec.sft.base, "irreducible": spec.sft.irreducible,
                    "max_m": spec.sft.max_m if spec.sft.irreducible else None})
    doc.add("bunching", {"bunched": bunch.bunched, "margin": bunch.margin, "alpha": bunch.alpha,
                         "criterion": "sup ||A||^2 2^-alpha < 1"})
    doc.add("holder", {"alpha": alpha, "constant": c})
    ok = bunch.bunched and spec.sft.irreducible
    return doc, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_lyapunov(args):
    spec = load_spec(args.spec)
    params = {"spec": args.spec}
    if args.sample:
        n, trials, seed = args.sample
        params.update(n=n, trials=trials, seed=seed)
        doc = ReportDocument("lyapunov", params, spec_digest(spec))
        weights = args.weights or [1.0 / spec.sft.size] * spec.sft.size
        rep = sampled_exponent(spec, weights, n, trials, seed)
        doc.add("sampled", {"lambda_plus": rep.lambda_plus, "lambda_minus": rep.lambda_minus, "n": n,
                            "trials": trials, "spread": rep.spread, "weights": weights})
        return doc, EXIT_OK
    tau = args.tau if args.tau is not None else 0.0
    params.update(max_period=args.max_period, tau=tau)
    doc = ReportDocument("lyapunov", params, spec_digest(spec))
    scan = gap_scan(spec, args.max_period, tau)
    doc.add("gap_scan", {"orbits": len(scan.orbits), "min_lambda_plus": scan.min_lambda, "min_gap": scan.min_gap,
                         "tau": tau, "verdict": scan.verdict, "witness": scan.witness})
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(exponent_csv(scan.rows()))
        doc.add("csv", args.csv)
    negative = args.tau is not None and not scan.holds
    return doc, EXIT_NEGATIVE if negative else EXIT_OK


def cmd_certify(args):
    spec = load_spec(args.spec)
    points = _points(args) + list(spec.probe_points(args.n_max))
    params = {"spec": args.spec, "n_max": args.n_max, "tau_probe": args.tau_probe, "probe_period": args.probe_period,
              "refine_steps": args.refine_steps, "max_word_length": args.max_word_length}
    doc = ReportDocument("certify", params, spec_digest(spec))
    verdict = certify(spec, points, args.n_max, args.tau_probe, args.probe_period,
                      refine_steps=args.refine_steps, max_word_length=args.max_word_length)
    doc.add("verdict", verdict.status)
    if verdict.certificate is not None:
        cert = verdict.certificate
        doc.add("certificate", {
            "c": cert.c, "tau": cert.tau, "inclusion_margin": cert.margin, "growth_threshold": cert.threshold,
            "recoded": cert.recoded, "unstable_cones": cert.unstable.arcs, "stable_cones": cert.stable.arcs,
            "word_lengths": [cert.unstable.word_length, cert.stable.word_length],
            "revalidated": cert.revalidate(), "arc_slack": 1e-9,
        })
    if verdict.witness is not None:
        doc.add("witness", {"x": verdict.witness.x, "n": verdict.witness.n, "norm": verdict.witness.norm,
                            "threshold": math.exp(args.tau_probe * verdict.witness.n) / 2})
    doc.add("notes", list(verdict.notes))
    return doc, EXIT_NEGATIVE if verdict.status == "falsified" else EXIT_OK


def cmd_transfer(args):
    spec = load_spec(args.spec)
    points = _points(args) + list(spec.probe_points(args.n0))
    params = {"spec": args.spec, "n0": args.n0, "eps": args.eps, "max_period": args.max_period}
    doc = ReportDocument("transfer", params, spec_digest(spec))
    slow, shadow, rep = run_transfer(spec, args.n0, args.eps, points, args.max_period)
    doc.add("slow_point", {"x": slow.x, "norm": slow.norm, "searched": slow.searched})
    if args.eps is not None:
        doc.add("slow_enough", slow.log_norm <= args.eps * args.n0)
    doc.add("shadow", {"word": list(shadow.word), "n1": shadow.n1, "connector": list(shadow.connector)})
    doc.add("report", rep)
    doc.add("factors", dict(zip(rep.factor_names, rep.factor_norms)))
    return doc, EXIT_OK if rep.passed else EXIT_NEGATIVE


def cmd_counterexample(args):
    params = CounterexampleParams() if args.k0 is None else CounterexampleParams(args.k0)
    doc = ReportDocument("counterexample", {"verify": args.verify, "k0": params.k0, "n_max": args.n_max,
                                            "max_period": args.max_period, "samples": args.samples,
                                            "seed": args.seed})
    doc.add("k0", {"value": params.k0, "computed": determine_k0(), "thresholds": inequality_thresholds()})
    ok = True
    if args.verify in ("all", "not-uh"):
        r = verify_not_uh(args.n_max, params)
        doc.add("not_uh", {"passed": r.passed, "max_deviation": r.max_deviation, "tolerance": 1e-10,
                           "norms": r.norms, "fixed_point_log_norms": r.contrast_log_norms})
        ok &= r.passed
    if args.verify in ("all", "cones"):
        import numpy as np

        rng = np.random.default_rng(args.seed)
        pts = [self_return_point(m) for m in range(7, 31)]
        pts += [random_v0_point(rng, deep_k0=params.k0) for _ in range(args.samples)]
        steps = []
        fails = []
        for x in pts:
            try:
                steps.append(verify_cone_step(x, params))
            except CocycleLabError as exc:
                fails.append({"x": x, "error": str(exc)})
        doc.add("cones", {"checked": len(pts), "failures": fails,
                          "min_inclusion_margin": min(s.inclusion_margin for s in steps) if steps else None,
                          "min_growth_ratio": min(s.growth / s.growth_bound for s in steps) if steps else None,
                          "note": "k <= k0 visits use the horizontal quarter cone"})
        ok &= not fails
    if args.verify in ("all", "exponents"):
        r = verify_exponent_bound(args.max_period, args.samples, params, args.seed)
        doc.add("exponents", {"passed": r.passed, "tau": r.tau, "min_periodic_lambda": r.scan.min_lambda,
                              "orbits": len(r.scan.orbits), "self_return_family": [list(t) for t in r.deep_exponents],
                              "tracked_points": len(r.tracks),
                              "min_track_slack": min(t.worst_slack for t in r.tracks) if r.tracks else None,
                              "off_v_exponent": r.off_v_exponent})
        ok &= r.passed
    doc.add("passed", bool(ok))
    return doc, EXIT_OK if ok else EXIT_NEGATIVE


def build_parser():
    ap = argparse.ArgumentParser(prog="cocycle-lab", description="SL(2,R) cocycles over subshifts of finite type")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--jsonl", help="append the report as one JSON line to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="base irreducibility, bunching margin and Hoelder constant")
    p.add_argument("spec")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("lyapunov", help="periodic-orbit exponents or sampled exponents")
    p.add_argument("spec")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--max-period", type=int)
    g.add_argument("--sample", nargs=3, type=int, metavar=("N", "TRIALS", "SEED"))
    p.add_argument("--tau", type=float, help="gap threshold for the periodic scan")
    p.add_argument("--weights", type=float, nargs="+", help="Bernoulli weights for sampling")
    p.add_argument("--csv", help="write period,word,lambda_plus rows here")
    p.set_defaults(run=cmd_lyapunov)

    p = sub.add_parser("certify", help="cone certificate and norm-growth probe")
    p.add_argument("spec")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--tau-probe", type=float, default=0.1)
    p.add_argument("--probe-period", type=int, default=6)
    p.add_argument("--refine-steps", type=int, default=40)
    p.add_argument("--max-word-length", type=int, default=12)
    p.add_argument("--point", action="append", help="extra probe point left:core:right@start")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("transfer", help="slow point, periodic shadow and exponent bound")
    p.add_argument("spec")
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--max-period", type=int, default=8)
    p.add_argument("--point", action="append", help="extra search point left:core:right@start")
    p.set_defaults(run=cmd_transfer)

    p = sub.add_parser("counterexample", help="verify the diag-rotation counterexample")
    p.add_argument("--verify", choices=("all", "not-uh", "cones", "exponents"), default="all")
    p.add_argument("--k0", type=int)
    p.add_argument("--n-max", type=int, default=25)
    p.add_argument("--max-period", type=int, default=12)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_counterexample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.run(args)
    except (SpecParseError, InputError, ValueError, CocycleLabError) as exc:
        print(f"cocycle-lab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc.finish()
    text = doc.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.jsonl:
        with open(args.jsonl, "a", encoding="utf-8") as fh:
            fh.write(doc.to_jsonl())
    return code


if __name__ == "__main__":
    sys.exit(main())
