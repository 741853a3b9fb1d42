"""Command line front end: ``schreierlab {schreier,seq,pair,dominate,suite}``."""

from __future__ import annotations

import argparse
import json
import sys

from . import schreier as sc
from .dominate import counterexample_report, domination_constant, parse_norm
from .ordinal import OrdinalError
from .pairgen import AlternatingPair, PrecisionBudgetError, build_pair, validate_pair
from .seqspace import (
    WeightSpec,
    export_weights_csv,
    lorentz_norm,
    lp_norm,
    pair_norm,
    parse_vector,
    summing_lorentz_norm,
)
from .suite import ConfigError, RunConfig, default_workers, dump_report, emit_plotdata, run_suite


def _emit(obj, as_json: bool, text: str = None) -> None:
    if as_json:
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        print(text if text is not None else obj)


def _set(text: str) -> tuple:
    return tuple(int(x) for x in text.split(",") if x.strip())


# -- schreier -------------------------------------------------------------------

def cmd_schreier(args) -> int:
    if args.action == "member":
        F = _set(args.set)
        ok = sc.is_member(F, args.xi)
        _emit({"set": list(F), "xi": args.xi, "member": ok}, args.json, str(ok).lower())
    elif args.action == "enum":
        sets = sc.enumerate_maximal(args.xi, args.max, limit=args.limit)
        _emit({"xi": args.xi, "max": args.max, "maximal": [list(F) for F in sets]}, args.json,
              "\n".join(",".join(map(str, F)) for F in sets))
    elif args.action == "threshold":
        d = sc.threshold(args.xi, args.zeta, args.max, limit=args.limit)
        _emit({"xi": args.xi, "zeta": args.zeta, "max": args.max, "d": d}, args.json,
              "not found" if d is None else str(d))
    elif args.action == "find-l":
        L = sc.find_L(args.xi, args.zeta, args.max, limit=args.limit)
        _emit({"xi": args.xi, "zeta": args.zeta, "max": args.max, "L": L}, args.json,
              ",".join(map(str, L)))
    return 0


# -- seq ------------------------------------------------------------------------

def _load_weights(spec: str, q: float):
    """``pair.json``, ``pair.json#wt`` or ``power:S:N``."""
    if spec.startswith("power:"):
        _, s, n = spec.split(":")
        return WeightSpec.power_law(float(s), int(n), q=q), None
    path, _, which = spec.partition("#")
    pair = AlternatingPair.load(path)
    return (pair.wt if which == "wt" else pair.w), pair


def cmd_seq(args) -> int:
    if args.action == "norm":
        prec = 128 if args.precision == "extended" else None
        if args.space in ("lp", "c0"):
            p = float("inf") if args.space == "c0" else args.p
            value = lp_norm(parse_vector(args.vec), p)
        else:
            w, pair = _load_weights(args.weights, args.q)
            if args.space == "pair":
                if pair is None:
                    raise ValueError("--space pair needs a pair file")
                value = pair_norm(parse_vector(args.vec), pair.w, pair.wt)
            elif args.summing:
                value = summing_lorentz_norm(args.summing, w, prec=prec)
            else:
                value = lorentz_norm(parse_vector(args.vec), w)
        text = str(value) if not prec else format(value)
        _emit({"space": args.space, "norm": float(value), "value": text}, args.json, text)
    elif args.action == "export":
        pair = AlternatingPair.load(args.weights)
        n = min(args.n, pair.n_built)
        export_weights_csv(pair.w, pair.wt, n, args.out)
    return 0


# -- pair -----------------------------------------------------------------------

def cmd_pair(args) -> int:
    if args.action == "build":
        pair = build_pair(args.p, args.q, args.stages, max_stages=args.max_stages,
                          max_index_bits=args.max_bits)
        if args.out:
            pair.save(args.out)
        _emit({"stages": [{"m": m, "n": n} for m, n in pair.stages]}, args.json,
              "\n".join(f"m={m} n={n}" for m, n in pair.stages))
        return 0
    pair = AlternatingPair.load(args.file)
    report = validate_pair(pair, sample_budget=args.samples, seed=args.seed)
    _emit(report.to_json(), args.json,
          "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name} {c.detail}" for c in report.checks))
    return 0 if report.passed else 2


# -- dominate -------------------------------------------------------------------

def cmd_dominate(args) -> int:
    if args.action == "const":
        report = domination_constant(parse_norm(args.x), parse_norm(args.y), args.xi, args.max,
                                     args.budget, args.seed)
        _emit(report.to_json(), args.json,
              f"{report.constant_estimate!r} ({report.method}, lower bound)")
        return 0
    report = counterexample_report(args.p, args.q, args.stages, args.samples, args.seed,
                                   max_index_bits=args.max_bits)
    if args.plot_dir:
        emit_plotdata(report, args.plot_dir)
    _emit(report.to_json(), args.json, report.verdict)
    return 0 if report.verdict == "PASS" else 2


# -- suite ----------------------------------------------------------------------

def cmd_suite(args) -> int:
    overrides = {
        "precision_mode": args.precision, "tolerance": args.tolerance, "max_n": args.max_n,
        "max_stages": args.max_stages, "seed": args.seed, "samples": args.samples,
        "workers": args.workers, "pair_file": args.pair_file, "out": args.out,
    }
    if args.config:
        cfg = RunConfig.from_file(args.config, **overrides)
    else:
        cfg = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    if args.pairs:
        cfg.pairs = [[float(x) for x in pq.split(",")] for pq in args.pairs]
    if args.workers is None:
        cfg.workers = default_workers()
    # open early so an unwritable path fails before the long run
    fh = open(cfg.out, "w") if cfg.out else None
    status, report = run_suite(cfg)
    text = dump_report(report)
    if fh is not None:
        with fh:
            fh.write(text)
    if args.json or not cfg.out:
        sys.stdout.write(text)
    if status == 1:
        print(f"config error: {report.get('error')}", file=sys.stderr)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schreierlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_s = sub.add_parser("schreier", help="Schreier family membership and enumeration")
    s_sub = p_s.add_subparsers(dest="action", required=True)
    m = s_sub.add_parser("member")
    m.add_argument("--xi", required=True)
    m.add_argument("--set", required=True, help="comma separated, e.g. 5,6,7")
    for name in ("enum", "threshold", "find-l"):
        e = s_sub.add_parser(name)
        e.add_argument("--xi", required=True)
        if name != "enum":
            e.add_argument("--zeta", required=True)
        e.add_argument("--max", type=int, required=True)
        e.add_argument("--limit", type=int, default=None)
    for a in s_sub.choices.values():
        a.add_argument("--json", action="store_true")
    p_s.set_defaults(func=cmd_schreier)

    p_q = sub.add_parser("seq", help="sequence space norms")
    q_sub = p_q.add_subparsers(dest="action", required=True)
    n = q_sub.add_parser("norm")
    n.add_argument("--space", choices=("lorentz", "lp", "c0", "pair"), required=True)
    n.add_argument("--q", type=float, default=1.0)
    n.add_argument("--p", type=float, default=2.0)
    n.add_argument("--weights", help="pair.json[#w|#wt] or power:S:N")
    n.add_argument("--vec", default="", help="index:value pairs, e.g. 1:1,2:1")
    n.add_argument("--summing", type=int, help="norm of the summing vector s_n instead of --vec")
    n.add_argument("--precision", choices=("double", "extended"), default="double")
    n.add_argument("--json", action="store_true")
    x = q_sub.add_parser("export")
    x.add_argument("--weights", required=True)
    x.add_argument("--n", type=int, default=1000)
    x.add_argument("--out", required=True)
    p_q.set_defaults(func=cmd_seq)

    p_p = sub.add_parser("pair", help="alternating weight pair")
    p_sub = p_p.add_subparsers(dest="action", required=True)
    b = p_sub.add_parser("build")
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--q", type=float, required=True)
    b.add_argument("--stages", type=int, required=True)
    b.add_argument("--out")
    b.add_argument("--max-stages", type=int, default=8)
    b.add_argument("--max-bits", type=int, default=4096)
    b.add_argument("--json", action="store_true")
    v = p_sub.add_parser("validate")
    v.add_argument("file")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--json", action="store_true")
    p_p.set_defaults(func=cmd_pair)

    p_d = sub.add_parser("dominate", help="domination constants and the counterexample")
    d_sub = p_d.add_subparsers(dest="action", required=True)
    c = d_sub.add_parser("const")
    c.add_argument("--x", required=True)
    c.add_argument("--y", required=True)
    c.add_argument("--xi", default="w1")
    c.add_argument("--max", type=int, required=True)
    c.add_argument("--budget", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    ce = d_sub.add_parser("counterexample")
    ce.add_argument("--p", type=float, required=True)
    ce.add_argument("--q", type=float, required=True)
    ce.add_argument("--stages", type=int, required=True)
    ce.add_argument("--samples", type=int, default=10000)
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--max-bits", type=int, default=4096)
    ce.add_argument("--plot-dir")
    ce.add_argument("--json", action="store_true")
    p_d.set_defaults(func=cmd_dominate)

    p_u = sub.add_parser("suite", help="run every property check")
    p_u.add_argument("--config")
    p_u.add_argument("--precision", choices=("double", "extended"))
    p_u.add_argument("--tolerance", type=float)
    p_u.add_argument("--max-n", type=int)
    p_u.add_argument("--max-stages", type=int)
    p_u.add_argument("--seed", type=int)
    p_u.add_argument("--samples", type=int)
    p_u.add_argument("--workers", type=int)
    p_u.add_argument("--pair", dest="pairs", action="append", help="p,q (repeatable)")
    p_u.add_argument("--pair-file")
    p_u.add_argument("--out")
    p_u.add_argument("--json", action="store_true")
    p_u.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OrdinalError, ConfigError, PrecisionBudgetError, sc.ResourceLimitError,
            OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
