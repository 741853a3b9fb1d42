"""Property suite over every module, plus CSV plot-data export.

``run_suite`` returns ``(status, report)`` with status 0 when every property
holds, 2 on any violation and 1 on a bad configuration.  The JSON report
holds no timings or paths, so two runs with the same config are
byte-identical.
"""

from __future__ import annotations

import csv
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional

import mpmath
import numpy as np

from . import ordinal as od
from . import schreier as sc
from .dominate import (
    CounterexampleReport,
    Lorentz,
    Lp,
    PairSum,
    counterexample_report,
    domination_constant,
    witness_ratio,
)
from .pairgen import AlternatingPair, Check, build_pair, validate_pair
from .seqspace import (
    Constant,
    Geometric,
    PowerLaw,
    Segment,
    WeightSpec,
    lorentz_norm,
    lorentz_norm_permutation_sup,
    lp_norm,
    pair_norm,
    pair_norm_direct,
    power_sum,
)

SCHEMA_SUITE = "schreierlab.suite/1"
WORKERS_ENV = "SCHREIERLAB_WORKERS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    precision_mode: str = "double"
    tolerance: float = 1e-9
    max_n: int = 12
    max_stages: int = 3
    seed: int = 0
    samples: int = 2000
    workers: int = 1
    pairs: list = field(default_factory=lambda: [[2, 1], [3, 1.5]])
    pair_file: Optional[str] = None
    out: Optional[str] = None

    def check(self) -> "RunConfig":
        if self.precision_mode not in ("double", "extended"):
            raise ConfigError(f"precision_mode must be double or extended, got {self.precision_mode!r}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        for name in ("max_n", "max_stages", "samples", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.max_n > sc.MAX_ENUM_N:
            raise ConfigError(f"max_n above the enumeration limit {sc.MAX_ENUM_N}")
        for pq in self.pairs:
            if len(pq) != 2 or not 1 <= float(pq[1]) < float(pq[0]):
                raise ConfigError(f"bad (p, q) pair {pq!r}")
        return self

    @property
    def prec(self) -> Optional[int]:
        return 128 if self.precision_mode == "extended" else None

    @classmethod
    def from_file(cls, path, **overrides) -> "RunConfig":
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def default_workers() -> int:
    return int(os.environ.get(WORKERS_ENV, "1"))


# -- ordinal ------------------------------------------------------------------

def _sample_ordinals(rng: random.Random, count: int) -> list:
    out = []
    for _ in range(count):
        terms = []
        for e in sorted(rng.sample(range(4), rng.randint(0, 3)), reverse=True):
            terms.append((e, rng.randint(1, 4)))
        out.append(od.Ordinal(tuple(terms)))
    return out


def ordinal_checks(cfg: RunConfig) -> list:
    rng = random.Random(cfg.seed)
    xs = _sample_ordinals(rng, 40)
    assoc = ident = mono = 0
    for a in xs[:20]:
        if a + 0 != a:
            ident += 1
        for b in xs[:20]:
            for c in xs[20:30]:
                if (a + b) + c != a + (b + c):
                    assoc += 1
                if b < c and not a + b < a + c:
                    mono += 1
    fund_bad = []
    for text in ("w", "w*2", "w^2", "w^2+w", "w^3"):
        xi = od.parse_ordinal(text)
        prev = None
        for n in range(1, 101):
            z = od.fundamental(xi, n)
            if z.is_limit or not z < xi or (prev is not None and not prev < z):
                fund_bad.append(f"{text}[{n}]")
            prev = z
    trip = [x for x in xs if od.parse_ordinal(od.format_ordinal(x)) != x]
    return [
        Check("ordinal.associativity", assoc == 0, f"{assoc} failures"),
        Check("ordinal.zero_identity", ident == 0, f"{ident} failures"),
        Check("ordinal.left_monotone", mono == 0, f"{mono} failures"),
        Check("ordinal.fundamental_sequences", not fund_bad, ", ".join(fund_bad[:5])),
        Check("ordinal.text_round_trip", not trip, ", ".join(map(str, trip[:5]))),
    ]


# -- schreier -----------------------------------------------------------------

def _subsets(n: int):
    for r in range(n + 1):
        yield from combinations(range(1, n + 1), r)


def _spread_moves(F: tuple, n: int):
    # single +1 moves generate every coordinatewise-larger set
    for i, x in enumerate(F):
        nxt = F[i + 1] if i + 1 < len(F) else n + 1
        if x + 1 < nxt:
            yield F[:i] + (x + 1,) + F[i + 1:]


def schreier_checks(cfg: RunConfig) -> list:
    n = cfg.max_n
    sets = list(_subsets(n))
    checks = []
    mismatch = []
    for text in ("1", "2", "3", "w", "w+1"):
        xi = od.parse_ordinal(text)
        mismatch += [(text, F) for F in sets if sc.is_member(F, xi) != sc.is_member_exhaustive(F, xi)]
    checks.append(Check("schreier.greedy_equals_exhaustive", not mismatch,
                        f"{len(sets)} sets x 5 indices, {len(mismatch)} disagreements"))
    hered, spread = [], []
    for text in ("1", "2", "3", "w", "w+1", "w*2"):
        xi = od.parse_ordinal(text)
        members = {F for F in sets if sc.is_member(F, xi)}
        for F in members:
            if any(F[:i] + F[i + 1:] not in members for i in range(len(F))):
                hered.append((text, F))
            if any(G not in members for G in _spread_moves(F, n)):
                spread.append((text, F))
    checks.append(Check("schreier.hereditary", not hered, f"{len(hered)} violations"))
    checks.append(Check("schreier.spreading", not spread, f"{len(spread)} violations"))
    chain = []
    for text in ("1", "2", "w"):
        z = od.parse_ordinal(text)
        chain += [(text, F) for F in sets if sc.is_member(F, z) and not sc.is_member(F, z + 1)]
    checks.append(Check("schreier.successor_chain", not chain, f"{len(chain)} violations"))
    s1 = []
    for text in ("2", "3", "w", "w+1", "w*2", "w^2"):
        s1 += [(text, F) for F in sets if sc.is_member(F, 1) and not sc.is_member(F, text)]
    checks.append(Check("schreier.S1_contained", not s1, f"{len(s1)} violations"))
    dbl = []
    for text in ("1", "2", "w"):
        dbl += [(text, A) for A in _subsets(7) if sc.is_member(A, text) and not sc.is_member(sc.double(A), text)]
    checks.append(Check("schreier.doubling", not dbl, f"{len(dbl)} violations"))
    L = sc.find_L(1, 1, 10)
    viol = sc.composite_violations(L, 1, 1)
    checks.append(Check("schreier.composite_identity_L", L == list(range(1, 11)) and not viol,
                        f"L={L}, {len(viol)} violations"))
    return checks


# -- seqspace -----------------------------------------------------------------

def _random_weights(rng: np.random.Generator, n: int, q: float) -> WeightSpec:
    return WeightSpec.power_law(float(rng.uniform(0.05, 0.95)), n, q=q)


def seqspace_checks(cfg: RunConfig) -> list:
    rng = np.random.default_rng(cfg.seed)
    checks = []
    worst = 0.0
    for _ in range(500):
        k = int(rng.integers(1, 8))
        w = _random_weights(rng, 8, float(rng.choice([1.0, 1.5, 2.0])))
        a = list(rng.standard_normal(k))
        x, y = lorentz_norm(a, w), lorentz_norm_permutation_sup(a, w)
        worst = max(worst, abs(x - y) / y)
    checks.append(Check("seqspace.permutation_sup", worst <= 1e-12, f"max rel diff {worst:.3g}"))

    homog = tri = mono = 0
    pair_worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 21))
        q = float(rng.choice([1.0, 1.5, 3.0]))
        w, wt = _random_weights(rng, 20, q), _random_weights(rng, 20, q)
        a, b = rng.standard_normal(k), rng.standard_normal(k)
        t = float(rng.uniform(-5, 5))
        na = lorentz_norm(a, w)
        if abs(lorentz_norm(t * a, w) - abs(t) * na) > 1e-12 * abs(t) * na:
            homog += 1
        if lorentz_norm(a + b, w) > (na + lorentz_norm(b, w)) * (1 + 1e-12):
            tri += 1
        bigger = np.abs(a) + rng.random(k)
        if lorentz_norm(bigger, w) < na * (1 - 1e-12):
            mono += 1
        d1, d2 = pair_norm(a, w, wt), pair_norm_direct(a, w, wt)
        pair_worst = max(pair_worst, abs(d1 - d2) / d1)
    checks += [
        Check("seqspace.homogeneity", homog == 0, f"{homog} failures"),
        Check("seqspace.triangle", tri == 0, f"{tri} failures"),
        Check("seqspace.monotone", mono == 0, f"{mono} failures"),
        Check("seqspace.pair_formulas", pair_worst <= 1e-12, f"max rel diff {pair_worst:.3g}"),
    ]

    bad_specs = {
        "w1_not_one": WeightSpec([Segment(1, 5, Constant(0.5))]),
        "boundary_increase": WeightSpec([Segment(1, 3, PowerLaw(0.5)), Segment(4, 6, Constant(0.9))]),
        "value_above_one": WeightSpec([Segment(1, 1, PowerLaw(0.5)), Segment(2, 4, Constant(1.5))]),
        "gap": WeightSpec([Segment(1, 3, PowerLaw(0.5)), Segment(5, 6, Constant(0.1))]),
    }
    accepted = [name for name, spec in bad_specs.items() if not spec.validate()]
    checks.append(Check("seqspace.validator_rejects", not accepted, ", ".join(accepted)))

    em_worst = 0.0
    for s, a, b in ((0.5, 1, 10 ** 6), (1 / 3, 123, 10 ** 6), (0.25, 31, 500000), (0.9, 2, 10 ** 6)):
        em = power_sum(s, a, b, method="em", prec=cfg.prec)
        direct = power_sum(s, a, b, method="direct", prec=cfg.prec)
        with mpmath.workprec(cfg.prec or 53):
            em_worst = max(em_worst, float(abs(em - direct) / direct))
    checks.append(Check("seqspace.em_vs_direct", em_worst <= 1e-9, f"max rel diff {em_worst:.3g}"))
    return checks


# -- pairgen and dominate -----------------------------------------------------

def pair_checks(cfg: RunConfig, pair: AlternatingPair, label: str) -> list:
    report = validate_pair(pair, sample_budget=cfg.samples, seed=cfg.seed)
    return [Check(f"pair[{label}].{c.name}", c.passed, c.detail) for c in report.checks]


def dominate_checks(cfg: RunConfig) -> list:
    checks = []
    w = WeightSpec.power_law(0.5, 64, q=1.0)
    X, Y = Lorentz(w), Lp(2.0)
    budget = max(50, cfg.samples // 20)
    reports = {N: domination_constant(X, Y, od.OMEGA_1, N, budget, cfg.seed) for N in (1, 8, 20)}
    over = [N for N, r in reports.items() if r.constant_estimate > 1 + cfg.tolerance]
    checks.append(Check("dominate.lorentz_power_dominates_l2", not over,
                        ", ".join(f"N={N}: {r.constant_estimate:.12g}" for N, r in reports.items())))

    Xc, Yc = Lp(2.0), Lorentz(w)
    unsound, nonmono = [], []
    for xi_text in ("1", "2", "w1"):
        prev = 0.0
        for N in (4, 8, 12):
            r = domination_constant(Xc, Yc, xi_text, N, budget, cfg.seed)
            again = witness_ratio(r, Xc, Yc)
            if abs(again - r.constant_estimate) > 1e-9 * r.constant_estimate:
                unsound.append(f"{xi_text}/{N}")
            if r.witness_support is not None and xi_text != "w1" and not sc.is_member(r.witness_support, xi_text):
                unsound.append(f"{xi_text}/{N} support")
            if r.constant_estimate < prev * (1 - 1e-12):
                nonmono.append(f"N {xi_text}/{N}")
            prev = r.constant_estimate
    for N in (8, 12):
        vals = [domination_constant(Xc, Yc, t, N, budget, cfg.seed).constant_estimate for t in ("1", "w1")]
        if vals[1] < vals[0] * (1 - 1e-12):
            nonmono.append(f"relax N={N}")
    checks.append(Check("dominate.soundness", not unsound, ", ".join(unsound)))
    checks.append(Check("dominate.monotonicity", not nonmono, ", ".join(nonmono)))

    # one-stage pairs: w follows n^(-s) then decays, wt waits at 1 then follows n^(-s)
    rng = np.random.default_rng(cfg.seed + 1)
    bad = 0
    for trial in range(200):
        p = float(rng.uniform(1.5, 4.0))
        q = float(rng.uniform(1.0, p - 0.2))
        s = 1 / q - 1 / p
        cut = int(rng.integers(1, 30))
        w = WeightSpec([Segment(1, cut, PowerLaw(s)), Segment(cut + 1, 40, Geometric(cut ** -s))], q=q)
        wt = WeightSpec([Segment(1, cut, Constant(1.0)), Segment(cut + 1, 40, PowerLaw(s))], q=q)
        a = rng.standard_normal(int(rng.integers(1, 41)))
        if lp_norm(a, p) > pair_norm(a, w, wt) * (1 + 1e-9):
            bad += 1
        if trial % 4 == 0:
            r = domination_constant(PairSum(w, wt), Lp(p), od.OMEGA_1, 12, 20, cfg.seed + trial)
            if r.constant_estimate > 1 + 1e-9:
                bad += 1
    checks.append(Check("dominate.pair_hypothesis_implies_domination", bad == 0, f"{bad} violations"))
    return checks


def counterexample_checks(cfg: RunConfig, p, q) -> list:
    rep = counterexample_report(p, q, cfg.max_stages, cfg.samples, cfg.seed)
    return [Check(f"counterexample[{p},{q},{cfg.max_stages}]", rep.verdict == "PASS",
                  "; ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in rep.checks))]


def _group(name: str, cfg: RunConfig) -> list:
    if name == "ordinal":
        return ordinal_checks(cfg)
    if name == "schreier":
        return schreier_checks(cfg)
    if name == "seqspace":
        return seqspace_checks(cfg)
    if name == "dominate":
        return dominate_checks(cfg)
    if name.startswith("pair:"):
        p, q = name[5:].split(",")
        out = []
        try:
            pair = build_pair(p, q, cfg.max_stages)
        except OverflowError as exc:
            return [Check(f"pair[{p},{q}].build", False, str(exc))]
        out += pair_checks(cfg, pair, f"{p},{q}")
        out += counterexample_checks(cfg, p, q)
        return out
    if name.startswith("file:"):
        try:
            pair = AlternatingPair.load(name[5:])
        except Exception as exc:
            return [Check("pair_file.load", False, repr(exc))]
        return pair_checks(cfg, pair, "file")
    raise ValueError(name)


def run_suite(cfg: RunConfig) -> tuple:
    """Run every module invariant; returns ``(exit_status, report_dict)``."""
    try:
        cfg.check()
    except (ConfigError, TypeError, ValueError) as exc:
        return 1, {"schema": SCHEMA_SUITE, "error": str(exc)}
    groups = ["ordinal", "schreier", "seqspace", "dominate"]
    groups += [f"pair:{p},{q}" for p, q in cfg.pairs]
    if cfg.pair_file:
        groups.append(f"file:{cfg.pair_file}")
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_group, groups, [cfg] * len(groups)))
    else:
        results = [_group(g, cfg) for g in groups]
    checks = [c for group in results for c in group]
    passed = all(c.passed for c in checks)
    config = {k: v for k, v in asdict(cfg).items() if k not in ("out", "workers")}
    report = {
        "schema": SCHEMA_SUITE,
        "config": config,
        "passed": passed,
        "checks": [c.to_json() for c in checks],
    }
    return (0 if passed else 2), report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


# -- plot data ----------------------------------------------------------------

WITNESS_HEADER = ("k", "n_k", "ratio")
WEIGHT_HEADER = ("n", "w", "wtilde", "segment")


def emit_plotdata(report: CounterexampleReport, path, pair: Optional[AlternatingPair] = None,
                  prefix: int = 1000) -> list:
    """Write ``witnesses.csv`` and ``weights.csv`` into the directory ``path``.

    The weight prefix covers n <= min(prefix, N_built); the pair is rebuilt
    from the report's completed stages when not given.
    """
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    wpath, spath = out / "witnesses.csv", out / "weights.csv"
    with open(wpath, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(WITNESS_HEADER)
        rows = sorted(report.witnesses_w + report.witnesses_wt)
        for k, n, ratio in rows:
            writer.writerow([k, n, repr(float(ratio))])
    if pair is None:
        pair = build_pair(report.p, report.q, max(1, len(report.stages)))
    n = min(prefix, pair.n_built)
    vw, vt = pair.w.values(n), pair.wt.values(n)
    with open(spath, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(WEIGHT_HEADER)
        for j in range(1, n + 1):
            writer.writerow([j, repr(float(vw[j - 1])), repr(float(vt[j - 1])), pair.w.segment_index(j)])
    return [str(wpath), str(spath)]
