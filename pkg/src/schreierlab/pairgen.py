"""The alternating weight pair (w, wt).

Stage k+1 (k+1 even) extends both sequences past n_k in two steps:

* up to m_{k+1}: w follows j^(-s) while wt stays at wt_{n_k}; m_{k+1} is the
  least index with wt_{n_k} >= (m_{k+1}+1)^(-s);
* up to n_{k+1}: wt follows j^(-s) while w decays like 2^(-j) w_{m_{k+1}};
  n_{k+1} is the least index with
  ||s_{m_{k+1}}||_{d(w,q)} + 1 <= ||s_{n_{k+1}}||_{l_p} / (k+1).

Odd stages swap the roles of w and wt.  Every index n is then covered by
j^(-s) in at least one of the two sequences, so the l_q-sum of the two
Lorentz spaces 1-dominates l_p, while summing vectors s_{n_k} show that
neither space alone dominates l_p.

Stage indices are exact Python ints.  The selection inequalities are
decided in mpmath at a precision sized to the index being chosen, with a
relative safety margin so rounding can never break them.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .seqspace import (
    Constant,
    Geometric,
    PowerLaw,
    Segment,
    WeightSpec,
    _mpf,
    pair_norm,
    lp_norm,
    summing_lorentz_norm,
)

DEFAULT_MARGIN = Fraction(1, 10 ** 9)
MAX_STAGES = 8
MAX_INDEX_BITS = 4096
SAMPLE_SUPPORT = 50
INDICATOR_LIMIT = 10 ** 6
TOL = 1e-12

DEVIATION_FLAGS = (
    "n_stage_uses_norm_of_s_m_next",
    "margin_is_relative",
)


class PrecisionBudgetError(OverflowError):
    """A stage index would need more bits than the configured budget.

    ``stages`` holds the (m, n) pairs completed before the failing stage and
    ``bits`` the estimated size of the index that could not be chosen.
    """

    def __init__(self, message: str, stages=(), bits: int = 0):
        super().__init__(message)
        self.stages = list(stages)
        self.bits = bits


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass
class AlternatingPair:
    p: Fraction
    q: Fraction
    s: Fraction
    stages: list
    w: WeightSpec
    wt: WeightSpec
    precision: int
    margin: Fraction = DEFAULT_MARGIN
    deviation_flags: tuple = DEVIATION_FLAGS

    @property
    def n_built(self) -> int:
        return self.stages[-1][1]

    @property
    def K(self) -> int:
        return len(self.stages)

    def to_json(self) -> dict:
        return {
            "p": float(self.p),
            "q": float(self.q),
            "s": float(self.s),
            "s_exact": str(self.s),
            "margin": str(self.margin),
            "stages": [{"m": m, "n": n} for m, n in self.stages],
            "segments_w": self.w.to_json(),
            "segments_wt": self.wt.to_json(),
            "precision": self.precision,
            "deviation_flags": list(self.deviation_flags),
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlternatingPair":
        p, q = _frac(data["p"]), _frac(data["q"])
        s = Fraction(data["s_exact"]) if "s_exact" in data else 1 / q - 1 / p
        return cls(
            p=p, q=q, s=s,
            stages=[(int(st["m"]), int(st["n"])) for st in data["stages"]],
            w=WeightSpec.from_json(data["segments_w"], q=float(q), p_reference=float(p)),
            wt=WeightSpec.from_json(data["segments_wt"], q=float(q), p_reference=float(p)),
            precision=int(data["precision"]),
            margin=Fraction(data.get("margin", str(DEFAULT_MARGIN))),
            deviation_flags=tuple(data.get("deviation_flags", ())),
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "AlternatingPair":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# -- the two selection inequalities -------------------------------------------

def m_condition(c, m: int, s: Fraction, margin: Fraction, prec: int) -> bool:
    """c >= (m+1)^(-s) * (1 + margin)."""
    with mpmath.workprec(prec):
        return _mp(c) >= mpmath.power(m + 1, -_mp(s)) * (1 + _mp(margin))


def n_condition(norm_m, n: int, k_next: int, p: Fraction, margin: Fraction, prec: int) -> bool:
    """(norm_m + 1) * (1 + margin) <= n^(1/p) / k_next."""
    with mpmath.workprec(prec):
        return (_mp(norm_m) + 1) * (1 + _mp(margin)) * k_next <= mpmath.power(n, 1 / _mp(p))


def _bits_needed(log2_value) -> int:
    return max(1, int(mpmath.ceil(log2_value)) + 1)


def _least(pred, lower: int, guess: int) -> int:
    """Least integer n >= lower with pred(n), starting near ``guess``.

    pred is monotone (false then true); the guess comes from a closed form
    and is off by at most a step or two from rounding.
    """
    n = max(lower, guess)
    while not pred(n):
        n += 1
    while n > lower and pred(n - 1):
        n -= 1
    return n


def build_pair(p, q, K: int, margin=DEFAULT_MARGIN, max_stages: int = MAX_STAGES,
               max_index_bits: int = MAX_INDEX_BITS) -> AlternatingPair:
    p, q, margin = _frac(p), _frac(q), _frac(margin)
    if not (1 <= q < p):
        raise ValueError(f"need 1 <= q < p < inf, got p={p}, q={q}")
    if K < 1:
        raise ValueError("K must be at least 1")
    if K > max_stages:
        raise ValueError(f"K={K} exceeds the stage limit {max_stages}")
    s = 1 / q - 1 / p

    seg_w = [Segment(1, 1, PowerLaw(s))]
    seg_wt = [Segment(1, 1, PowerLaw(s))]
    stages = [(0, 1)]
    top_prec = 64

    for k in range(1, K):
        k_next = k + 1
        # "lead" follows j^(-s) up to m, then decays geometrically
        lead, hold = (seg_w, seg_wt) if k_next % 2 == 0 else (seg_wt, seg_w)
        n_k = stages[-1][1]

        with mpmath.workprec(64):
            c = _value_at(hold, n_k, 64)
            log2_m = (mpmath.log(1 + _mp(margin), 2) - mpmath.log(c, 2)) / _mp(s)
        bits = _bits_needed(log2_m)
        if bits > max_index_bits:
            raise PrecisionBudgetError(
                f"stage {k_next}: m would need about {bits} bits "
                f"(budget {max_index_bits})", stages, bits)
        prec = bits + 96
        top_prec = max(top_prec, prec)
        with mpmath.workprec(prec + 32):
            c = _value_at(hold, n_k, prec + 32)
            target = ((1 + _mp(margin)) / c) ** (1 / _mp(s))
            guess = int(mpmath.ceil(target)) - 1
        m = _least(lambda x: m_condition(c, x, s, margin, prec + 64), n_k + 1, guess)
        lead.append(Segment(n_k + 1, m, PowerLaw(s)))
        hold.append(Segment(n_k + 1, m, Constant(c)))

        lead_spec = WeightSpec(lead, q=float(q))
        with mpmath.workprec(64):
            approx = summing_lorentz_norm(m, lead_spec, prec=64)
            log2_n = _mp(p) * mpmath.log((approx + 1) * (1 + _mp(margin)) * k_next, 2)
        bits = _bits_needed(log2_n)
        if bits > max_index_bits:
            raise PrecisionBudgetError(
                f"stage {k_next}: n would need about {bits} bits "
                f"(budget {max_index_bits})", stages, bits)
        prec = max(prec, bits + 96)
        top_prec = max(top_prec, prec)
        norm_m = summing_lorentz_norm(m, lead_spec, prec=prec + 32)
        with mpmath.workprec(prec + 32):
            guess = int(mpmath.ceil(((norm_m + 1) * (1 + _mp(margin)) * k_next) ** _mp(p)))
        n = _least(lambda x: n_condition(norm_m, x, k_next, p, margin, prec + 64), m + 1, guess)

        with mpmath.workprec(prec + 32):
            c_geo = mpmath.power(m, -_mp(s))
        lead.append(Segment(m + 1, n, Geometric(c_geo)))
        hold.append(Segment(m + 1, n, PowerLaw(s)))
        stages.append((m, n))

    return AlternatingPair(
        p=p, q=q, s=s, stages=stages,
        w=WeightSpec(seg_w, q=float(q), p_reference=float(p)),
        wt=WeightSpec(seg_wt, q=float(q), p_reference=float(p)),
        precision=top_prec, margin=margin,
    )


def _value_at(segments, j, prec):
    return WeightSpec(segments).value(j, prec=prec)


# -- validation ---------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def check_structure(pair: AlternatingPair) -> Check:
    problems = []
    flat = [x for st in pair.stages for x in st]
    if not pair.stages or pair.stages[0] != (0, 1):
        problems.append("stages must start with (m_1, n_1) = (0, 1)")
    if any(a >= b for a, b in zip(flat, flat[1:])):
        problems.append("stage indices are not strictly interleaved")
    for name, spec in (("w", pair.w), ("wt", pair.wt)):
        problems += [f"{name}: {msg}" for msg in spec.validate()]
        if spec.n_max != pair.n_built:
            problems.append(f"{name} covers 1..{spec.n_max}, stages reach {pair.n_built}")
    return Check("structure", not problems, "; ".join(problems))


def _power_intervals(spec: WeightSpec, s: Fraction):
    with mpmath.workprec(128):
        target = _mp(s)
        for seg in spec.segments:
            if isinstance(seg.form, PowerLaw) and _mpf(seg.form.s) == target:
                yield seg.start, seg.end


def check_coverage(pair: AlternatingPair) -> Check:
    """Every n <= N_built has w_n = n^(-s) or wt_n = n^(-s), decided per segment."""
    spans = sorted(list(_power_intervals(pair.w, pair.s)) + list(_power_intervals(pair.wt, pair.s)))
    reach = 0
    for a, b in spans:
        if a > reach + 1:
            return Check("coverage", False, f"indices {reach + 1}..{a - 1} uncovered")
        reach = max(reach, b)
    if reach < pair.n_built:
        return Check("coverage", False, f"indices {reach + 1}..{pair.n_built} uncovered")
    return Check("coverage", True)


def singular_ratios(pair: AlternatingPair, which: str) -> list:
    """(k, n_k, ||s_{n_k}||_p / ||s_{n_k}||_{d(.,q)}) for the stages where the
    chosen sequence is the small one: even k for w, odd k for wt."""
    spec = {"w": pair.w, "wt": pair.wt}[which]
    parity = 0 if which == "w" else 1
    out = []
    prec = pair.precision + 32
    for k, (_, n) in enumerate(pair.stages, start=1):
        if k % 2 != parity:
            continue
        norm = summing_lorentz_norm(n, spec, prec=prec)
        with mpmath.workprec(prec):
            ratio = mpmath.power(n, 1 / _mp(pair.p)) / norm
        out.append((k, n, ratio))
    return out


def check_stage_inequalities(pair: AlternatingPair) -> Check:
    bad = []
    for which in ("w", "wt"):
        for k, n, ratio in singular_ratios(pair, which):
            if ratio < k * (1 - TOL):
                bad.append(f"k={k} ({which}): ratio {mpmath.nstr(ratio, 12)} < {k}")
    return Check("stage_inequalities", not bad, "; ".join(bad))


def check_minimality(pair: AlternatingPair) -> Check:
    """Re-evaluate both selection inequalities at m, m-1, n, n-1 for every stage.

    An index one below the chosen one must either break the inequality or
    fall at or below the previous stage index.
    """
    bad = []
    prec = 2 * pair.precision + 64
    for k in range(1, len(pair.stages)):
        k_next = k + 1
        lead, hold = (pair.w, pair.wt) if k_next % 2 == 0 else (pair.wt, pair.w)
        n_k = pair.stages[k - 1][1]
        m, n = pair.stages[k]
        c = hold.value(n_k, prec=prec)
        if not m_condition(c, m, pair.s, pair.margin, prec):
            bad.append(f"stage {k_next}: m={m} fails its inequality")
        if m - 1 > n_k and m_condition(c, m - 1, pair.s, pair.margin, prec):
            bad.append(f"stage {k_next}: m-1 also satisfies its inequality")
        norm_m = summing_lorentz_norm(m, lead, prec=prec)
        if not n_condition(norm_m, n, k_next, pair.p, pair.margin, prec):
            bad.append(f"stage {k_next}: n={n} fails its inequality")
        if n - 1 > m and n_condition(norm_m, n - 1, k_next, pair.p, pair.margin, prec):
            bad.append(f"stage {k_next}: n-1 also satisfies its inequality")
    return Check("minimality", not bad, "; ".join(bad))


def sample_vectors(n_samples: int, n_built: int, seed: int = 0,
                   max_support: int = SAMPLE_SUPPORT) -> list:
    """Random sparse vectors with support <= max_support inside {1..n_built}.

    Mixes uniform, heavy-tailed, signed and flat value profiles.
    """
    rng = np.random.default_rng(seed)
    pick = random.Random(seed)
    top = min(max_support, n_built)
    out = []
    for i in range(n_samples):
        k = int(rng.integers(1, top + 1))
        kind = i % 4
        if kind == 0:
            vals = rng.random(k)
        elif kind == 1:
            vals = rng.pareto(1.5, k) + 1e-3
        elif kind == 2:
            vals = rng.standard_normal(k)
        else:
            vals = np.ones(k) * rng.random()
        idx = set()
        while len(idx) < k:
            idx.add(pick.randint(1, n_built))
        out.append(dict(zip(sorted(idx), (float(v) if v != 0 else 1e-3 for v in vals))))
    return out


def check_samples(pair: AlternatingPair, n_samples: int, seed: int = 0) -> Check:
    """pair_norm(a) >= ||a||_p (1 - 1e-12) on random sparse vectors."""
    p = float(pair.p)
    worst = math.inf
    failures = 0
    for a in sample_vectors(n_samples, pair.n_built, seed):
        lhs, rhs = pair_norm(a, pair.w, pair.wt), lp_norm(a, p)
        if lhs < rhs * (1 - TOL):
            failures += 1
        worst = min(worst, lhs / rhs)
    detail = f"{n_samples} samples, min pair/lp ratio {worst:.12g}"
    if failures:
        detail += f", {failures} violations"
    return Check("sampled_domination", failures == 0, detail)


def check_indicators(pair: AlternatingPair, limit: int = INDICATOR_LIMIT) -> Check:
    """pair_norm(s_n) >= n^(1/p) for every n <= min(N_built, limit)."""
    n = min(pair.n_built, limit)
    q, p = float(pair.q), float(pair.p)
    v = pair.w.values(n) + pair.wt.values(n)
    lhs = np.cumsum(v) ** (1.0 / q)
    rhs = np.arange(1, n + 1, dtype=float) ** (1.0 / p)
    ok = lhs >= rhs * (1 - TOL)
    bad = int(np.count_nonzero(~ok))
    detail = f"n <= {n}, min ratio {float(np.min(lhs / rhs)):.12g}"
    if bad:
        detail += f", {bad} violations"
    return Check("indicator_domination", bad == 0, detail)


def validate_pair(pair: AlternatingPair, sample_budget: int = 1000, seed: int = 0,
                  indicator_limit: int = INDICATOR_LIMIT) -> ValidationReport:
    """Run every check; failures are report entries, never exceptions."""
    report = ValidationReport()
    report.checks.append(check_structure(pair))
    report.checks.append(check_coverage(pair))
    for fn in (check_stage_inequalities, check_minimality):
        try:
            report.checks.append(fn(pair))
        except Exception as exc:  # corrupted specs can break evaluation itself
            report.checks.append(Check(fn.__name__.replace("check_", ""), False, repr(exc)))
    for name, fn in (("sampled_domination", lambda: check_samples(pair, sample_budget, seed)),
                     ("indicator_domination", lambda: check_indicators(pair, indicator_limit))):
        try:
            report.checks.append(fn())
        except Exception as exc:
            report.checks.append(Check(name, False, repr(exc)))
    return report
