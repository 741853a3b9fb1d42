"""Domination constants between symmetric sequence norms.

For bases X and Y the quantity of interest is

    sup { ||a||_Y / ||a||_X : supp a ∈ S_xi, supp a ⊆ {1..N} }.

Every norm here is symmetric and monotone in |a|, so the ratio depends only
on the nonincreasing rearrangement of |a|.  Combined with spreading, a
support of size k is admissible exactly when the top interval
{N-k+1..N} is, so the search runs over nonnegative nonincreasing vectors of
each admissible length.  Results are lower bounds realized by a stored
witness, never certified suprema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .ordinal import OMEGA_1, as_index, format_ordinal
from .pairgen import (
    AlternatingPair,
    Check,
    PrecisionBudgetError,
    build_pair,
    check_indicators,
    check_samples,
    singular_ratios,
)
from .schreier import max_member_size, top_interval
from .seqspace import (
    WeightSpec,
    lorentz_norm,
    lp_norm,
    pair_norm,
    summing_lorentz_norm,
)

SCHEMA_DOMINATION = "schreierlab.domination/1"
SCHEMA_COUNTEREXAMPLE = "schreierlab.counterexample/1"
ASCENT_MAX_SIZE = 64
FLAT_DENSE_LIMIT = 10 ** 5
LISTED_SUPPORT_LIMIT = 10 ** 4
MAX_SEARCH_N = 10 ** 7


# -- norm descriptors ------------------------------------------------------------

@dataclass(frozen=True)
class Lp:
    p: float

    def norm(self, a) -> float:
        return lp_norm(a, self.p)


    def flat(self, k: int) -> float:
        return 1.0 if math.isinf(self.p) else float(k) ** (1.0 / self.p)

    def profile(self, k: int):
        return float(self.p), None if math.isinf(self.p) else np.ones(k)

    def describe(self) -> str:
        return "c0" if math.isinf(self.p) else f"lp:{self.p:g}"


def C0() -> Lp:
    return Lp(math.inf)


@dataclass(frozen=True)
class Lorentz:
    w: WeightSpec
    label: str = "lorentz"

    def norm(self, a) -> float:
        return lorentz_norm(a, self.w)


    def flat(self, k: int) -> float:
        return float(summing_lorentz_norm(k, self.w))

    def profile(self, k: int):
        return float(self.w.q), self.w.values(k)

    def breakpoints(self):
        return [seg.end for seg in self.w.segments]

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class PairSum:
    w: WeightSpec
    wt: WeightSpec
    label: str = "pairsum"

    def norm(self, a) -> float:
        return pair_norm(a, self.w, self.wt)


    def flat(self, k: int) -> float:
        q = float(self.w.q)
        return float(self.w.prefix_sum(k) + self.wt.prefix_sum(k)) ** (1.0 / q)

    def profile(self, k: int):
        return float(self.w.q), self.w.values(k) + self.wt.values(k)

    def breakpoints(self):
        return [seg.end for seg in self.w.segments] + [seg.end for seg in self.wt.segments]

    def describe(self) -> str:
        return self.label


def parse_norm(text: str):
    """``lp:2``, ``c0``, ``lorentz:pair.json#w``, ``lorentz:power:0.5:1:1000``
    (exponent, q, length) or ``pairsum:pair.json``."""
    kind, _, rest = text.partition(":")
    if kind == "c0":
        return C0()
    if kind == "lp":
        return Lp(float(rest))
    if kind == "lorentz":
        if rest.startswith("power:"):
            _, s, q, n = rest.split(":")
            return Lorentz(WeightSpec.power_law(float(s), int(n), q=float(q)), label=text)
        path, _, which = rest.partition("#")
        pair = AlternatingPair.load(path)
        return Lorentz(pair.wt if which == "wt" else pair.w, label=text)
    if kind == "pairsum":
        pair = AlternatingPair.load(rest)
        return PairSum(pair.w, pair.wt, label=text)
    raise ValueError(f"unknown norm {text!r}")


# -- domination search -------------------------------------------------------------

@dataclass
class DominationReport:
    constant_estimate: float
    witness: list  # nonincreasing values; empty when the witness is a summing vector
    witness_flat_size: Optional[int]
    witness_support: Optional[list]
    xi: str
    N: int
    method: str
    x: str = ""
    y: str = ""
    budget: int = 0
    seed: int = 0

    @property
    def witness_size(self) -> int:
        return self.witness_flat_size or len(self.witness)

    def witness_vector(self) -> dict:
        """The witness placed on its support (only for listed supports)."""
        support = self.witness_support or list(range(1, self.witness_size + 1))
        values = self.witness or [1.0] * self.witness_size
        return dict(zip(support, values))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_DOMINATION,
            "constant_estimate": self.constant_estimate,
            "witness": self.witness,
            "witness_flat_size": self.witness_flat_size,
            "witness_support": self.witness_support,
            "xi": self.xi,
            "N": self.N,
            "method": self.method,
            "x": self.x,
            "y": self.y,
            "budget": self.budget,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DominationReport":
        if data.get("schema") != SCHEMA_DOMINATION:
            raise ValueError(f"unexpected schema {data.get('schema')!r}")
        fields = {k: v for k, v in data.items() if k != "schema"}
        return cls(**fields)


def witness_ratio(report: DominationReport, X, Y) -> float:
    """Re-evaluate the stored witness."""
    if report.witness_flat_size:
        k = report.witness_flat_size
        return Y.flat(k) / X.flat(k)
    a = dict(enumerate(report.witness, start=1))
    return Y.norm(a) / X.norm(a)


def _from_increments(d):
    # a_i = sum_{j >= i} d_j is nonnegative and nonincreasing for d >= 0
    return np.cumsum(d[..., ::-1], axis=-1)[..., ::-1]


def _weighted(profile, x):
    """Value and x-gradient of (Σ x_i^r u_i)^(1/r) for nonincreasing x >= 0;
    a missing weight vector means the sup norm, which is x_0 here."""
    r, u = profile
    if u is None:
        g = np.zeros_like(x)
        g[0] = 1.0
        return x[0], g
    s = float(np.dot(x ** r, u))
    val = s ** (1.0 / r)
    if val == 0.0:
        return 0.0, np.zeros_like(x)
    return val, val ** (1.0 - r) * x ** (r - 1.0) * u


def _rows(profile, x):
    r, u = profile
    if u is None:
        return x[:, 0]
    return (x ** r @ u) ** (1.0 / r)


def _ascent(X, Y, k: int, starts: int, seed: int, refine: int = 4):
    """Random starts on nonincreasing vectors of length k, best few refined
    with L-BFGS-B on the increments."""
    px, py = X.profile(k), Y.profile(k)
    rng = np.random.default_rng([seed, k])
    d = rng.exponential(size=(starts, k)) * (rng.random((starts, k)) < 0.7)
    d[:, 0] += 1e-3
    x = _from_increments(d)
    x = x / x[:, :1]
    ratios = _rows(py, x) / _rows(px, x)
    order = np.argsort(-ratios, kind="stable")[:refine]
    best_val, best_x = float(ratios[order[0]]), x[order[0]]

    def neg_ratio(dv):
        xv = _from_increments(dv)
        nx, gx = _weighted(px, xv)
        ny, gy = _weighted(py, xv)
        if nx <= 0:
            return 0.0, np.zeros_like(dv)
        grad_x = (gy * nx - ny * gx) / nx ** 2
        # x_i = Σ_{j>=i} d_j, so dR/dd_j = Σ_{i<=j} dR/dx_i
        return -ny / nx, -np.cumsum(grad_x)

    for i in order:
        res = minimize(neg_ratio, d[i], jac=True, method="L-BFGS-B",
                       bounds=[(0, None)] * k, options={"maxiter": 200})
        xv = _from_increments(res.x)
        if xv[0] > 0 and -res.fun > best_val:
            best_val, best_x = float(-res.fun), xv / xv[0]
    return best_val, best_x


def _flat_sizes(X, Y, kmax: int) -> list:
    sizes = set(range(1, min(kmax, FLAT_DENSE_LIMIT) + 1))
    j = 1
    while j <= kmax:
        sizes.add(j)
        j *= 2
    for norm in (X, Y):
        for b in getattr(norm, "breakpoints", lambda: [])():
            for c in (b - 1, b, b + 1):
                if 1 <= c <= kmax:
                    sizes.add(c)
    sizes.add(kmax)
    return sorted(sizes)


def _flat_ratios(X, Y, sizes):
    dense = [k for k in sizes if k <= FLAT_DENSE_LIMIT]
    out = {}
    if dense:
        top = dense[-1]
        ks = np.arange(1, top + 1, dtype=float)
        yv = _flat_dense(Y, top, ks)
        xv = _flat_dense(X, top, ks)
        for k in dense:
            out[k] = float(yv[k - 1] / xv[k - 1])
    for k in sizes:
        if k > FLAT_DENSE_LIMIT:
            out[k] = Y.flat(k) / X.flat(k)
    return out


def _flat_dense(norm, top, ks):
    if isinstance(norm, Lp):
        return np.ones_like(ks) if math.isinf(norm.p) else ks ** (1.0 / norm.p)
    if isinstance(norm, Lorentz):
        return np.cumsum(norm.w.values(top)) ** (1.0 / float(norm.w.q))
    v = norm.w.values(top) + norm.wt.values(top)
    return np.cumsum(v) ** (1.0 / float(norm.w.q))


def domination_constant(X, Y, xi=OMEGA_1, N: int = 20, budget: int = 1000,
                        seed: int = 0, max_n: int = MAX_SEARCH_N,
                        ascent_max_size: int = ASCENT_MAX_SIZE) -> DominationReport:
    """Best found lower bound for the S_xi-restricted domination constant of
    Y by X on supports inside {1..N}.

    ``budget`` random starts are drawn for each support size up to
    ``ascent_max_size``; each size uses its own seed so results do not
    depend on N beyond the set of admissible sizes.
    """
    xi = as_index(xi)
    if N < 1:
        raise ValueError("N must be positive")
    if xi is not OMEGA_1 and N > max_n:
        raise ValueError(f"N={N} exceeds the search limit {max_n}")
    kmax = max_member_size(xi, N) if xi is not OMEGA_1 else N

    flat = _flat_ratios(X, Y, _flat_sizes(X, Y, kmax))
    best_k = max(flat, key=lambda k: (flat[k], k))
    best = (flat[best_k], None, best_k, "flat-family")

    if budget > 0:
        for k in range(1, min(kmax, ascent_max_size) + 1):
            val, vec = _ascent(X, Y, k, budget, seed)
            if val > best[0] * (1 + 1e-12):
                best = (val, vec, k, "random-restart-ascent")

    _, vec, k, method = best
    if vec is None:
        witness, flat_size = [], k
    else:
        witness = [float(v) for v in vec if v > 0]
        flat_size = None
        k = len(witness)
    support = None
    if k <= LISTED_SUPPORT_LIMIT:
        support = list(top_interval(k, N)) if xi is not OMEGA_1 else list(range(1, k + 1))
    report = DominationReport(
        constant_estimate=0.0, witness=witness, witness_flat_size=flat_size,
        witness_support=support, xi=format_ordinal(xi), N=N, method=method,
        x=X.describe(), y=Y.describe(), budget=budget, seed=seed,
    )
    report.constant_estimate = witness_ratio(report, X, Y)
    return report


# -- singular witnesses and the counterexample -----------------------------------

def singular_witnesses(pair: AlternatingPair, which: str) -> list:
    """(k, n_k, ratio) with ratio = ||s_{n_k}||_p / ||s_{n_k}||_{d(.,q)} >= k."""
    return [(k, n, float(r)) for k, n, r in singular_ratios(pair, which)]


@dataclass
class CounterexampleReport:
    p: float
    q: float
    K: int
    samples: int
    seed: int
    stages: list
    witnesses_w: list
    witnesses_wt: list
    checks: list = field(default_factory=list)
    verdict: str = "FAIL"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_COUNTEREXAMPLE,
            "p": self.p, "q": self.q, "K": self.K,
            "samples": self.samples, "seed": self.seed,
            "stages": [{"m": m, "n": n} for m, n in self.stages],
            "witnesses_w": [{"k": k, "n_k": n, "ratio": r} for k, n, r in self.witnesses_w],
            "witnesses_wt": [{"k": k, "n_k": n, "ratio": r} for k, n, r in self.witnesses_wt],
            "checks": [c.to_json() for c in self.checks],
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CounterexampleReport":
        if data.get("schema") != SCHEMA_COUNTEREXAMPLE:
            raise ValueError(f"unexpected schema {data.get('schema')!r}")
        wit = lambda rows: [(r["k"], r["n_k"], r["ratio"]) for r in rows]  # noqa: E731
        return cls(
            p=data["p"], q=data["q"], K=data["K"], samples=data["samples"], seed=data["seed"],
            stages=[(st["m"], st["n"]) for st in data["stages"]],
            witnesses_w=wit(data["witnesses_w"]), witnesses_wt=wit(data["witnesses_wt"]),
            checks=[Check(**c) for c in data["checks"]], verdict=data["verdict"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def counterexample_report(p, q, K: int, samples: int = 10000, seed: int = 0,
                          pair: Optional[AlternatingPair] = None,
                          **build_options) -> CounterexampleReport:
    """Finite-scale shadow of the failure of additivity.

    Each summand is shown singular through summing vectors with
    ratio >= k, and the direct sum is shown to 1-dominate l_p on samples
    and indicator vectors.  The verdict is PASS iff everything holds.
    """
    if pair is None:
        try:
            pair = build_pair(p, q, K, **build_options)
        except PrecisionBudgetError as exc:
            # an unbuildable pair is a failed reproduction, not a usage error
            return CounterexampleReport(
                p=float(p), q=float(q), K=K, samples=samples, seed=seed,
                stages=exc.stages, witnesses_w=[], witnesses_wt=[],
                checks=[Check("build", False, str(exc))],
            )
    ww = singular_witnesses(pair, "w")
    wt = singular_witnesses(pair, "wt")
    tol = 1e-12
    bad_w = [k for k, _, r in ww if r < k * (1 - tol)]
    bad_wt = [k for k, _, r in wt if r < k * (1 - tol)]
    checks = [
        Check("singular_w", not bad_w, f"even stages {[k for k, _, _ in ww]}"
              + (f", failing {bad_w}" if bad_w else "")),
        Check("singular_wt", not bad_wt, f"odd stages {[k for k, _, _ in wt]}"
              + (f", failing {bad_wt}" if bad_wt else "")),
        check_samples(pair, samples, seed),
        check_indicators(pair),
    ]
    report = CounterexampleReport(
        p=float(pair.p), q=float(pair.q), K=pair.K, samples=samples, seed=seed,
        stages=list(pair.stages), witnesses_w=ww, witnesses_wt=wt, checks=checks,
    )
    report.verdict = "PASS" if all(c.passed for c in checks) else "FAIL"
    return report
