"""Norms on finitely supported sequences: l_p, c_0, Lorentz d(w,q) and the
l_q-sum of two Lorentz spaces.

Weights are piecewise-symbolic (:class:`WeightSpec`) so that prefix sums up
to astronomically large indices can be evaluated without materializing
arrays.  Everything that touches huge indices goes through mpmath; the plain
vector norms work in double precision with compensated (``math.fsum``)
summation.
"""

from __future__ import annotations

import bisect
import csv
import math
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

import mpmath
import numpy as np

DIRECT_SUM_LIMIT = 10 ** 6
DOUBLE_PREC = 53


class WeightCoverageError(ValueError):
    pass


class InvalidWeightError(ValueError):
    pass


# -- coefficient vectors ----------------------------------------------------

def coeff_vector(a) -> dict:
    """Normalize ``a`` to a sparse ``{index: value}`` dict.

    Sequences are read as coordinates 1, 2, 3, ...; zero entries are dropped.
    """
    if isinstance(a, Mapping):
        items = a.items()
    else:
        items = enumerate(a, start=1)
    out = {}
    for i, v in items:
        i = int(i)
        if i < 1:
            raise ValueError(f"index {i} is not positive")
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value at index {i}")
        if v != 0.0:
            out[i] = v
    return out


def parse_vector(text: str) -> dict:
    """Parse ``"1:1,2:0.5"`` into a coefficient vector."""
    entries = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        i, _, v = part.partition(":")
        if int(i) in entries:
            raise ValueError(f"index {i} given twice")
        entries[int(i)] = float(v)
    return coeff_vector(entries)


def rearrange(a) -> list:
    """Nonincreasing rearrangement of |a|, keeping zeros of a dense input."""
    values = a.values() if isinstance(a, Mapping) else a
    return sorted((abs(float(v)) for v in values), reverse=True)


def lp_norm(a, p: float) -> float:
    if p < 1:
        raise ValueError("p must be at least 1")
    x = np.abs(np.fromiter(coeff_vector(a).values(), dtype=float))
    if x.size == 0:
        return 0.0
    if math.isinf(p):
        return float(x.max())
    top = x.max()
    # scale to avoid overflow in x**p
    return float(top * math.fsum((x / top) ** p) ** (1.0 / p))


# -- weight specifications --------------------------------------------------

def _mpf(x):
    """Convert at the current working precision; Fractions and "a/b" strings
    stay exact until this point."""
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, str) and "/" in x:
        x = Fraction(x)
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass(frozen=True)
class PowerLaw:
    """w_j = j^(-s)."""

    s: object

    kind = "power"

    def value(self, j):
        return mpmath.power(mpmath.mpf(j), -_mpf(self.s))

    def float_values(self, lo, hi):
        return np.arange(lo, hi + 1, dtype=float) ** (-float(self.s))


@dataclass(frozen=True)
class Constant:
    c: object

    kind = "constant"

    def value(self, j):
        return +_mpf(self.c)

    def float_values(self, lo, hi):
        return np.full(hi - lo + 1, float(self.c))


@dataclass(frozen=True)
class Geometric:
    """w_j = c * 2^(-j), with j the absolute index."""

    c: object

    kind = "geometric"

    def value(self, j):
        return mpmath.ldexp(_mpf(self.c), -int(j))

    def float_values(self, lo, hi):
        j = np.arange(lo, hi + 1, dtype=float)
        with np.errstate(under="ignore"):
            return float(self.c) * np.exp2(-j)


FORMS = {cls.kind: cls for cls in (PowerLaw, Constant, Geometric)}


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    form: Union[PowerLaw, Constant, Geometric]

    def __len__(self):
        return self.end - self.start + 1


@dataclass
class WeightSpec:
    """A nonincreasing weight sequence on {1..n_max}, given segment by segment."""

    segments: list
    q: float = 1.0
    p_reference: Optional[float] = None
    _starts: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.segments = list(self.segments)
        self._starts = [seg.start for seg in self.segments]

    @classmethod
    def power_law(cls, s, n_max: int, q: float = 1.0, p_reference=None) -> "WeightSpec":
        return cls([Segment(1, n_max, PowerLaw(s))], q=q, p_reference=p_reference)

    @property
    def n_max(self) -> int:
        return self.segments[-1].end if self.segments else 0

    def segment_index(self, j: int) -> int:
        if not self.segments or j < 1 or j > self.n_max:
            raise WeightCoverageError(f"index {j} outside 1..{self.n_max}")
        i = bisect.bisect_right(self._starts, j) - 1
        seg = self.segments[i]
        if not seg.start <= j <= seg.end:
            raise WeightCoverageError(f"index {j} falls in a gap between segments")
        return i

    def value(self, j: int, prec: Optional[int] = None):
        """w_j, as an mpf when ``prec`` is given, else a float."""
        form = self.segments[self.segment_index(j)].form
        with mpmath.workprec(prec or DOUBLE_PREC + 11):
            v = form.value(j)
        return v if prec else float(v)

    def values(self, n: int) -> np.ndarray:
        """Float array (w_1, ..., w_n)."""
        self.require(n)
        parts = []
        for seg in self.segments:
            if seg.start > n:
                break
            parts.append(seg.form.float_values(seg.start, min(seg.end, n)))
        return np.concatenate(parts) if parts else np.empty(0)

    def require(self, n: int) -> None:
        if n > self.n_max:
            raise WeightCoverageError(f"weights cover 1..{self.n_max}, need {n}")

    def prefix_sum(self, n: int, prec: Optional[int] = None):
        """Σ_{j<=n} w_j evaluated segment by segment."""
        self.require(n)
        if n < 1:
            return mpmath.mpf(0) if prec else 0.0
        work = prec or DOUBLE_PREC
        parts = []
        with mpmath.workprec(work + 20):
            for seg in self.segments:
                if seg.start > n:
                    break
                parts.append(segment_sum(seg.form, seg.start, min(seg.end, n), prec=work))
            total = mpmath.fsum(parts)
            return total if prec else float(total)

    def validate(self, tol: float = 1e-12) -> list:
        """Finite checks only: coverage from 1, w_1 = 1, values in (0, 1],
        nonincreasing inside and across segments.  Whether w lies outside
        l_1 cannot be decided from a finite prefix and is not checked."""
        problems = []
        if not self.segments:
            return ["no segments"]
        if self.segments[0].start != 1:
            problems.append("first segment does not start at 1")
        with mpmath.workprec(128):
            for i, seg in enumerate(self.segments):
                if seg.end < seg.start:
                    problems.append(f"segment {i} is empty")
                    continue
                if i and seg.start != self.segments[i - 1].end + 1:
                    problems.append(f"segment {i} is not contiguous with segment {i - 1}")
                form = seg.form
                if isinstance(form, PowerLaw) and _mpf(form.s) < 0:
                    problems.append(f"segment {i}: negative power-law exponent increases")
                if isinstance(form, (Constant, Geometric)) and _mpf(form.c) <= 0:
                    problems.append(f"segment {i}: non-positive constant")
                first, last = form.value(seg.start), form.value(seg.end)
                if first > 1 + tol:
                    problems.append(f"segment {i}: value {mpmath.nstr(first, 8)} above 1")
                if last <= 0:
                    problems.append(f"segment {i}: non-positive value")
                if i:
                    prev = self.segments[i - 1]
                    before = prev.form.value(prev.end)
                    if first > before * (1 + tol):
                        problems.append(
                            f"increase across boundary {prev.end}->{seg.start}")
            if self.segments[0].start == 1:
                w1 = self.segments[0].form.value(1)
                if abs(w1 - 1) > tol:
                    problems.append(f"w_1 = {mpmath.nstr(w1, 12)}, expected 1")
        return problems

    def check(self) -> "WeightSpec":
        problems = self.validate()
        if problems:
            raise InvalidWeightError("; ".join(problems))
        return self

    def to_json(self) -> list:
        return [segment_to_json(seg) for seg in self.segments]

    @classmethod
    def from_json(cls, data: Sequence[dict], q: float, p_reference=None) -> "WeightSpec":
        return cls([segment_from_json(d) for d in data], q=q, p_reference=p_reference)


def _num_to_str(x) -> str:
    """Fractions as "a/b", mpf values as their exact decimal expansion
    (finite, since the mantissa is scaled by a power of two)."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, mpmath.mpf):
        if not x:
            return "0"
        neg, man, exp, _ = x._mpf_
        man, exp = int(man), int(exp)
        sign = "-" if neg else ""
        if exp >= 0:
            return sign + str(man << exp)
        digits = str(man * 5 ** -exp).rjust(-exp + 1, "0")
        return f"{sign}{digits[:exp]}.{digits[exp:]}"
    return repr(float(x))


def _str_to_num(text: str):
    if "/" in text:
        return Fraction(text)
    exact = Fraction(text)
    den = exact.denominator
    if den & (den - 1) == 0:
        # dyadic: rebuild the mpf without rounding
        raw = mpmath.libmp.from_man_exp(exact.numerator, 1 - den.bit_length())
        return mpmath.mp.make_mpf(raw)
    return mpmath.mpf(float(text))


def segment_to_json(seg: Segment) -> dict:
    form = seg.form
    d = {"start": seg.start, "end": seg.end, "form": form.kind}
    if isinstance(form, PowerLaw):
        d["s"] = _num_to_str(form.s)
    else:
        d["c"] = _num_to_str(form.c)
    return d


def segment_from_json(d: Mapping) -> Segment:
    kind = d["form"]
    if kind not in FORMS:
        raise ValueError(f"unknown segment form {kind!r}")
    arg = d["s"] if kind == "power" else d["c"]
    return Segment(int(d["start"]), int(d["end"]), FORMS[kind](_str_to_num(str(arg))))


# -- power sums --------------------------------------------------------------

@lru_cache(maxsize=64)
def _em_coefficients(count: int, prec: int) -> tuple:
    """B_{2k}/(2k)! for k = 1..count; |B_{2k}|/(2k)! is also the
    remainder constant 2 zeta(2k)/(2 pi)^(2k)."""
    with mpmath.workprec(prec):
        return tuple(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k)
                     for k in range(1, count + 1))


def em_power_sum(s, a: int, b: int, rel_tol=None, prec: int = 64):
    """Σ_{j=a}^{b} j^(-s) by Euler-Maclaurin, with a certified error bound.

    Returns ``(value, bound)`` as mpf numbers where ``|true - value| <= bound``
    up to rounding at the working precision.  The first terms are summed
    directly until the asymptotic expansion is accurate enough.
    """
    if a < 1 or b < a:
        raise ValueError(f"bad range [{a}, {b}]")
    work = prec + 30
    with mpmath.workprec(work):
        s = _mpf(s)
        tol = _mpf(rel_tol) if rel_tol is not None else mpmath.ldexp(1, -prec)
        if s == 0:
            return mpmath.mpf(b - a + 1), mpmath.mpf(0)
        # ~prec/3 terms suffice once a0 is past the factorial blow-up point
        coeffs = _em_coefficients(max(8, prec // 3), work)
        head = 0
        direct = mpmath.mpf(0)
        while True:
            a0 = a + head
            if a0 > b:
                return direct, mpmath.mpf(0)
            A, B = mpmath.mpf(a0), mpmath.mpf(b)
            if s == 1:
                integral = mpmath.log(B / A)
            else:
                integral = (mpmath.power(B, 1 - s) - mpmath.power(A, 1 - s)) / (1 - s)
            base = direct + integral + (mpmath.power(A, -s) + mpmath.power(B, -s)) / 2
            corr = mpmath.mpf(0)
            best = None
            # f^(r)(x) = (-1)^r (s)_r x^(-s-r); track (s)_r and the powers incrementally
            rising = s
            powA, powB = mpmath.power(A, -s - 1), mpmath.power(B, -s - 1)
            invA2, invB2 = 1 / (A * A), 1 / (B * B)
            for k, coef in enumerate(coeffs, start=1):
                r = 2 * k - 1
                diff = rising * (powA - powB)  # f^(r)(B) - f^(r)(A), r odd
                corr += coef * diff
                bound = abs(coef) * abs(diff)
                value = base + corr
                if bound <= tol * abs(value):
                    return value, bound
                if best is not None and bound > best:
                    break
                best = bound
                rising *= (s + r) * (s + r + 1)
                powA *= invA2
                powB *= invB2
            new_head = max(2 * head, 64)
            direct += mpmath.fsum(mpmath.power(j, -s) for j in range(a0, min(a + new_head, b + 1)))
            head = new_head


def power_sum(s, a: int, b: int, prec: Optional[int] = None, method: str = "auto"):
    """Σ_{j=a}^{b} j^(-s).

    ``method`` is ``"direct"`` (compensated summation), ``"em"``
    (Euler-Maclaurin) or ``"auto"`` (direct below ``DIRECT_SUM_LIMIT`` terms
    in double precision, Euler-Maclaurin otherwise).
    """
    if b < a:
        return mpmath.mpf(0) if prec else 0.0
    if method == "auto":
        method = "direct" if prec is None and b - a + 1 < DIRECT_SUM_LIMIT else "em"
    if method == "direct":
        if prec is None:
            j = np.arange(a, b + 1, dtype=float)
            return math.fsum(j ** (-float(s)))
        with mpmath.workprec(prec + 20):
            return mpmath.fsum(mpmath.power(j, -_mpf(s)) for j in range(a, b + 1))
    if method != "em":
        raise ValueError(f"unknown method {method!r}")
    work = prec or DOUBLE_PREC
    tol = 1e-12 if prec is None else None
    value, _ = em_power_sum(s, a, b, rel_tol=tol, prec=max(work, 64))
    return value if prec else float(value)


def segment_sum(form, lo: int, hi: int, prec: Optional[int] = None):
    """Σ_{j=lo}^{hi} of a single segment form, in closed form where possible."""
    if hi < lo:
        return mpmath.mpf(0)
    work = prec or DOUBLE_PREC
    with mpmath.workprec(work + 20):
        if isinstance(form, Constant):
            return _mpf(form.c) * (hi - lo + 1)
        if isinstance(form, Geometric):
            # c * (2^(1-lo) - 2^(-hi))
            return _mpf(form.c) * (mpmath.ldexp(1, 1 - lo) - mpmath.ldexp(1, -hi))
        return _mpf(power_sum(form.s, lo, hi, prec=prec))


# -- Lorentz norms ------------------------------------------------------------

def lorentz_norm(a, w: WeightSpec) -> float:
    """(Σ a*_n^q w_n)^(1/q) with a* the nonincreasing rearrangement of |a|."""
    x = np.array(rearrange(coeff_vector(a)))
    if x.size == 0:
        return 0.0
    wts = w.values(x.size)
    q = float(w.q)
    top = x[0]
    return float(top * math.fsum((x / top) ** q * wts) ** (1.0 / q))


def lorentz_norm_permutation_sup(a, w: WeightSpec) -> float:
    """max over all orderings σ of (Σ |a_σ(n)|^q w_n)^(1/q); brute force."""
    from itertools import permutations

    x = [abs(v) for v in coeff_vector(a).values()]
    if not x:
        return 0.0
    wts = w.values(len(x))
    q = float(w.q)
    best = max(math.fsum(v ** q * wj for v, wj in zip(perm, wts))
               for perm in permutations(x))
    return best ** (1.0 / q)


def _same_q(w: WeightSpec, wt: WeightSpec) -> float:
    if float(w.q) != float(wt.q):
        raise ValueError(f"q mismatch: {w.q} vs {wt.q}")
    return float(w.q)


def pair_norm(a, w: WeightSpec, wt: WeightSpec) -> float:
    """Norm in the l_q-sum of d(w,q) and d(wt,q): (Σ a*^q (w_n + wt_n))^(1/q)."""
    q = _same_q(w, wt)
    x = np.array(rearrange(coeff_vector(a)))
    if x.size == 0:
        return 0.0
    v = w.values(x.size) + wt.values(x.size)
    top = x[0]
    return float(top * math.fsum((x / top) ** q * v) ** (1.0 / q))


def pair_norm_direct(a, w: WeightSpec, wt: WeightSpec) -> float:
    """Same quantity as :func:`pair_norm`, as the l_q norm of the two Lorentz norms."""
    q = _same_q(w, wt)
    return (lorentz_norm(a, w) ** q + lorentz_norm(a, wt) ** q) ** (1.0 / q)


def summing_lorentz_norm(n: int, w: WeightSpec, prec: Optional[int] = None):
    """Norm of the summing vector s_n = (1, ..., 1, 0, ...) in d(w,q)."""
    if n < 1:
        raise ValueError("n must be positive")
    total = w.prefix_sum(n, prec=prec)
    if prec:
        with mpmath.workprec(prec):
            return mpmath.power(total, 1 / _mpf(w.q))
    return total ** (1.0 / float(w.q))


# -- export -----------------------------------------------------------------

def weight_rows(w: WeightSpec, wt: WeightSpec, n: int) -> Iterable[tuple]:
    """Rows (n, w_n, wt_n, segment index of w) for n = 1..n."""
    vw, vt = w.values(n), wt.values(n)
    for j in range(1, n + 1):
        yield j, float(vw[j - 1]), float(vt[j - 1]), w.segment_index(j)


def export_weights_csv(w: WeightSpec, wt: WeightSpec, n: int, path,
                       header=("n", "w_n", "wtilde_n", "segment_id")) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in weight_rows(w, wt, n):
            writer.writerow([row[0], repr(row[1]), repr(row[2]), row[3]])
