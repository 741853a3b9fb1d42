"""Schreier families S_xi for xi below w^w, plus w_1 (all finite sets).

Finite sets are plain tuples of strictly increasing positive integers.
Membership follows the usual recursion: S_0 is the singletons, a successor
family S_{z+1} collects admissible unions ``n <= F_1 < ... < F_n`` of sets
from S_z, and a limit family S_xi is ``{F in S_{z_n} : n <= min F}`` along
the fundamental sequence of :func:`schreierlab.ordinal.fundamental`.
The empty set belongs to every family.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .ordinal import OMEGA_1, FamilyIndex, add, as_index, fundamental

MAX_ENUM_N = 20


class ResourceLimitError(RuntimeError):
    """Raised instead of silently truncating an enumeration."""


def finite_set(elements: Iterable[int]) -> tuple:
    F = tuple(elements)
    for a, b in zip(F, F[1:]):
        if a >= b:
            raise ValueError(f"{F} is not strictly increasing")
    if F and F[0] < 1:
        raise ValueError(f"{F} contains a non-positive integer")
    return F


def _check_limit(N: int, limit: Optional[int]) -> None:
    limit = MAX_ENUM_N if limit is None else limit
    if N < 1:
        raise ValueError("N must be positive")
    if N > limit:
        raise ResourceLimitError(f"N={N} exceeds enumeration limit {limit}")


# -- membership -------------------------------------------------------------

@lru_cache(maxsize=None)
def _member(F: tuple, xi: FamilyIndex) -> bool:
    if not F or xi is OMEGA_1:
        return True
    if xi.is_zero:
        return len(F) == 1
    if xi.is_successor:
        zeta = xi.predecessor()
        allowed = F[0]
        blocks = 0
        i = 0
        while i < len(F):
            blocks += 1
            if blocks > allowed:
                return False
            # hereditary: once a prefix fails, every longer prefix fails
            j = i + 1
            while j < len(F) and _member(F[i:j + 1], zeta):
                j += 1
            i = j
        return True
    return any(_member(F, fundamental(xi, n)) for n in range(1, F[0] + 1))


def is_member(F: Sequence[int], xi) -> bool:
    """True iff the finite set ``F`` lies in S_xi."""
    return _member(finite_set(F), as_index(xi))


@lru_cache(maxsize=None)
def _member_exhaustive(F: tuple, xi: FamilyIndex) -> bool:
    if not F or xi is OMEGA_1:
        return True
    if xi.is_zero:
        return len(F) == 1
    if xi.is_successor:
        zeta = xi.predecessor()
        for cuts in _interval_partitions(len(F)):
            if len(cuts) - 1 > F[0]:
                continue
            if all(_member_exhaustive(F[a:b], zeta) for a, b in zip(cuts, cuts[1:])):
                return True
        return False
    return any(_member_exhaustive(F, fundamental(xi, n)) for n in range(1, F[0] + 1))


def is_member_exhaustive(F: Sequence[int], xi) -> bool:
    """Brute-force membership: tries every decomposition into successive blocks."""
    return _member_exhaustive(finite_set(F), as_index(xi))


def _interval_partitions(length: int) -> Iterator[tuple]:
    inner = range(1, length)
    for r in range(length):
        for cut in combinations(inner, r):
            yield (0,) + cut + (length,)


def clear_caches() -> None:
    _member.cache_clear()
    _member_exhaustive.cache_clear()


# -- enumeration ------------------------------------------------------------

def iter_members(xi, N: int, limit: Optional[int] = None) -> Iterator[tuple]:
    """All members of S_xi inside {1..N}, depth first in lexicographic order."""
    _check_limit(N, limit)
    xi = as_index(xi)

    def grow(F):
        yield F
        start = F[-1] + 1 if F else 1
        for x in range(start, N + 1):
            G = F + (x,)
            if _member(G, xi):
                yield from grow(G)

    yield from grow(())


def enumerate_maximal(xi, N: int, limit: Optional[int] = None) -> list:
    """Members of S_xi inside {1..N} with no strict superset in S_xi ∩ 2^{1..N}."""
    xi = as_index(xi)
    if xi is OMEGA_1:
        raise ValueError("enumeration needs a countable index")
    out = []
    for F in iter_members(xi, N, limit):
        rest = (x for x in range(1, N + 1) if x not in F)
        if not any(_member(tuple(sorted(F + (x,))), xi) for x in rest):
            out.append(F)
    return sorted(out)


def max_member_size(xi, N: int) -> int:
    """Largest |F| with F ∈ S_xi and F ⊆ {1..N}.

    By spreading, a k-set exists iff the top interval {N-k+1..N} is a member.
    """
    xi = as_index(xi)
    if xi is OMEGA_1:
        return N
    k = 0
    while k < N and _member(tuple(range(N - k, N + 1)), xi):
        k += 1
    return k


def top_interval(k: int, N: int) -> tuple:
    return tuple(range(N - k + 1, N + 1))


# -- family operations ------------------------------------------------------

def apply_spread(E: Sequence[int], M: Sequence[int]) -> tuple:
    """The image (m_i)_{i in E} of E under the increasing sequence M."""
    E = finite_set(E)
    if E and E[-1] > len(M):
        raise ValueError(f"prefix of M has length {len(M)}, need {E[-1]}")
    return tuple(M[i - 1] for i in E)


def combine_member(E_list: Sequence[Sequence[int]], xi, zeta) -> bool:
    """Whether the successive blocks witness ⋃E_i ∈ S_xi[S_zeta]."""
    blocks = [finite_set(E) for E in E_list]
    if any(not E for E in blocks):
        raise ValueError("blocks must be nonempty")
    for a, b in zip(blocks, blocks[1:]):
        if a[-1] >= b[0]:
            raise ValueError("blocks are not successive")
    xi, zeta = as_index(xi), as_index(zeta)
    if not all(_member(E, zeta) for E in blocks):
        return False
    return _member(tuple(E[0] for E in blocks), xi)


def in_composite(G: Sequence[int], xi, zeta) -> bool:
    """Whether G ∈ S_xi[S_zeta] for some decomposition into successive blocks."""
    G = finite_set(G)
    if not G:
        return True
    xi, zeta = as_index(xi), as_index(zeta)
    for cuts in _interval_partitions(len(G)):
        blocks = [G[a:b] for a, b in zip(cuts, cuts[1:])]
        if all(_member(E, zeta) for E in blocks) and _member(tuple(E[0] for E in blocks), xi):
            return True
    return False


def double(A: Sequence[int]) -> tuple:
    """The set {2n, 2n+2 : n ∈ A}."""
    A = finite_set(A)
    return tuple(sorted({2 * n for n in A} | {2 * n + 2 for n in A}))


def threshold(xi, zeta, N: int, limit: Optional[int] = None) -> Optional[int]:
    """Smallest d such that every S ∈ S_xi inside {1..N} with min S >= d is in S_zeta.

    Returns None when no d <= N works.  This only sees sets inside {1..N},
    so it is a lower estimate of the true threshold.
    """
    xi, zeta = as_index(xi), as_index(zeta)
    d = 1
    for S in iter_members(xi, N, limit):
        if S and S[0] >= d and not _member(S, zeta):
            d = S[0] + 1
    return d if d <= N else None


def composite_violations(L: Sequence[int], xi, zeta, must_contain: Optional[int] = None) -> list:
    """Sets G ⊆ {1..len L} in S_xi[S_zeta] whose image L(G) falls outside S_{zeta+xi}."""
    xi, zeta = as_index(xi), as_index(zeta)
    target = add(zeta, xi)
    n = len(L)
    bad = []
    positions = range(1, n + 1)
    for r in range(1, n + 1):
        for G in combinations(positions, r):
            if must_contain is not None and must_contain not in G:
                continue
            if in_composite(G, xi, zeta) and not _member(apply_spread(G, L), target):
                bad.append(G)
    return bad


def find_L(xi, zeta, N: int, limit: Optional[int] = None) -> list:
    """Greedily grow L ⊆ {1..N} with S_xi[S_zeta](L) ⊆ S_{zeta+xi}.

    Each new element is the smallest candidate for which every composite
    set using it maps into the target family; the search stops when no
    candidate up to N works, so the result may be short.
    """
    _check_limit(N, limit)
    L: list = []
    cand = 1
    while cand <= N:
        trial = L + [cand]
        if not composite_violations(trial, xi, zeta, must_contain=len(trial)):
            L = trial
        cand += 1
    return L
