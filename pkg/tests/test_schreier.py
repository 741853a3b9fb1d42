from itertools import combinations

import pytest

from schreierlab import schreier as sc
from schreierlab.ordinal import OMEGA, OMEGA_1, Ordinal, parse_ordinal

UNIVERSE = range(1, 13)
ALL_SETS = [F for r in range(13) for F in combinations(UNIVERSE, r)]
INDICES = ["1", "2", "3", "w", "w+1", "w*2"]


@pytest.fixture(scope="module")
def members():
    return {x: {F for F in ALL_SETS if sc.is_member(F, x)} for x in INDICES}


def test_membership_examples():
    assert sc.is_member((3, 5, 9), 1)
    assert not sc.is_member((2, 3, 4), 1)
    assert sc.is_member((2, 3, 4, 5), 2)
    assert sc.is_member((5, 6, 7, 8, 9, 10), OMEGA)
    assert sc.is_member((4, 5, 6, 7, 8), OMEGA)
    assert not sc.is_member((1, 2), OMEGA)


def test_empty_set_and_sentinel():
    for x in INDICES + ["0", "w^2"]:
        assert sc.is_member((), x)
    assert sc.is_member(tuple(range(1, 40)), OMEGA_1)
    assert sc.is_member((7,), 0) and not sc.is_member((7, 8), 0)


def test_finite_set_validation():
    with pytest.raises(ValueError):
        sc.is_member((3, 2), 1)
    with pytest.raises(ValueError):
        sc.is_member((0, 2), 1)


@pytest.mark.parametrize("xi", ["1", "2", "3", "w", "w+1"])
def test_greedy_matches_exhaustive(xi):
    bad = [F for F in ALL_SETS if sc.is_member(F, xi) != sc.is_member_exhaustive(F, xi)]
    assert bad == []


@pytest.mark.parametrize("xi", INDICES)
def test_hereditary(members, xi):
    fam = members[xi]
    for F in fam:
        for i in range(len(F)):
            assert F[:i] + F[i + 1:] in fam


@pytest.mark.parametrize("xi", INDICES)
def test_spreading(members, xi):
    # one-step spreads generate every coordinatewise spread
    fam = members[xi]
    for F in fam:
        for i, x in enumerate(F):
            nxt = F[i + 1] if i + 1 < len(F) else 13
            if x + 1 < nxt:
                assert F[:i] + (x + 1,) + F[i + 1:] in fam


@pytest.mark.parametrize("zeta", ["1", "2", "w"])
def test_chain(members, zeta):
    by_index = {parse_ordinal(x): fam for x, fam in members.items()}
    assert members[zeta] <= by_index[parse_ordinal(zeta) + 1]


def test_s1_inside_every_family(members):
    for xi in INDICES:
        assert members["1"] <= members[xi]


@pytest.mark.parametrize("xi", ["1", "2", "w"])
def test_double_preserves_membership(xi):
    for r in range(8):
        for A in combinations(range(1, 8), r):
            if sc.is_member(A, xi):
                assert sc.is_member(sc.double(A), xi), A


def test_double_examples():
    assert sc.double((2, 3)) == (4, 6, 8)
    assert sc.double(()) == ()
    assert sc.double((1, 4)) == (2, 4, 8, 10)


def test_enumerate_maximal_examples():
    assert sc.enumerate_maximal(1, 3) == [(1,), (2, 3)]
    assert sc.enumerate_maximal(1, 4) == [(1,), (2, 3), (2, 4), (3, 4)]
    assert sc.enumerate_maximal(2, 2) == [(1,), (2,)]


def test_enumerate_maximal_matches_filter():
    N = 8
    fam = [F for r in range(N + 1) for F in combinations(range(1, N + 1), r) if sc.is_member(F, 2)]
    fset = set(fam)
    maximal = sorted(F for F in fam
                     if not any(tuple(sorted(F + (x,))) in fset for x in range(1, N + 1) if x not in F))
    assert sc.enumerate_maximal(2, N) == maximal


def test_resource_guard():
    with pytest.raises(sc.ResourceLimitError):
        sc.enumerate_maximal(1, sc.MAX_ENUM_N + 1)
    assert sc.enumerate_maximal(1, 3, limit=3) == [(1,), (2, 3)]


def test_apply_spread_examples():
    assert sc.apply_spread((1, 2), (2, 4, 6, 8)) == (2, 4)
    assert sc.apply_spread((), (5,)) == ()
    assert sc.apply_spread((2, 5), (3, 4, 7, 10, 11)) == (4, 11)
    with pytest.raises(ValueError):
        sc.apply_spread((2, 6), (3, 4, 7, 10, 11))


def test_combine_member_examples():
    assert sc.combine_member([(2, 3), (5, 6)], 1, 1)
    assert not sc.combine_member([(1, 2)], 1, 1)
    assert sc.combine_member([(3, 4), (5,), (7, 8, 9)], 1, 1)
    with pytest.raises(ValueError):
        sc.combine_member([(2, 5), (4, 6)], 1, 1)


def test_threshold_examples():
    assert sc.threshold(1, 2, 10) == 1
    assert sc.threshold(1, 1, 10) == 1
    # frozen from an exhaustive scan under the fixed fundamental sequences
    assert sc.threshold(2, OMEGA, 12) == 1
    assert sc.threshold(3, OMEGA, 12) == 3


def test_threshold_is_minimal():
    d = sc.threshold(3, OMEGA, 12)
    bad = [S for S in ALL_SETS if S and S[0] == d - 1 and sc.is_member(S, 3) and not sc.is_member(S, OMEGA)]
    assert bad


@pytest.mark.parametrize("xi, zeta, N", [(1, 1, 10), (1, 2, 10), (2, 1, 12)])
def test_find_l_verified(xi, zeta, N):
    L = sc.find_L(xi, zeta, N)
    assert L == list(range(1, N + 1))
    assert sc.composite_violations(L, xi, zeta) == []


def test_s1_of_s1_inside_s2_exhaustive():
    target = Ordinal.of(2)
    for r in range(1, 11):
        for G in combinations(range(1, 11), r):
            if sc.in_composite(G, 1, 1):
                assert sc.is_member(G, target)
