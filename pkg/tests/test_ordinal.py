import pytest
from hypothesis import given, strategies as st

from schreierlab.ordinal import (
    OMEGA,
    OMEGA_1,
    Ordinal,
    OrdinalError,
    add,
    compare,
    format_ordinal,
    fundamental,
    normalize,
    parse_ordinal,
)

W = OMEGA
W2 = Ordinal.omega_power(2)


def ordinals(max_exp=3, max_coef=4):
    terms = st.dictionaries(st.integers(0, max_exp), st.integers(1, max_coef), max_size=max_exp + 1)
    return terms.map(lambda d: Ordinal(tuple(sorted(d.items(), reverse=True))))


def test_normalize_examples():
    assert normalize([(0, 3)]) == 3
    assert normalize([(1, 1), (1, 1)]) == Ordinal(((1, 2),))
    assert normalize([(0, 2), (1, 1)]) == W
    assert normalize([(0, 0)]) == 0


@given(ordinals())
def test_normalize_idempotent(a):
    once = normalize(a.terms)
    assert normalize(once.terms) == once == a


def test_add_examples():
    assert add(W, Ordinal.of(1)) == Ordinal(((1, 1), (0, 1)))
    assert add(Ordinal.of(1), W) == W
    assert add(parse_ordinal("w*2+3"), W2) == W2
    with pytest.raises(OrdinalError):
        add(W, OMEGA_1)


def test_compare_examples():
    assert compare(W, Ordinal.of(5)) == 1
    assert compare(W2 + 1, W2 + 1) == 0
    assert compare(Ordinal(((1, 3),)), W2) == -1
    assert compare(OMEGA_1, Ordinal(((5, 9),))) == 1
    assert compare(W, OMEGA_1) == -1


@given(ordinals(), ordinals(), ordinals())
def test_add_associative(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))


@given(ordinals())
def test_add_zero(a):
    assert add(a, Ordinal()) == a
    assert add(Ordinal(), a) == a


@given(ordinals(), ordinals(), ordinals())
def test_add_strictly_monotone_on_right(a, b, c):
    if b < c:
        assert add(a, b) < add(a, c)


def test_fundamental_examples():
    assert fundamental(W, 4) == 4
    assert fundamental(W2, 3) == Ordinal(((1, 3), (0, 1)))
    assert fundamental(Ordinal(((1, 2),)), 5) == W + 5


@pytest.mark.parametrize("text", ["w", "w*2", "w^2", "w^2+w", "w^3"])
def test_fundamental_sequence_shape(text):
    xi = parse_ordinal(text)
    prev = None
    for n in range(1, 101):
        z = fundamental(xi, n)
        assert z.is_successor
        assert z < xi
        if prev is not None:
            assert prev < z
        prev = z


def test_fundamental_rejects_non_limits():
    for bad in (Ordinal.of(3), W + 1, Ordinal()):
        with pytest.raises(OrdinalError):
            fundamental(bad, 1)
    with pytest.raises(OrdinalError):
        fundamental(OMEGA_1, 1)


@given(ordinals())
def test_text_round_trip(a):
    text = format_ordinal(a)
    assert parse_ordinal(text) == a
    assert format_ordinal(parse_ordinal(text)) == text


def test_parse_forms():
    assert parse_ordinal("w^2*3+w*1+4") == Ordinal(((2, 3), (1, 1), (0, 4)))
    assert format_ordinal(parse_ordinal("w^2*3+w+4")) == "w^2*3+w*1+4"
    assert parse_ordinal("w1") is OMEGA_1
    assert format_ordinal(OMEGA_1) == "w1"
    assert parse_ordinal("2+w") == W
    for bad in ("", "v", "w^", "w**2", "1.5"):
        with pytest.raises(OrdinalError):
            parse_ordinal(bad)


def test_cnf_invariants_enforced():
    with pytest.raises(OrdinalError):
        Ordinal(((0, 1), (1, 1)))
    with pytest.raises(OrdinalError):
        Ordinal(((1, 0),))
