import itertools

import pytest
from hypothesis import given, strategies as st

from ncic.errors import LimitExceeded, NotPrimePower, TooLarge
from ncic.field import (
    count_error_patterns,
    enumerate_error_patterns,
    enumerate_vectors,
    hamming_weight,
    index_vector,
    make_field,
    vector_index,
)

import oracles

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_gf4_product_of_generators():
    F = make_field(4)
    assert F.mul(2, 3) == 1


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 18, -4])
def test_rejects_non_prime_powers(q):
    with pytest.raises(NotPrimePower):
        make_field(q)


def test_rejects_oversized_field():
    with pytest.raises(TooLarge):
        make_field(512)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_modulus_is_smallest_irreducible(q):
    F = make_field(q)
    assert F.modulus == oracles.smallest_modulus(F.characteristic, F.degree)


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_tables_match_polynomial_reference(q):
    F = make_field(q)
    p, k = F.characteristic, F.degree
    for a, b in itertools.product(range(q), repeat=2):
        assert F.add(a, b) == oracles.ref_add(a, b, p, k)
        assert F.mul(a, b) == oracles.ref_mul(a, b, p, k, F.modulus)


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_field_axioms(q):
    F = make_field(q)
    for a in range(q):
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(a, a) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(a, a) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@given(st.sampled_from(PRIME_POWERS), st.data())
def test_distributive(q, data):
    F = make_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@pytest.mark.parametrize(
    "q,n,delta,expected",
    [(2, 1, 0, 1), (2, 3, 1, 4), (3, 2, 1, 5), (2, 4, 2, 11), (3, 3, 1, 7), (2, 5, 1, 6)],
)
def test_error_pattern_counts(q, n, delta, expected):
    assert count_error_patterns(q, n, delta) == expected
    pats = list(enumerate_error_patterns(make_field(q), n, delta))
    assert len(pats) == expected == len(set(pats))
    assert all(hamming_weight(p) <= delta for p in pats)


def test_gf3_two_coordinates_radius_one():
    # q=2,n=2,delta=1 -> 3; q=3,n=2,delta=2 -> 9
    assert count_error_patterns(2, 2, 1) == 3
    assert count_error_patterns(3, 2, 2) == 9


def test_error_patterns_ordered_by_weight():
    pats = list(enumerate_error_patterns(make_field(3), 3, 2))
    weights = [hamming_weight(p) for p in pats]
    assert weights == sorted(weights)
    assert pats[0] == (0, 0, 0)


def test_enumeration_limit():
    with pytest.raises(LimitExceeded):
        enumerate_vectors(make_field(2), 25)
    assert len(list(enumerate_vectors(make_field(2), 4, limit=16))) == 16


def test_lexicographic_order():
    vs = list(enumerate_vectors(make_field(3), 2))
    assert vs == sorted(vs)
    assert vs[1] == (0, 1)  # first coordinate most significant


@given(st.sampled_from(PRIME_POWERS), st.integers(0, 4), st.data())
def test_index_roundtrip(q, n, data):
    i = data.draw(st.integers(0, q**n - 1))
    assert vector_index(index_vector(i, q, n), q) == i


def test_vector_helpers():
    F = make_field(3)
    u, v = (1, 2, 0), (2, 2, 1)
    assert F.vsub(F.vadd(u, v), v) == u
    assert F.dot(u, v) == (2 + 4) % 3
    assert F.vscale(2, u) == (2, 1, 0)
    with pytest.raises(ValueError):
        F.check_vector((0, 3))
