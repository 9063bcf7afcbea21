from math import comb

import pytest

from complexes import DimensionMismatch
from complexes.polyalg import (
    Monomial,
    as_counter,
    compositions,
    coproduct_splits,
    derivative,
    difference,
    enumerate_tuples,
    iterated_coproduct,
    merge,
    monomials,
    monomials_up_to,
    reduced_coproduct_splits,
    split_multiplicity,
    tuple_count,
)


def test_parse_and_print():
    m = Monomial.parse("x1^2*x3", 3)
    assert m.exponents == (1, 1, 3)
    assert str(m) == "x1^2*x3"
    assert str(Monomial.one(2)) == "1"
    assert Monomial.parse("1", 2).is_one()
    with pytest.raises(ValueError):
        Monomial.parse("y2", 2)
    with pytest.raises(ValueError):
        Monomial.of(2, 3)


def test_merge_and_difference():
    a = Monomial.of(2, 1, 2)
    b = Monomial.of(2, 1)
    assert merge(a, b) == Monomial.of(2, 1, 1, 2)
    assert difference(a, b) == Monomial.of(2, 2)
    with pytest.raises(ValueError):
        difference(b, a)
    with pytest.raises(DimensionMismatch):
        merge(a, Monomial.of(3, 1))


def test_coproduct_of_square():
    x2 = Monomial.of(1, 1, 1)
    splits = [(str(l), str(r), c) for l, r, c in coproduct_splits(x2)]
    assert splits == [("1", "x1^2", 1), ("x1", "x1", 2), ("x1^2", "1", 1)]
    assert [(str(l), str(r), c) for l, r, c in reduced_coproduct_splits(x2)] == [("x1", "x1", 2)]


def test_split_multiplicity_is_product_of_binomials():
    whole = Monomial.from_counts(2, [3, 2])
    part = Monomial.from_counts(2, [1, 1])
    assert split_multiplicity(whole, part) == comb(3, 1) * comb(2, 1)


def test_iterated_coproduct_total_multiplicity():
    # Σ multiplicities of Δ^{k−1} x^M = k^{|M|}
    m = Monomial.from_counts(2, [2, 1])
    for k in (1, 2, 3):
        assert sum(c for _, c in iterated_coproduct(m, k)) == k ** m.weight
    with pytest.raises(ValueError):
        iterated_coproduct(m, 0)


def test_iterated_coproduct_is_coassociative():
    m = Monomial.from_counts(2, [2, 1])
    left_first = {}
    for (a, rest), c in iterated_coproduct(m, 2):
        for (b, d), c2 in iterated_coproduct(rest, 2):
            left_first[(a, b, d)] = left_first.get((a, b, d), 0) + c * c2
    assert left_first == as_counter(iterated_coproduct(m, 3))


@pytest.mark.parametrize("m", monomials_up_to(2, 4), ids=str)
def test_coproduct_coassociativity(m):
    # (Δ⊗1)Δ = (1⊗Δ)Δ
    split_left, split_right = {}, {}
    for (a, b), c in iterated_coproduct(m, 2):
        for (a1, a2), c1 in iterated_coproduct(a, 2):
            split_left[(a1, a2, b)] = split_left.get((a1, a2, b), 0) + c * c1
        for (b1, b2), c2 in iterated_coproduct(b, 2):
            split_right[(a, b1, b2)] = split_right.get((a, b1, b2), 0) + c * c2
    assert split_left == split_right == as_counter(iterated_coproduct(m, 3))


def test_derivative():
    m = Monomial.from_counts(1, [3])
    d = derivative(m, Monomial.from_counts(1, [2]))
    assert d == (Monomial.of(1, 1), 6)
    assert derivative(Monomial.of(2, 1), Monomial.of(2, 2)) is None
    assert derivative(m, Monomial.one(1)) == (m, 1)


def test_monomial_counts():
    for dim in (1, 2, 3):
        for w in range(5):
            assert len(monomials(dim, w)) == comb(dim + w - 1, w)
    assert len(monomials_up_to(2, 2, min_weight=1)) == 2 + 3


def test_compositions_order():
    assert list(compositions(3, 2, allow_empty=False)) == [(2, 1), (1, 2)]
    assert list(compositions(2, 2, allow_empty=True)) == [(2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("dim,w,k,empty", [(1, 4, 2, False), (2, 3, 2, False), (2, 3, 3, True), (3, 2, 1, False)])
def test_tuple_count_matches_enumeration(dim, w, k, empty):
    tuples = enumerate_tuples(dim, w, k, allow_empty=empty)
    assert len(tuples) == tuple_count(dim, w, k, allow_empty=empty)
    assert len(set(tuples)) == len(tuples)


def test_enumerate_rejects_bad_requests():
    with pytest.raises(ValueError):
        enumerate_tuples(2, -1, 2)
