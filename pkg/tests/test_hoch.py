from fractions import Fraction

import pytest

from complexes import TruncationOverflow
from complexes.chain import betti, validate
from complexes.hoch import (
    FullHochLabel,
    PolyOpLabel,
    build_full_hochschild_complex,
    build_polydiff_complex,
    chain_map_defects,
    evaluate,
    expected_full_betti,
    full_boundary_terms,
    hochschild_differential,
    include_polydiff,
    polydiff_boundary,
    polydiff_cohomology_dims,
    polydiff_counterpart,
    truncation_stability,
)
from complexes.polyalg import Monomial


def mono(dim, *idx):
    return Monomial.of(dim, *idx)


def test_label_strings():
    lab = PolyOpLabel(mono(2, 1), (mono(2, 1, 2), mono(2, 2)))
    assert str(lab) == "H(J=x1; I=[x1x2, x2])"
    assert lab.bigrade == (3, 1)
    assert lab.weight == -2
    full = FullHochLabel((mono(1, 1), mono(1, 1, 1)), mono(1, 1, 1, 1))
    assert str(full) == "F(in=[x1, x1^2]; out=x1^3)"
    assert full.weight == 0


def test_polydiff_boundary_splits_bunches():
    lab = PolyOpLabel(Monomial.one(1), (mono(1, 1, 1),))
    assert polydiff_boundary(lab) == {PolyOpLabel(Monomial.one(1), (mono(1, 1), mono(1, 1))): Fraction(-2)}


def test_polydiff_example_dim2_m2():
    c = build_polydiff_complex(2, 2, 0)
    assert c.sizes() == {1: 3, 2: 4}
    assert betti(c).dims == {1: 0, 2: 1}


@pytest.mark.parametrize("dim,m,n", [(1, 1, 5), (1, 2, 1), (1, 3, 0), (2, 1, 2), (2, 2, 1), (2, 3, 1), (3, 2, 0), (3, 3, 1)])
def test_polydiff_cohomology_closed_form(dim, m, n):
    c = build_polydiff_complex(dim, m, n)
    assert validate(c).ok
    assert betti(c).dims == polydiff_cohomology_dims(dim, m, n)


def test_full_complex_is_a_complex():
    for w in (-1, 0, 1):
        assert validate(build_full_hochschild_complex(1, w, 4)).ok
    assert validate(build_full_hochschild_complex(2, 0, 3)).ok


def test_full_complex_arity_one():
    c = build_full_hochschild_complex(1, 0, 3)
    assert betti(c)[1] == 1


def test_corrupted_full_differential_fails_validation():
    c = build_full_hochschild_complex(1, 0, 4)
    d = c.differential(1)
    # flip an entry whose target row feeds a nonzero column of diff(2)
    hit = {col for (_, col), _ in c.differential(2).items()}
    candidates = [(rc, v) for rc, v in d.items() if rc[0] in hit]
    assert candidates
    (r, col), v = candidates[0]
    broken = c.with_differential(1, d.with_entry(r, col, -v))
    assert not validate(broken).ok


def test_stability_in_arity_one():
    for w in (-1, 0, 1):
        rows = truncation_stability(1, w, 3, max_arity=2)
        first = rows[0]
        assert first.arity == 1
        assert first.stable
        assert first.betti_d == first.expected == expected_full_betti(1, w, 1)
        assert first.polydiff == first.betti_d


@pytest.mark.parametrize("dim", [1, 2])
@pytest.mark.parametrize("w", [-1, 0, 1])
def test_full_betti_closed_form_agrees_with_polydiff_complex(dim, w):
    for k in (1, 2):
        assert polydiff_counterpart(dim, w, k) == expected_full_betti(dim, w, k)


def test_include_derivative():
    lab = PolyOpLabel(Monomial.one(1), (mono(1, 1),))
    image = include_polydiff(lab, 3)
    assert image == {
        FullHochLabel((mono(1, 1),), Monomial.one(1)): Fraction(1),
        FullHochLabel((mono(1, 1, 1),), mono(1, 1)): Fraction(2),
        FullHochLabel((mono(1, 1, 1, 1),), mono(1, 1, 1)): Fraction(3),
    }


def test_euler_field_fixes_linear_functions():
    lab = PolyOpLabel(mono(2, 1), (mono(2, 1),))
    image = include_polydiff(lab, 2)
    assert evaluate(image, [mono(2, 1)]) == {mono(2, 1): Fraction(1)}
    assert evaluate(image, [mono(2, 2)]) == {}
    assert evaluate(image, [mono(2, 1, 1)]) == {mono(2, 1, 1): Fraction(2)}


def test_include_outside_window_raises():
    lab = PolyOpLabel(Monomial.one(1), (mono(1, 1, 1), mono(1, 1)))
    with pytest.raises(TruncationOverflow) as err:
        include_polydiff(lab, 2)
    assert err.value.required == 3


def test_chain_map_dim2_m2_n1():
    assert chain_map_defects(2, 2, 1, 4) == []


@pytest.mark.parametrize("dim,m,n", [(1, 1, 0), (1, 2, 2), (1, 3, 1), (2, 1, 1), (2, 3, 0)])
def test_inclusion_is_a_chain_map(dim, m, n):
    assert chain_map_defects(dim, m, n, 4) == []


def test_sparse_differential_matches_matrix():
    D = 3
    c = build_full_hochschild_complex(1, 0, D)
    idx = c.index(2)
    for j, lab in enumerate(c.basis[1]):
        col = c.differential(1).column(j)
        sparse = hochschild_differential({lab: 1}, D)
        assert {idx[k]: v for k, v in sparse.items()} == col


def test_boundary_stays_inside_window():
    lab = FullHochLabel((mono(1, 1),), mono(1, 1))
    for img in full_boundary_terms(lab, 3):
        assert img.input_degree <= 3
        assert img.weight == lab.weight
