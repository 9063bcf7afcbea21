from fractions import Fraction

import pytest

import complexes.gs as gs
from complexes import TruncationOverflow
from complexes.chain import betti, validate
from complexes.gs import (
    FullGSLabel,
    GSOpLabel,
    build_full_gs_complex,
    build_polydiff_gs_complex,
    check_partial_identities,
    coproduct_of_derivative,
    derivative_of_coproduct,
    full_d1_terms,
    gs_chain_map_defects,
    gs_differential,
    include_polydiff_gs,
    polydiff_gs_cohomology_dims,
)
from complexes.hoch import FullHochLabel, PolyOpLabel, full_boundary_terms, include_polydiff
from complexes.polyalg import Monomial


def mono(dim, *idx):
    return Monomial.of(dim, *idx)


X = mono(1, 1)
X2 = mono(1, 1, 1)


def test_label_strings():
    lab = GSOpLabel((X, X), (X2,))
    assert str(lab) == "G(I=[x1,x1]; J=[x1^2])"
    assert lab.position == (2, 1)
    assert lab.bigrade == (2, 2)
    full = FullGSLabel((X,), (X, X2))
    assert str(full) == "GF(in=[x1]; out=[x1, x1^2])"
    assert full.weight == 2


def test_single_label_complex():
    c = build_polydiff_gs_complex(1, 1, 1)
    assert c.sizes() == {2: 1}
    assert betti(c).dims == {2: 1}


def test_dim1_m2_n2_is_acyclic():
    c = build_polydiff_gs_complex(1, 2, 2)
    assert sum(c.sizes().values()) == 4
    assert betti(c).total() == 0


def test_dim2_m2_n1():
    b = betti(build_polydiff_gs_complex(2, 2, 1))
    assert b.dims == {2: 0, 3: 2}


@pytest.mark.parametrize("dim,m,n", [(1, 1, 3), (1, 3, 1), (2, 1, 2), (2, 2, 2), (3, 2, 1), (2, 3, 1)])
def test_polydiff_gs_closed_form(dim, m, n):
    c = build_polydiff_gs_complex(dim, m, n)
    assert validate(c).ok
    assert betti(c).dims == polydiff_gs_cohomology_dims(dim, m, n)


@pytest.mark.parametrize("w", [-1, 0, 1])
def test_partial_differentials(w):
    ids = check_partial_identities(1, w, (3, 3))
    assert ids.d1_squared and ids.d2_squared and ids.commute
    assert validate(build_full_gs_complex(1, w, (3, 3))).ok


def test_flipping_left_action_sign_breaks_the_complex(monkeypatch):
    original = gs._left_action_terms
    monkeypatch.setattr(gs, "_left_action_terms", lambda lab, bounds: {k: -v for k, v in original(lab, bounds).items()})
    assert not check_partial_identities(1, 0, (3, 3)).d1_squared
    assert not validate(build_full_gs_complex(1, 0, (3, 3))).ok


def test_dropping_left_action_leaves_a_trivial_left_module(monkeypatch):
    # with f_0 acting by zero the merges and the right action still square to zero
    lab = FullGSLabel((Monomial.of(1, 1),), (Monomial.of(1, 1),))
    full = full_d1_terms(lab, (3, 3))
    monkeypatch.setattr(gs, "_left_action_terms", lambda lab, bounds: {})
    assert full_d1_terms(lab, (3, 3)) != full
    assert check_partial_identities(1, 0, (3, 3)).d1_squared


def test_arity_one_one_piece_matches_hochschild():
    # with one output d¹ is d_H on Ō-valued cochains
    bounds = (3, 3)
    for lab in gs.full_gs_basis(1, 0, bounds, 2):
        hoch = FullHochLabel(lab.inputs, lab.outputs[0])
        expected = {
            FullGSLabel(img.inputs, (img.output,)): v
            for img, v in full_boundary_terms(hoch, bounds[0]).items()
            if img.output.weight <= bounds[1]
        }
        assert full_d1_terms(lab, bounds) == expected


def test_include_x_times_derivative():
    image = include_polydiff_gs(GSOpLabel((X,), (X,)), (3, 4))
    assert image == {
        FullGSLabel((X,), (X,)): Fraction(1),
        FullGSLabel((X2,), (X2,)): Fraction(2),
        FullGSLabel((mono(1, 1, 1, 1),), (mono(1, 1, 1, 1),)): Fraction(3),
    }


def test_single_output_labels_agree_with_hochschild():
    # output room covers every image the Hochschild window produces
    bounds = (4, 6)
    for bunches in [(X,), (X2,), (X, X)]:
        for coeff in (X, X2):
            gs_image = include_polydiff_gs(GSOpLabel(bunches, (coeff,)), bounds)
            hoch_image = include_polydiff(PolyOpLabel(coeff, bunches), bounds[0])
            assert gs_image == {FullGSLabel(k.inputs, (k.output,)): v for k, v in hoch_image.items()}


def test_include_outside_bounds_raises():
    with pytest.raises(TruncationOverflow):
        include_polydiff_gs(GSOpLabel((X2,), (X,)), (1, 3))


def test_chain_map_dim1_m2_n2():
    assert gs_chain_map_defects(1, 2, 2, (4, 4)) == []


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (3, 2)])
def test_inclusion_is_a_chain_map(m, n):
    assert gs_chain_map_defects(1, m, n, (4, 4)) == []


def test_gs_differential_squares_to_zero_on_a_sample():
    bounds = (3, 3)
    sample = {FullGSLabel((X,), (X,)): Fraction(1), FullGSLabel((X,), (X2,)): Fraction(-2)}
    assert gs_differential(gs_differential(sample, bounds), bounds) == {}


@pytest.mark.parametrize("f", [X2, mono(2, 1, 1, 2), mono(2, 2, 2, 2)])
def test_coproduct_commutes_with_derivative(f):
    for by in (mono(f.dim, 1), mono(f.dim, 2) if f.dim > 1 else X2):
        assert coproduct_of_derivative(f, by) == derivative_of_coproduct(f, by)
