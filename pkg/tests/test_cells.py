from fractions import Fraction

import numpy as np
import pytest

from complexes.cells import (
    PermCell,
    SimplexCell,
    act_on_sum,
    build_perm_complex,
    build_simplex_complex,
    face_vector,
    fubini,
    is_equivariant_at,
    ordered_set_partitions,
    perm_boundary,
    perm_face_count,
    simplex_boundary,
    simplex_face_count,
    sn_action,
    sort_sign,
    stirling2,
)
from complexes.chain import betti, validate


def test_labels_print_in_compact_form():
    assert str(SimplexCell(4, (2, 4))) == "S(4;{2,4})"
    assert str(PermCell(3, ((1, 3), (2,)))) == "P(3;{1,3}|{2})"


def test_bad_labels_rejected():
    with pytest.raises(ValueError):
        PermCell(3, ((1, 2),))
    with pytest.raises(ValueError):
        PermCell(2, ((2, 1),))
    with pytest.raises(ValueError):
        SimplexCell(3, (1, 2, 3))


def test_sort_sign():
    assert sort_sign((1, 2, 3)) == 1
    assert sort_sign((2, 1)) == -1
    assert sort_sign((3, 1, 2)) == 1


def test_edge_of_interval():
    d = simplex_boundary(SimplexCell(2, ()))
    assert d == {SimplexCell(2, (1,)): Fraction(1), SimplexCell(2, (2,)): Fraction(-1)}


def test_permutahedron_edge():
    d = perm_boundary(PermCell(2, ((1, 2),)))
    assert d == {
        PermCell(2, ((1,), (2,))): Fraction(-1),
        PermCell(2, ((2,), (1,))): Fraction(1),
    }


def test_hexagon_boundary_has_six_edges():
    d = perm_boundary(PermCell(3, ((1, 2, 3),)))
    assert len(d) == 6
    assert all(abs(v) == 1 for v in d.values())


def test_ordered_set_partitions_counts():
    for n in range(1, 6):
        for k in range(1, n + 1):
            parts = ordered_set_partitions(range(1, n + 1), k)
            assert len(parts) == perm_face_count(n, n - k)
            assert parts == sorted(parts)


def test_stirling_and_fubini():
    assert [stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]
    assert [fubini(n) for n in range(1, 6)] == [1, 3, 13, 75, 541]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_permutahedra_are_contractible(n):
    c = build_perm_complex(n)
    assert validate(c).ok
    assert betti(c).dims == {d: (1 if d == 0 else 0) for d in c.degrees}
    assert sum(face_vector(c).values()) == fubini(n)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 7])
def test_simplices_are_contractible(n):
    c = build_simplex_complex(n)
    assert validate(c).ok
    assert betti(c).dims == {d: (1 if d == 0 else 0) for d in c.degrees}
    for dim, size in face_vector(c).items():
        assert size == simplex_face_count(n, dim)


def test_p3_face_vector():
    assert face_vector(build_perm_complex(4)) == {0: 24, 1: 36, 2: 14, 3: 1}


@pytest.mark.slow
def test_p5_cell_count():
    c = build_perm_complex(6)
    assert sum(c.sizes().values()) == 4683
    assert validate(c).ok


def test_action_normalises_blocks():
    cell, sign = sn_action((2, 1, 3), PermCell(3, ((1, 3), (2,))))
    assert cell == PermCell(3, ((2, 3), (1,)))
    assert sign == 1
    cell, sign = sn_action((3, 2, 1), PermCell(3, ((1, 3), (2,))))
    assert cell == PermCell(3, ((1, 3), (2,)))
    assert sign == -1


def test_action_rejects_non_permutations():
    with pytest.raises(ValueError):
        sn_action((1, 1, 2), PermCell(3, ((1, 2, 3),)))


@pytest.mark.parametrize("family", ["perm", "simplex"])
def test_boundary_is_equivariant(family):
    rng = np.random.default_rng(2024)
    build = build_perm_complex if family == "perm" else build_simplex_complex
    for n in (3, 4):
        c = build(n)
        cells = [lab for d in c.degrees for lab in c.basis[d]]
        for _ in range(40):
            g = tuple(int(x) + 1 for x in rng.permutation(n))
            cell = cells[int(rng.integers(len(cells)))]
            assert is_equivariant_at(g, cell)


def test_action_on_sums_cancels():
    edge = PermCell(2, ((1,), (2,)))
    swapped = act_on_sum((2, 1), {edge: Fraction(1), PermCell(2, ((2,), (1,))): Fraction(-1)})
    assert swapped == {PermCell(2, ((2,), (1,))): Fraction(1), edge: Fraction(-1)}
