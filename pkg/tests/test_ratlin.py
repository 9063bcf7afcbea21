from fractions import Fraction

import numpy as np
import pytest

from complexes import DimensionMismatch
from complexes.ratlin import (
    Echelon,
    SparseMatrix,
    compose,
    format_rational,
    from_text,
    in_span,
    kernel,
    parse_rational,
    rank,
    solve,
    to_text,
)


def test_zero_entries_are_not_stored():
    m = SparseMatrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 2)})
    assert m.nnz == 1
    assert m.get(1, 1) == Fraction(1, 2)
    assert m.get(0, 0) == 0


def test_out_of_range_entry_rejected():
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(2, 0): 1})


def test_compose_and_shapes():
    a = SparseMatrix.from_dense([[1, 2], [0, 1]])
    b = SparseMatrix.from_dense([[1, 0], [3, 1]])
    assert compose(a, b).to_dense() == [[7, 2], [3, 1]]
    assert (a @ SparseMatrix.identity(2)) == a
    with pytest.raises(DimensionMismatch):
        compose(a, SparseMatrix.zeros(3, 1))


def test_add_requires_same_shape():
    with pytest.raises(DimensionMismatch):
        SparseMatrix.zeros(1, 2) + SparseMatrix.zeros(2, 1)


def test_rank_small_cases():
    assert rank(SparseMatrix.zeros(3, 4)) == 0
    assert rank(SparseMatrix.identity(5)) == 5
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]])) == 1
    assert rank(SparseMatrix.from_dense([[Fraction(1, 3), 1], [1, 3]])) == 1
    assert rank(SparseMatrix.from_dense([[0, -1, -1], [-1, 0, 1], [1, 1, 0]])) == 2


def test_rank_large_entries_stay_exact():
    # Hilbert matrices are notoriously ill-conditioned but have full rank
    n = 8
    h = SparseMatrix.from_dense([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    assert rank(h) == n


def test_rank_independent_of_row_order():
    rng = np.random.default_rng(7)
    dense = rng.integers(-2, 3, size=(9, 7)).tolist()
    dense[4] = [a + b for a, b in zip(dense[0], dense[1])]
    m = SparseMatrix.from_dense(dense)
    expected = rank(m)
    for _ in range(10):
        order = [int(i) for i in rng.permutation(9)]
        assert rank(m, row_order=order) == expected


def test_kernel_vectors_are_annihilated():
    m = SparseMatrix.from_dense([[2, 2, 2], [3, 3, 3]])
    ker = kernel(m)
    assert len(ker) == 2
    for v in ker:
        assert m.apply(v) == {}


def test_kernel_of_full_rank_is_empty():
    assert kernel(SparseMatrix.identity(3)) == []


def test_solve_and_in_span():
    m = SparseMatrix.from_dense([[1, 1], [0, 1], [1, 2]])
    x = solve(m, {0: 3, 1: 1, 2: 4})
    assert m.apply(x) == {0: 3, 1: 1, 2: 4}
    assert solve(m, {0: 1, 1: 0, 2: 0}) is None
    assert in_span([{0: 1, 1: 1}, {1: 2}], {0: 2, 1: 5})
    assert not in_span([{0: 1, 1: 1}], {0: 1})


def test_echelon_reports_independence():
    ech = Echelon()
    assert ech.add({0: 1, 2: 1})
    assert ech.add({1: 1})
    assert not ech.add({0: 2, 1: 3, 2: 2})
    assert len(ech) == 2


def test_text_form():
    m = SparseMatrix.from_dense([[Fraction(-1, 2), 0], [0, 3]])
    text = to_text(m)
    assert text.splitlines()[0] == "2 2 2"
    assert text.splitlines()[1] == "0 0 -1 2"
    assert from_text(text) == m


def test_text_form_rejects_bad_header():
    with pytest.raises(ValueError):
        from_text("2 2 3\n0 0 1 1\n")


def test_rational_format():
    assert format_rational(Fraction(3)) == "3/1"
    assert parse_rational("-4/6") == Fraction(-2, 3)


def test_transpose_keeps_rank():
    m = SparseMatrix.from_dense([[1, 2, 0], [0, Fraction(1, 3), 5]])
    t = m.transpose()
    assert t.shape == (3, 2)
    assert t.get(2, 1) == 5
    assert rank(t) == rank(m) == 2
