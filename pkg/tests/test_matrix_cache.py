from complexes.cells import build_perm_complex
from complexes.ratlin import SparseMatrix
from utils.matrix_cache import MatrixCache


def test_second_build_reads_every_matrix_from_disk(tmp_path):
    cache = MatrixCache(str(tmp_path / "mats"))
    first = build_perm_complex(3, cache=cache)
    assert cache.hits == 0
    assert cache.misses == len(first.degrees)

    second = build_perm_complex(3, cache=cache)
    assert cache.hits == len(first.degrees)
    for d in first.degrees:
        assert second.differential(d) == first.differential(d)


def test_shape_mismatch_is_a_miss(tmp_path):
    cache = MatrixCache(str(tmp_path))
    cache.put("demo", 0, SparseMatrix(2, 2, {(0, 1): 3}))
    assert cache.fetch("demo", 0, (3, 3)) is None
    assert cache.fetch("demo", 0, (2, 2)) == SparseMatrix(2, 2, {(0, 1): 3})
    assert (cache.hits, cache.misses) == (1, 1)


def test_unreadable_file_is_ignored(tmp_path):
    cache = MatrixCache(str(tmp_path))
    with open(cache.path("demo", 1), "w") as fh:
        fh.write("not a matrix\n")
    assert cache.fetch("demo", 1, (1, 1)) is None
    assert cache.misses == 1


def test_names_are_made_filesystem_safe(tmp_path):
    cache = MatrixCache(str(tmp_path))
    path = cache.path("hoch full(dim=1, w=0)", -2)
    assert path.endswith("hoch_full_dim=1_w=0___d-2.mat")
