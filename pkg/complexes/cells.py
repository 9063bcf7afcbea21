"""
Cell complexes of the simplex and the permutahedron
====================================================
Simplex Δ_{n−1}: cells Δ^I indexed by the vanishing set I ⊂ [n], |I| ≤ n−1,
geometric dimension n − |I| − 1. The boundary adds one index j ∉ I with
sign (−1)^{p+1}, p the position of j in the ascending list [n] ∖ I.

Permutahedron P_{n−1}: cells indexed by ordered set partitions
(I_1 | … | I_k) of [n], geometric dimension n − k. The boundary splits one
block I_i into an ordered pair (I', I'') of nonempty subsets with sign

    (−1)^{i + 1 + |I_1| + … + |I_{i−1}| + |I'|} · sgn(I' I'')

where sgn(I' I'') sorts the concatenation of the two ascending halves.

Both complexes are stored with degree = −(geometric dimension), so vertices
sit in degree 0 and the boundary raises the stored degree by one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from complexes.chain import FinChainComplex, build_complex
from utils.logger import setup_logger

logger = setup_logger(__name__)

SignedCellSum = Dict["Cell", Fraction]


# ── Public data structures ────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class SimplexCell:
    n: int
    vanishing: Tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.vanishing) != sorted(set(self.vanishing)):
            raise ValueError(f"vanishing set must be sorted and distinct: {self.vanishing}")
        if any(not 1 <= i <= self.n for i in self.vanishing) or len(self.vanishing) > self.n - 1:
            raise ValueError(f"bad vanishing set {self.vanishing} for n={self.n}")

    @property
    def dimension(self) -> int:
        return self.n - len(self.vanishing) - 1

    @property
    def skew(self) -> Tuple[int, ...]:
        """The complement [n] ∖ I, ascending."""
        gone = set(self.vanishing)
        return tuple(i for i in range(1, self.n + 1) if i not in gone)

    def __str__(self) -> str:
        return f"S({self.n};{{{','.join(map(str, self.vanishing))}}})"


@dataclass(frozen=True, order=True)
class PermCell:
    n: int
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        flat = [i for b in self.blocks for i in b]
        if sorted(flat) != list(range(1, self.n + 1)) or any(not b for b in self.blocks):
            raise ValueError(f"not an ordered set partition of [{self.n}]: {self.blocks}")
        if any(list(b) != sorted(b) for b in self.blocks):
            raise ValueError(f"blocks must be stored ascending: {self.blocks}")

    @property
    def dimension(self) -> int:
        return self.n - len(self.blocks)

    def __str__(self) -> str:
        inner = "|".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return f"P({self.n};{inner})"


Cell = Union[SimplexCell, PermCell]


# ── Sign helpers ──────────────────────────────────────────────────────────────

def sort_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation that sorts `seq` (distinct entries)."""
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def splits(block: Sequence[int]) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Ordered pairs (A, B) of nonempty ascending subsets with A ⊔ B = block."""
    items = tuple(block)
    for size in range(1, len(items)):
        for a in combinations(items, size):
            aset = set(a)
            yield a, tuple(x for x in items if x not in aset)


def split_block_terms(
    blocks: Sequence[Tuple[int, ...]],
) -> Iterator[Tuple[Tuple[Tuple[int, ...], ...], int]]:
    """
    All (new_blocks, sign) obtained by splitting one block, with the
    permutahedron sign convention. Shared with the cobar construction.
    """
    prefix = 0
    for i, block in enumerate(blocks, start=1):
        for a, b in splits(block):
            eps = i + 1 + prefix + len(a)
            sign = (-1 if eps % 2 else 1) * sort_sign(a + b)
            yield tuple(blocks[: i - 1]) + (a, b) + tuple(blocks[i:]), sign
        prefix += len(block)


# ── Boundary operators ────────────────────────────────────────────────────────

def simplex_boundary(c: SimplexCell) -> SignedCellSum:
    out: SignedCellSum = {}
    if c.dimension == 0:
        return out
    for p, j in enumerate(c.skew, start=1):
        face = SimplexCell(c.n, tuple(sorted(c.vanishing + (j,))))
        out[face] = Fraction(1 if p % 2 else -1)
    return out


def perm_boundary(c: PermCell) -> SignedCellSum:
    out: SignedCellSum = {}
    for blocks, sign in split_block_terms(c.blocks):
        face = PermCell(c.n, blocks)
        out[face] = out.get(face, Fraction(0)) + sign
    return {k: v for k, v in out.items() if v}


def boundary(c: Cell) -> SignedCellSum:
    if isinstance(c, SimplexCell):
        return simplex_boundary(c)
    return perm_boundary(c)


# ── Enumeration ───────────────────────────────────────────────────────────────

def ordered_set_partitions(items: Sequence[int], k: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """All ordered partitions of `items` into k nonempty ascending blocks, sorted."""
    items = tuple(items)
    if k == 0:
        return [()] if not items else []
    if k == 1:
        return [(items,)] if items else []
    out = []
    for size in range(1, len(items) - k + 2):
        for first in combinations(items, size):
            fs = set(first)
            rest = tuple(x for x in items if x not in fs)
            for tail in ordered_set_partitions(rest, k - 1):
                out.append((first,) + tail)
    return sorted(out)


def perm_cells(n: int, dimension: int) -> List[PermCell]:
    return [PermCell(n, bl) for bl in ordered_set_partitions(range(1, n + 1), n - dimension)]


def simplex_cells(n: int, dimension: int) -> List[SimplexCell]:
    size = n - dimension - 1
    return [SimplexCell(n, I) for I in combinations(range(1, n + 1), size)]


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def perm_face_count(n: int, dimension: int) -> int:
    """k!·S(n, k) cells of dimension n − k."""
    k = n - dimension
    return factorial(k) * stirling2(n, k)


def simplex_face_count(n: int, dimension: int) -> int:
    return comb(n, n - dimension - 1)


def fubini(n: int) -> int:
    """Ordered Bell number: total number of cells of P_{n−1}."""
    return sum(factorial(k) * stirling2(n, k) for k in range(n + 1))


# ── Complex builders ──────────────────────────────────────────────────────────

def build_simplex_complex(n: int, cache=None) -> FinChainComplex:
    if n < 1:
        raise ValueError(f"n must be ≥ 1, got {n}")
    degrees = range(-(n - 1), 1)
    basis = {-dim: simplex_cells(n, dim) for dim in range(n)}
    return build_complex(
        f"simplex_n{n}", degrees, basis, simplex_boundary,
        meta={"family": "simplex", "n": n}, cache=cache,
    )


def build_perm_complex(n: int, cache=None) -> FinChainComplex:
    if n < 1:
        raise ValueError(f"n must be ≥ 1, got {n}")
    degrees = range(-(n - 1), 1)
    basis = {-dim: perm_cells(n, dim) for dim in range(n)}
    logger.debug(f"P_{n - 1}: {sum(len(b) for b in basis.values())} cells")
    return build_complex(
        f"perm_n{n}", degrees, basis, perm_boundary,
        meta={"family": "perm", "n": n}, cache=cache,
    )


def face_vector(c: FinChainComplex) -> Dict[int, int]:
    """Basis sizes keyed by geometric dimension."""
    return {-d: c.dim(d) for d in c.degrees}


# ── Symmetric-group action ────────────────────────────────────────────────────

def _check_permutation(g: Sequence[int], n: int) -> None:
    if len(g) != n or sorted(g) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of [{n}]: {tuple(g)}")


def sn_action(g: Sequence[int], c: Cell) -> Tuple[Cell, int]:
    """
    Relabel every entry i of the cell by g[i−1] and return the normal-form
    cell with the sign picked up by re-sorting: the product of block sort
    signs for permutahedron cells, the sort sign of the skew bunch for
    simplex cells.
    """
    _check_permutation(g, c.n)
    if isinstance(c, PermCell):
        sign = 1
        blocks = []
        for b in c.blocks:
            image = tuple(g[i - 1] for i in b)
            sign *= sort_sign(image)
            blocks.append(tuple(sorted(image)))
        return PermCell(c.n, tuple(blocks)), sign
    skew_image = tuple(g[i - 1] for i in c.skew)
    vanishing = tuple(sorted(g[i - 1] for i in c.vanishing))
    return SimplexCell(c.n, vanishing), sort_sign(skew_image)


def act_on_sum(g: Sequence[int], terms: SignedCellSum) -> SignedCellSum:
    out: SignedCellSum = {}
    for cell, coeff in terms.items():
        image, sign = sn_action(g, cell)
        out[image] = out.get(image, Fraction(0)) + sign * coeff
    return {k: v for k, v in out.items() if v}


def is_equivariant_at(g: Sequence[int], c: Cell) -> bool:
    """boundary(g·c) == g·boundary(c)."""
    image, sign = sn_action(g, c)
    lhs = {k: sign * v for k, v in boundary(image).items()}
    return lhs == act_on_sum(g, boundary(c))
