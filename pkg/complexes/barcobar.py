"""
Koszul, bar and cobar complexes
===============================
All three are finite weight pieces:

  koszul(dim, m)     ⊙^k V ⊗ ∧^{m−k} V, k = 0..m−1, degree k; one exterior
                     factor moves into the symmetric part with sign (−1)^{p+1};
                     the k = m term is cut off (quotient truncation)
  bar(dim, w)        words of nonempty monomials of total weight w, degree
                     = −length; adjacent letters merge with sign (−1)^{i+1}
  cobar(dim, w)      words of nonempty exterior letters (strictly increasing
                     index lists), degree = length; one letter splits with the
                     permutahedron sign

Cohomology: koszul concentrated in degree m−1 with dim ⊙^m V, bar totals
dim ∧^w V, cobar totals dim ⊙^w V.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Dict, List, Tuple, Union

from complexes.cells import build_perm_complex, split_block_terms
from complexes.chain import FinChainComplex, build_complex
from complexes.polyalg import Monomial, compositions, enumerate_tuples, merge, monomials
from utils.logger import setup_logger

logger = setup_logger(__name__)

Letter = Union[Monomial, Tuple[int, ...]]


# ── Labels ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class KoszulLabel:
    sym: Monomial
    ext: Tuple[int, ...]

    def __post_init__(self) -> None:
        if list(self.ext) != sorted(set(self.ext)):
            raise ValueError(f"exterior part must be strictly increasing: {self.ext}")

    def __str__(self) -> str:
        wedge = "^".join(f"e{i}" for i in self.ext) or "1"
        return f"K({self.sym} ⊗ {wedge})"


@dataclass(frozen=True, order=True)
class WordLabel:
    kind: str
    letters: Tuple[Letter, ...]

    @property
    def weight(self) -> int:
        if self.kind == "bar":
            return sum(l.weight for l in self.letters)
        return sum(len(l) for l in self.letters)

    def __str__(self) -> str:
        if self.kind == "bar":
            return "B[" + "|".join(str(l) for l in self.letters) + "]"
        return "C[" + "|".join("{" + ",".join(map(str, l)) + "}" for l in self.letters) + "]"


# ── Koszul ────────────────────────────────────────────────────────────────────

def koszul_boundary(label: KoszulLabel) -> Dict[KoszulLabel, Fraction]:
    out: Dict[KoszulLabel, Fraction] = {}
    dim = label.sym.dim
    for p, i in enumerate(label.ext, start=1):
        sym = merge(label.sym, Monomial.of(dim, i))
        rest = label.ext[: p - 1] + label.ext[p:]
        key = KoszulLabel(sym, rest)
        out[key] = out.get(key, Fraction(0)) + (1 if p % 2 else -1)
    return out


def build_koszul_complex(dim: int, m: int, cache=None) -> FinChainComplex:
    if dim < 1 or m < 1:
        raise ValueError(f"need dim ≥ 1 and m ≥ 1; got dim={dim} m={m}")
    degrees = range(0, m)
    basis = {
        k: [KoszulLabel(s, e) for s in monomials(dim, k) for e in combinations(range(1, dim + 1), m - k)]
        for k in degrees
    }
    return build_complex(
        f"koszul_dim{dim}_m{m}", degrees, basis, koszul_boundary, strict=False,
        meta={"family": "koszul", "dim": dim, "m": m}, cache=cache,
    )


# ── Bar ───────────────────────────────────────────────────────────────────────

def bar_boundary(label: WordLabel) -> Dict[WordLabel, Fraction]:
    out: Dict[WordLabel, Fraction] = {}
    letters = label.letters
    for i in range(1, len(letters)):
        merged = letters[: i - 1] + (merge(letters[i - 1], letters[i]),) + letters[i + 1:]
        key = WordLabel("bar", merged)
        out[key] = out.get(key, Fraction(0)) + (1 if i % 2 else -1)
    return {k: v for k, v in out.items() if v}


def build_bar_complex(dim: int, weight: int, cache=None) -> FinChainComplex:
    if dim < 1 or weight < 1:
        raise ValueError(f"need dim ≥ 1 and weight ≥ 1; got dim={dim} weight={weight}")
    degrees = range(-weight, 0)
    basis = {-k: [WordLabel("bar", t) for t in enumerate_tuples(dim, weight, k)] for k in range(1, weight + 1)}
    return build_complex(
        f"bar_dim{dim}_w{weight}", degrees, basis, bar_boundary,
        meta={"family": "bar", "dim": dim, "weight": weight}, cache=cache,
    )


# ── Cobar ─────────────────────────────────────────────────────────────────────

def cobar_boundary(label: WordLabel) -> Dict[WordLabel, Fraction]:
    out: Dict[WordLabel, Fraction] = {}
    for letters, sign in split_block_terms(label.letters):
        key = WordLabel("cobar", letters)
        out[key] = out.get(key, Fraction(0)) + sign
    return {k: v for k, v in out.items() if v}


def cobar_words(dim: int, weight: int, length: int, multilinear: bool = False) -> List[WordLabel]:
    out = []
    for sizes in compositions(weight, length, allow_empty=False):
        if max(sizes) > dim:
            continue
        for letters in product(*(combinations(range(1, dim + 1), s) for s in sizes)):
            if multilinear and sorted(i for l in letters for i in l) != list(range(1, dim + 1)):
                continue
            out.append(WordLabel("cobar", tuple(letters)))
    return sorted(out)


def build_cobar_complex(dim: int, weight: int, multilinear: bool = False, cache=None) -> FinChainComplex:
    """With multilinear=True (weight = dim) only words using each index once."""
    if dim < 1 or weight < 1:
        raise ValueError(f"need dim ≥ 1 and weight ≥ 1; got dim={dim} weight={weight}")
    if multilinear and weight != dim:
        raise ValueError(f"multilinear cobar needs weight == dim, got {weight} != {dim}")
    degrees = range(1, weight + 1)
    basis = {k: cobar_words(dim, weight, k, multilinear) for k in degrees}
    tag = "_multi" if multilinear else ""
    return build_complex(
        f"cobar_dim{dim}_w{weight}{tag}", degrees, basis, cobar_boundary,
        meta={"family": "cobar", "dim": dim, "weight": weight, "multilinear": multilinear},
        cache=cache,
    )


def cobar_matches_permutahedron(n: int) -> bool:
    """
    Words using each of 1..n exactly once are the ordered set partitions
    of [n]; the cobar differential there is the boundary of P_{n−1}
    shifted by n.
    """
    cobar = build_cobar_complex(n, n, multilinear=True)
    perm = build_perm_complex(n)
    for k in cobar.degrees:
        words = [w.letters for w in cobar.basis[k]]
        cells = [c.blocks for c in perm.basis[k - n]]
        if words != cells:
            logger.warning(f"cobar/perm bases differ at length {k}")
            return False
        if cobar.differential(k) != perm.differential(k - n):
            logger.warning(f"cobar/perm differentials differ at length {k}")
            return False
    return True


# ── Expected totals ───────────────────────────────────────────────────────────

def expected_bar_total(dim: int, weight: int) -> int:
    return comb(dim, weight)


def expected_cobar_total(dim: int, weight: int) -> int:
    return comb(dim + weight - 1, weight)


def expected_koszul(dim: int, m: int) -> int:
    return comb(dim + m - 1, m)
