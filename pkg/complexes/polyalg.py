"""
Monomial combinatorics for the symmetric algebra on V and V*.
A monomial is an exponent multiset over {1..dim}; products are multiset
unions and the coproduct is the standard cocommutative one with binomial
multiplicities. V sits in degree 0, so no Koszul signs appear here.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb, factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from complexes import DimensionMismatch

_TOKEN = re.compile(r"^x(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True, order=True)
class Monomial:
    dim: int
    exponents: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if list(self.exponents) != sorted(self.exponents):
            raise ValueError(f"exponent multiset must be sorted: {self.exponents}")
        if any(not 1 <= i <= self.dim for i in self.exponents):
            raise ValueError(f"index out of range 1..{self.dim}: {self.exponents}")

    @classmethod
    def one(cls, dim: int) -> "Monomial":
        return cls(dim, ())

    @classmethod
    def of(cls, dim: int, *indices: int) -> "Monomial":
        return cls(dim, tuple(sorted(indices)))

    @classmethod
    def from_counts(cls, dim: int, counts: Sequence[int]) -> "Monomial":
        """counts[i−1] = exponent of x_i."""
        return cls(dim, tuple(i + 1 for i, e in enumerate(counts) for _ in range(e)))

    @classmethod
    def parse(cls, text: str, dim: int) -> "Monomial":
        text = text.strip()
        if text in ("", "1"):
            return cls.one(dim)
        indices: List[int] = []
        for tok in text.split("*"):
            m = _TOKEN.match(tok.strip())
            if not m:
                raise ValueError(f"cannot parse monomial token {tok!r} in {text!r}")
            indices.extend([int(m.group(1))] * int(m.group(2) or 1))
        return cls.of(dim, *indices)

    @property
    def weight(self) -> int:
        return len(self.exponents)

    def counts(self) -> Tuple[int, ...]:
        c = Counter(self.exponents)
        return tuple(c.get(i, 0) for i in range(1, self.dim + 1))

    def is_one(self) -> bool:
        return not self.exponents

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.counts(), other.counts()))

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for i, e in enumerate(self.counts(), start=1):
            if e == 1:
                parts.append(f"x{i}")
            elif e > 1:
                parts.append(f"x{i}^{e}")
        return "*".join(parts)


MultiIndexTuple = Tuple[Monomial, ...]


def _same_dim(a: Monomial, b: Monomial) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"monomials over dim {a.dim} and {b.dim}")


# ── Product / coproduct ───────────────────────────────────────────────────────

def merge(a: Monomial, b: Monomial) -> Monomial:
    _same_dim(a, b)
    return Monomial(a.dim, tuple(sorted(a.exponents + b.exponents)))


def merge_all(dim: int, parts: Sequence[Monomial]) -> Monomial:
    out = Monomial.one(dim)
    for p in parts:
        out = merge(out, p)
    return out


def difference(a: Monomial, b: Monomial) -> Monomial:
    """a / b for b dividing a."""
    _same_dim(a, b)
    if not b.divides(a):
        raise ValueError(f"{b} does not divide {a}")
    return Monomial.from_counts(a.dim, [x - y for x, y in zip(a.counts(), b.counts())])


def split_multiplicity(whole: Monomial, part: Monomial) -> int:
    """Π C(e_i, a_i): the coefficient of part ⊗ (whole/part) in Δ(whole)."""
    out = 1
    for e, a in zip(whole.counts(), part.counts()):
        out *= comb(e, a)
    return out


def coproduct_splits(m: Monomial) -> List[Tuple[Monomial, Monomial, int]]:
    """All (left, right, multiplicity) in Δm, empty parts included."""
    counts = m.counts()
    out = []
    for a in product(*(range(e + 1) for e in counts)):
        left = Monomial.from_counts(m.dim, a)
        right = Monomial.from_counts(m.dim, [e - x for e, x in zip(counts, a)])
        out.append((left, right, split_multiplicity(m, left)))
    out.sort(key=lambda t: (t[0].weight, t[0].exponents))
    return out


def reduced_coproduct_splits(m: Monomial) -> List[Tuple[Monomial, Monomial, int]]:
    return [t for t in coproduct_splits(m) if not t[0].is_one() and not t[1].is_one()]


def iterated_coproduct(m: Monomial, parts: int) -> List[Tuple[MultiIndexTuple, int]]:
    """Δ^{parts−1} m as (tuple, multinomial multiplicity); empty parts allowed."""
    if parts < 1:
        raise ValueError(f"parts must be ≥ 1, got {parts}")
    if parts == 1:
        return [((m,), 1)]
    out = []
    for left, rest, mult in coproduct_splits(m):
        for tail, tmult in iterated_coproduct(rest, parts - 1):
            out.append(((left,) + tail, mult * tmult))
    return out


# ── Derivatives ───────────────────────────────────────────────────────────────

def falling(e: int, a: int) -> int:
    return factorial(e) // factorial(e - a) if a <= e else 0


def derivative(m: Monomial, by: Monomial) -> Optional[Tuple[Monomial, int]]:
    """∂_by x^m = coeff · x^{m−by}, or None when it vanishes."""
    _same_dim(m, by)
    if not by.divides(m):
        return None
    coeff = 1
    for e, a in zip(m.counts(), by.counts()):
        coeff *= falling(e, a)
    return difference(m, by), coeff


# ── Enumeration ───────────────────────────────────────────────────────────────

def monomials(dim: int, weight: int) -> List[Monomial]:
    return [Monomial(dim, c) for c in combinations_with_replacement(range(1, dim + 1), weight)]


def monomials_up_to(dim: int, max_weight: int, min_weight: int = 0) -> List[Monomial]:
    return [m for w in range(min_weight, max_weight + 1) for m in monomials(dim, w)]


def compositions(total: int, parts: int, allow_empty: bool) -> Iterator[Tuple[int, ...]]:
    """Weight patterns, largest first part first."""
    low = 0 if allow_empty else 1
    if parts == 1:
        if total >= low:
            yield (total,)
        return
    for first in range(total - low * (parts - 1), low - 1, -1):
        for rest in compositions(total - first, parts - 1, allow_empty):
            yield (first,) + rest


def enumerate_tuples(
    dim: int,
    total_weight: int,
    parts_count: int,
    allow_empty: bool = False,
) -> List[MultiIndexTuple]:
    if total_weight < 0 or parts_count < 1:
        raise ValueError(f"bad enumeration request weight={total_weight} parts={parts_count}")
    out: List[MultiIndexTuple] = []
    for pattern in compositions(total_weight, parts_count, allow_empty):
        for combo in product(*(monomials(dim, w) for w in pattern)):
            out.append(tuple(combo))
    return out


def tuple_count(dim: int, total_weight: int, parts_count: int, allow_empty: bool = False) -> int:
    """Stars-and-bars count matching len(enumerate_tuples(...))."""
    total = 0
    for pattern in compositions(total_weight, parts_count, allow_empty):
        n = 1
        for w in pattern:
            n *= comb(dim + w - 1, w)
        total += n
    return total


def total_weight(parts: Sequence[Monomial]) -> int:
    return sum(p.weight for p in parts)


def as_counter(terms: Sequence[Tuple[MultiIndexTuple, int]]) -> Dict[MultiIndexTuple, int]:
    out: Dict[MultiIndexTuple, int] = {}
    for t, mult in terms:
        out[t] = out.get(t, 0) + mult
    return out
