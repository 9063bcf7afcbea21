"""
Exact rational linear algebra
=============================
Sparse matrices over Q with entries stored as fractions.Fraction in a
{(row, col): value} map, plus the rank / kernel / solve routines every
cohomology computation in the package goes through.

rank() clears denominators row by row and runs fraction-free elimination
over the integers (cross-multiplication followed by content removal), with
rows processed sparsest-first. kernel() and solve() use Gauss–Jordan over
Fraction; they are only called on the small matrices of the bracket layer.

Text form (matrix cache):
    rows cols nnz
    row col num den        one line per nonzero, sorted by (row, col)
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from complexes import DimensionMismatch

Rational = Fraction
Vector = Dict[int, Fraction]


# ── Sparse matrix ─────────────────────────────────────────────────────────────

class SparseMatrix:
    """Immutable sparse matrix over Q. Zero entries are never stored."""

    __slots__ = ("_rows", "_cols", "_entries")

    def __init__(
        self,
        rows: int,
        cols: int,
        entries: Optional[Mapping[Tuple[int, int], object]] = None,
    ) -> None:
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        clean: Dict[Tuple[int, int], Fraction] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            q = Fraction(v)
            if q:
                clean[(r, c)] = q
        self._rows = rows
        self._cols = cols
        self._entries = clean

    # ── Constructors ──────────────────────────────────────────────────────────

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {
            (r, c): v
            for r, row in enumerate(data)
            for c, v in enumerate(row)
            if v
        }
        return cls(rows, cols, entries)

    # ── Accessors ─────────────────────────────────────────────────────────────

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self._rows, self._cols

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def get(self, r: int, c: int) -> Fraction:
        return self._entries.get((r, c), Fraction(0))

    def items(self) -> List[Tuple[Tuple[int, int], Fraction]]:
        """Nonzero entries sorted by (row, col)."""
        return sorted(self._entries.items())

    def row_dicts(self) -> Dict[int, Vector]:
        out: Dict[int, Vector] = {}
        for (r, c), v in self._entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def column(self, c: int) -> Vector:
        return {r: v for (r, cc), v in self._entries.items() if cc == c}

    def is_zero(self) -> bool:
        return not self._entries

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self._cols for _ in range(self._rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    # ── Algebra ───────────────────────────────────────────────────────────────

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self._cols, self._rows, {(c, r): v for (r, c), v in self._entries.items()})

    def apply(self, vec: Mapping[int, object]) -> Vector:
        """Matrix times a sparse column vector."""
        by_col: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, c), v in self._entries.items():
            by_col.setdefault(c, []).append((r, v))
        out: Vector = {}
        for c, x in vec.items():
            for r, v in by_col.get(c, ()):
                out[r] = out.get(r, Fraction(0)) + v * x
        return {r: v for r, v in out.items() if v}

    def scale(self, k: object) -> "SparseMatrix":
        q = Fraction(k)
        return SparseMatrix(self._rows, self._cols, {rc: v * q for rc, v in self._entries.items()})

    def with_entry(self, r: int, c: int, value: object) -> "SparseMatrix":
        """Copy with one entry replaced (used to corrupt matrices in tests)."""
        entries = dict(self._entries)
        entries[(r, c)] = Fraction(value)
        return SparseMatrix(self._rows, self._cols, entries)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        entries = dict(self._entries)
        for rc, v in other._entries.items():
            entries[rc] = entries.get(rc, Fraction(0)) + v
        return SparseMatrix(self._rows, self._cols, entries)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return compose(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self._rows, self._cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self._rows}x{self._cols}, nnz={self.nnz})"


def compose(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Exact product a·b (apply b first)."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"compose: {a.shape} · {b.shape}")
    a_rows = a.row_dicts()
    b_rows = b.row_dicts()
    entries: Dict[Tuple[int, int], Fraction] = {}
    for r, arow in a_rows.items():
        acc: Vector = {}
        for k, av in arow.items():
            for c, bv in b_rows.get(k, {}).items():
                acc[c] = acc.get(c, Fraction(0)) + av * bv
        for c, v in acc.items():
            if v:
                entries[(r, c)] = v
    return SparseMatrix(a.rows, b.cols, entries)


# ── Rank (fraction-free) ──────────────────────────────────────────────────────

def _integer_row(row: Mapping[int, Fraction]) -> Dict[int, int]:
    """Scale a rational row to a primitive integer row."""
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()}
    return _primitive(ints)


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def rank(m: SparseMatrix, row_order: Optional[Sequence[int]] = None) -> int:
    """
    Rank over Q.

    Rows are processed sparsest-first unless `row_order` (a permutation of
    the nonzero row indices, or of range(m.rows)) is supplied; the result
    does not depend on the order.
    """
    if m.nnz == 0:
        return 0
    by_row = m.row_dicts()
    if row_order is None:
        order = sorted(by_row, key=lambda r: (len(by_row[r]), min(by_row[r]), r))
    else:
        order = [r for r in row_order if r in by_row]

    pivots: Dict[int, Dict[int, int]] = {}
    for r in order:
        row = _integer_row(by_row[r])
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = row
                break
            a, b = prow[lead], row[lead]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * v for c, v in row.items()}
            for c, v in prow.items():
                x = new.get(c, 0) - b * v
                if x:
                    new[c] = x
                else:
                    new.pop(c, None)
            row = _primitive(new)
    return len(pivots)


# ── Gauss–Jordan over Fraction ────────────────────────────────────────────────

class Echelon:
    """
    Incrementally maintained reduced row echelon form of a set of vectors.
    add() reports whether the vector was independent of those seen so far.
    """

    def __init__(self) -> None:
        self.pivots: Dict[int, Vector] = {}

    def reduce(self, vec: Mapping[int, object]) -> Vector:
        v: Vector = {c: Fraction(x) for c, x in vec.items() if x}
        for c in [c for c in v if c in self.pivots]:
            coef = v.get(c)
            if not coef:
                continue
            for cc, pv in self.pivots[c].items():
                x = v.get(cc, Fraction(0)) - coef * pv
                if x:
                    v[cc] = x
                else:
                    v.pop(cc, None)
        return v

    def add(self, vec: Mapping[int, object]) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        lead = min(v)
        inv = 1 / v[lead]
        v = {c: x * inv for c, x in v.items()}
        for prow in self.pivots.values():
            coef = prow.get(lead)
            if coef:
                for cc, x in v.items():
                    y = prow.get(cc, Fraction(0)) - coef * x
                    if y:
                        prow[cc] = y
                    else:
                        prow.pop(cc, None)
        self.pivots[lead] = v
        return True

    def __len__(self) -> int:
        return len(self.pivots)


def kernel(m: SparseMatrix) -> List[Vector]:
    """Basis of the right nullspace, one vector per free column (ascending)."""
    ech = Echelon()
    for _, row in sorted(m.row_dicts().items()):
        ech.add(row)
    basis: List[Vector] = []
    for j in range(m.cols):
        if j in ech.pivots:
            continue
        vec: Vector = {j: Fraction(1)}
        for c, prow in ech.pivots.items():
            x = prow.get(j)
            if x:
                vec[c] = -x
        basis.append(vec)
    return basis


def solve(m: SparseMatrix, b: Mapping[int, object]) -> Optional[Vector]:
    """Some x with m·x = b, or None when b is not in the column space."""
    aug = m.cols
    rows = m.row_dicts()
    for r, v in b.items():
        if v:
            rows.setdefault(r, {})[aug] = Fraction(v)
    ech = Echelon()
    for _, row in sorted(rows.items()):
        ech.add(row)
    if aug in ech.pivots:
        return None
    return {c: prow[aug] for c, prow in ech.pivots.items() if prow.get(aug)}


def in_span(vectors: Iterable[Mapping[int, object]], target: Mapping[int, object]) -> bool:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return not ech.reduce(target)


# ── Text form ─────────────────────────────────────────────────────────────────

def to_text(m: SparseMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.nnz}"]
    for (r, c), v in m.items():
        lines.append(f"{r} {c} {v.numerator} {v.denominator}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> SparseMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    rows, cols, nnz = (int(x) for x in lines[0].split())
    if len(lines) - 1 != nnz:
        raise ValueError(f"header announces {nnz} entries, found {len(lines) - 1}")
    entries = {}
    for ln in lines[1:]:
        r, c, num, den = (int(x) for x in ln.split())
        entries[(r, c)] = Fraction(num, den)
    return SparseMatrix(rows, cols, entries)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)
