"""
Finite cochain complexes
========================
FinChainComplex is the one object every builder in the package returns:
a contiguous range of degrees, an ordered basis per degree and a sparse
differential diff[d]: C^d → C^{d+1} (cochain convention).

Homological complexes (cell complexes) are stored with non-positive
degrees so their boundary also raises the stored degree by one.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from complexes import InvalidComplex
from complexes.ratlin import Echelon, SparseMatrix, compose, format_rational, kernel, rank
from utils.logger import setup_logger

logger = setup_logger(__name__)

Label = Hashable
Boundary = Callable[[Label], Mapping[Label, object]]


# ── Public data structures ────────────────────────────────────────────────────

@dataclass(frozen=True)
class FinChainComplex:
    name: str
    degrees: Tuple[int, ...]
    basis: Dict[int, Tuple[Label, ...]]
    diff: Dict[int, SparseMatrix]
    meta: Dict[str, object] = field(default_factory=dict, compare=False)

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def differential(self, d: int) -> SparseMatrix:
        """diff(d) : C^d → C^{d+1}; zero map outside the stored range."""
        if d in self.diff:
            return self.diff[d]
        return SparseMatrix.zeros(self.dim(d + 1), self.dim(d))

    def index(self, d: int) -> Dict[Label, int]:
        return {lab: i for i, lab in enumerate(self.basis.get(d, ()))}

    def with_differential(self, d: int, matrix: SparseMatrix) -> "FinChainComplex":
        diff = dict(self.diff)
        diff[d] = matrix
        return FinChainComplex(self.name, self.degrees, self.basis, diff, self.meta)

    def sizes(self) -> Dict[int, int]:
        return {d: self.dim(d) for d in self.degrees}


@dataclass
class Violation:
    degree: int
    label: str
    target: str
    coefficient: Fraction


@dataclass
class ValidationReport:
    name: str
    ok: bool
    shape_errors: List[str] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: d²=0 ✓"
        parts = list(self.shape_errors)
        for v in self.violations[:5]:
            parts.append(f"deg {v.degree}: d²({v.label}) has {v.coefficient} at {v.target}")
        return f"{self.name}: FAILED: " + "; ".join(parts)


@dataclass
class BettiTable:
    dims: Dict[int, int]

    def total(self) -> int:
        return sum(self.dims.values())

    def support(self) -> List[int]:
        return [d for d, b in sorted(self.dims.items()) if b]

    def __getitem__(self, d: int) -> int:
        return self.dims.get(d, 0)


# ── Construction ──────────────────────────────────────────────────────────────

def build_complex(
    name: str,
    degrees: Sequence[int],
    basis: Mapping[int, Sequence[Label]],
    boundary: Boundary,
    strict: bool = True,
    meta: Optional[Dict[str, object]] = None,
    cache=None,
) -> FinChainComplex:
    """
    Assemble a complex from per-degree bases and a function giving the
    differential of one basis label as {label: coefficient}.

    With strict=False, image labels missing from the next basis are dropped
    (quotient-complex truncation); otherwise they raise KeyError.
    `cache` (a utils.matrix_cache.MatrixCache) short-circuits matrices that
    were stored by an earlier run under the same complex name.
    """
    degrees = tuple(sorted(degrees))
    if degrees and list(degrees) != list(range(degrees[0], degrees[-1] + 1)):
        raise ValueError(f"{name}: degrees must be contiguous, got {degrees}")
    frozen = {d: tuple(basis.get(d, ())) for d in degrees}
    diff: Dict[int, SparseMatrix] = {}
    for d in degrees:
        target = frozen.get(d + 1, ())
        shape = (len(target), len(frozen[d]))
        if cache is not None:
            hit = cache.fetch(name, d, shape)
            if hit is not None:
                diff[d] = hit
                continue
        tindex = {lab: i for i, lab in enumerate(target)}
        entries: Dict[Tuple[int, int], Fraction] = {}
        for c, lab in enumerate(frozen[d]):
            for img, coeff in boundary(lab).items():
                r = tindex.get(img)
                if r is None:
                    if strict and coeff:
                        raise KeyError(f"{name}: d({lab}) hits {img}, not in degree {d + 1}")
                    continue
                entries[(r, c)] = entries.get((r, c), Fraction(0)) + Fraction(coeff)
        diff[d] = SparseMatrix(shape[0], shape[1], entries)
        if cache is not None:
            cache.put(name, d, diff[d])
    logger.debug(f"{name}: basis sizes {[len(frozen[d]) for d in degrees]}")
    return FinChainComplex(name, degrees, frozen, diff, dict(meta or {}))


def empty_complex(name: str = "empty") -> FinChainComplex:
    return FinChainComplex(name, (), {}, {})


# ── Validation & homology ─────────────────────────────────────────────────────

def validate(c: FinChainComplex) -> ValidationReport:
    """Check matrix shapes against the bases and d∘d = 0 exactly."""
    report = ValidationReport(name=c.name, ok=True)
    for d in c.degrees:
        m = c.differential(d)
        want = (c.dim(d + 1), c.dim(d))
        if m.shape != want:
            report.shape_errors.append(f"diff({d}) is {m.shape}, expected {want}")
    if report.shape_errors:
        report.ok = False
        return report

    for d in c.degrees:
        if d + 1 not in c.basis:
            continue
        dd = compose(c.differential(d + 1), c.differential(d))
        src = c.basis[d]
        dst = c.basis.get(d + 2, ())
        for (r, col), v in dd.items():
            report.violations.append(Violation(d, str(src[col]), str(dst[r]), v))
    report.ok = not report.violations
    if report.ok:
        logger.debug(f"{c.name}: validated")
    else:
        logger.warning(report.summary())
    return report


def _rank_job(m: SparseMatrix) -> int:
    return rank(m)


def betti(c: FinChainComplex, jobs: int = 1) -> BettiTable:
    """Cohomology dimensions |C^d| − rank diff(d) − rank diff(d−1)."""
    report = validate(c)
    if not report.ok:
        raise InvalidComplex(f"betti: {report.summary()}", report)
    mats = [c.differential(d) for d in c.degrees]
    if jobs > 1 and len(mats) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ranks = list(pool.map(_rank_job, mats))
    else:
        ranks = [rank(m) for m in mats]
    r = dict(zip(c.degrees, ranks))
    dims = {d: c.dim(d) - r[d] - r.get(d - 1, 0) for d in c.degrees}
    return BettiTable(dims)


def euler(c: FinChainComplex) -> int:
    return sum((-1) ** (d % 2) * c.dim(d) for d in c.degrees)


def cohomology_basis(c: FinChainComplex, d: int) -> List[Dict[Label, Fraction]]:
    """Cocycle representatives of a basis of H^d, as {label: coefficient}."""
    if d not in c.basis:
        return []
    ech = Echelon()
    prev = c.differential(d - 1)
    for j in range(prev.cols):
        ech.add(prev.column(j))
    reps = []
    labels = c.basis[d]
    for vec in kernel(c.differential(d)):
        if ech.add(vec):
            reps.append({labels[i]: x for i, x in sorted(vec.items())})
    return reps


def permuted(c: FinChainComplex, perms: Mapping[int, Sequence[int]]) -> FinChainComplex:
    """
    Relabel: the new basis at degree d is [old[p] for p in perms[d]], with
    every differential conjugated to match.
    """
    new_basis = {d: tuple(c.basis[d][p] for p in perms.get(d, range(c.dim(d)))) for d in c.degrees}
    where = {d: {old: new for new, old in enumerate(perms.get(d, range(c.dim(d))))} for d in c.degrees}
    diff = {}
    for d in c.degrees:
        m = c.differential(d)
        rows = where.get(d + 1, {})
        diff[d] = SparseMatrix(m.rows, m.cols, {(rows[r], where[d][col]): v for (r, col), v in m.items()})
    return FinChainComplex(c.name, c.degrees, new_basis, diff, c.meta)


# ── Serialization ─────────────────────────────────────────────────────────────

def to_json(c: FinChainComplex) -> Dict[str, object]:
    return {
        "degrees": list(c.degrees),
        "basis": {str(d): [str(lab) for lab in c.basis[d]] for d in c.degrees},
        "diff": {
            str(d): [[r, col, format_rational(v)] for (r, col), v in c.differential(d).items()]
            for d in c.degrees
        },
    }


def from_json(data: Mapping[str, object], name: str = "loaded") -> FinChainComplex:
    degrees = tuple(int(d) for d in data["degrees"])
    basis = {int(d): tuple(labs) for d, labs in data["basis"].items()}
    diff = {}
    for d in degrees:
        rows = len(basis.get(d + 1, ()))
        entries = {(r, col): Fraction(v) for r, col, v in data["diff"].get(str(d), [])}
        diff[d] = SparseMatrix(rows, len(basis.get(d, ())), entries)
    return FinChainComplex(name, degrees, basis, diff)
