"""
Brackets on Hochschild cochains and polyvector fields
=====================================================
Gerstenhaber bracket from the pre-Lie insertion

    a ∘ b = Σ_i (−1)^{(i−1)(q−1)} a ∘_i b,    [a, b] = a∘b − (−1)^{|a||b|} b∘a

with |a| = arity − 1. Full cochains (dual-basis labels on Ō_V) are composed
by matching b's output with a's i-th input, inside truncation windows;
polydifferential cochains are composed symbolically through the Leibniz
rule. With these conventions [μ, a] = (−1)^{|a|} d_H a.

Schouten bracket: polyvectors are written as superfunctions θ_A·x^J and

    [P, Q] = Σ_i (P ∂⃖_{θ_i})(∂_{x_i} Q) − (∂_{x_i} P)(∂⃗_{θ_i} Q),

which restricts to the commutator on vector fields.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from itertools import combinations, permutations
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from complexes import DimensionMismatch, NotACocycle, WindowOverflow
from complexes.cells import sort_sign
from complexes.hoch import (
    FullHochLabel,
    PolyOpLabel,
    hochschild_differential,
    include_polydiff,
    polydiff_basis,
    polydiff_boundary,
)
from complexes.polyalg import (
    Monomial,
    derivative,
    enumerate_tuples,
    iterated_coproduct,
    merge,
    monomials,
    monomials_up_to,
)
from complexes.ratlin import format_rational
from utils.logger import setup_logger

logger = setup_logger(__name__)

Label = Union[FullHochLabel, PolyOpLabel]
Terms = Dict[Label, Fraction]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _clean(terms: Mapping[Label, Fraction]) -> Terms:
    return {k: Fraction(v) for k, v in terms.items() if v}


def _accumulate(out: Terms, key: Label, value) -> None:
    out[key] = out.get(key, Fraction(0)) + value


# ── Cochains ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Cochain:
    """
    Sparse cochain. window = D for full cochains (known on inputs of total
    degree ≤ D); None for polydifferential ones, which are exact.
    """
    terms: Terms
    window: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _clean(self.terms))
        kinds = {type(lab) for lab in self.terms}
        if len(kinds) > 1:
            raise ValueError("cochain mixes full and polydifferential labels")
        if self.is_full:
            if self.window is None:
                raise ValueError("full cochains need a window")
            over = [lab for lab in self.terms if lab.input_degree > self.window]
            if over:
                raise WindowOverflow(f"{over[0]} lies outside window {self.window}", required=over[0].input_degree)

    @property
    def is_full(self) -> bool:
        return any(isinstance(lab, FullHochLabel) for lab in self.terms)

    def arities(self) -> List[int]:
        return sorted({lab.arity for lab in self.terms})

    def max_weight(self) -> int:
        return max((lab.weight for lab in self.terms), default=0)

    def by_arity(self, k: int) -> "Cochain":
        return Cochain({lab: v for lab, v in self.terms.items() if lab.arity == k}, self.window)

    def truncated(self, window: int) -> "Cochain":
        return Cochain({lab: v for lab, v in self.terms.items() if lab.input_degree <= window}, window)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, k) -> "Cochain":
        q = Fraction(k)
        return Cochain({lab: v * q for lab, v in self.terms.items()}, self.window)

    def __add__(self, other: "Cochain") -> "Cochain":
        window = _joint_window(self, other)
        out = dict(self.terms)
        for lab, v in other.terms.items():
            _accumulate(out, lab, v)
        if window is not None:
            out = {lab: v for lab, v in out.items() if not isinstance(lab, FullHochLabel) or lab.input_degree <= window}
        return Cochain(out, window)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)

    def __neg__(self) -> "Cochain":
        return self.scale(-1)


def _joint_window(a: Cochain, b: Cochain) -> Optional[int]:
    windows = [c.window for c in (a, b) if c.window is not None]
    return min(windows) if windows else None


def zero_cochain(window: Optional[int] = None) -> Cochain:
    return Cochain({}, window)


# ── Standard cochains ─────────────────────────────────────────────────────────

def multiplication_cochain(dim: int, window: int) -> Cochain:
    """μ on Ō_V: (x^A, x^B) ↦ x^{A+B} for |A| + |B| ≤ window."""
    terms: Terms = {}
    for a in monomials_up_to(dim, window - 1, min_weight=1):
        for b in monomials_up_to(dim, window - a.weight, min_weight=1):
            terms[FullHochLabel((a, b), merge(a, b))] = Fraction(1)
    return Cochain(terms, window)


def euler_cochain(dim: int, window: int) -> Cochain:
    return Cochain(
        {FullHochLabel((m,), m): Fraction(m.weight) for m in monomials_up_to(dim, window, min_weight=1)},
        window,
    )


def identity_cochain(dim: int, window: int) -> Cochain:
    return Cochain({FullHochLabel((m,), m): Fraction(1) for m in monomials_up_to(dim, window, min_weight=1)}, window)


def gauge_deformation(dim: int, window: int, scales: Mapping[Monomial, object]) -> Cochain:
    """
    g = φ⁻¹∘μ∘(φ⊗φ) − μ for the diagonal automorphism x^a ↦ λ_a x^a of Ō_V
    (missing λ_a default to 1). μ + g is associative, so g is a
    Maurer–Cartan element.
    """
    def lam(m: Monomial) -> Fraction:
        return Fraction(scales.get(m, 1))

    terms: Terms = {}
    for lab in multiplication_cochain(dim, window).terms:
        a, b = lab.inputs
        denom = lam(lab.output)
        if not denom or not lam(a) or not lam(b):
            raise ValueError("gauge scales must be nonzero")
        terms[lab] = lam(a) * lam(b) / denom - 1
    return Cochain(terms, window)


def from_polydiff(c: Cochain, window: int) -> Cochain:
    """Expand a polydifferential cochain into dual-basis terms up to the window."""
    out: Terms = {}
    for lab, v in c.terms.items():
        for fl, fv in include_polydiff(lab, window).items():
            _accumulate(out, fl, v * fv)
    return Cochain(out, window)


# ── Gerstenhaber bracket ──────────────────────────────────────────────────────

def _insert_full(a: Terms, b: Terms) -> Terms:
    by_output: Dict[Monomial, List[Tuple[FullHochLabel, Fraction]]] = {}
    for lab, v in b.items():
        if lab.output.is_one():
            raise ValueError(f"bracket needs Ō-valued cochains, got constant output in {lab}")
        by_output.setdefault(lab.output, []).append((lab, v))
    out: Terms = {}
    for la, va in a.items():
        for i, M in enumerate(la.inputs, start=1):
            for lb, vb in by_output.get(M, ()):
                q = lb.arity
                new = FullHochLabel(la.inputs[: i - 1] + lb.inputs + la.inputs[i:], la.output)
                _accumulate(out, new, _sign((i - 1) * (q - 1)) * va * vb)
    return out


def compose_polydiff(a: PolyOpLabel, b: PolyOpLabel, slot: int) -> Terms:
    """a ∘_slot b by the Leibniz rule: ∂_I(x^{J'} Π g_j) over splits of I."""
    I = a.bunches[slot - 1]
    q = b.arity
    out: Terms = {}
    for parts, mult in iterated_coproduct(I, q + 1):
        d = derivative(b.coeff, parts[0])
        if d is None:
            continue
        rest, c = d
        inner = tuple(merge(A, Ib) for A, Ib in zip(parts[1:], b.bunches))
        new = PolyOpLabel(merge(a.coeff, rest), a.bunches[: slot - 1] + inner + a.bunches[slot:])
        _accumulate(out, new, mult * c)
    return out


def _insert_poly(a: Terms, b: Terms) -> Terms:
    out: Terms = {}
    for la, va in a.items():
        for lb, vb in b.items():
            q = lb.arity
            for i in range(1, la.arity + 1):
                for lab, v in compose_polydiff(la, lb, i).items():
                    _accumulate(out, lab, _sign((i - 1) * (q - 1)) * va * vb * v)
    return out


def bracket_window(a: Cochain, b: Cochain) -> int:
    wa = a.window - max(b.max_weight(), 0)
    wb = b.window - max(a.max_weight(), 0)
    return min(wa, wb)


def gerstenhaber_bracket(a: Cochain, b: Cochain) -> Cochain:
    if a.is_zero() or b.is_zero():
        return zero_cochain(_joint_window(a, b))
    if a.is_full != b.is_full:
        raise ValueError("cannot bracket a full cochain with a polydifferential one")
    full = a.is_full
    window = bracket_window(a, b) if full else None
    if full and window < 1:
        need = max(b.max_weight(), 0) + max(a.max_weight(), 0) + 1
        raise WindowOverflow(
            f"bracket needs windows ≥ {need}, got {a.window} and {b.window}", required=need,
        )
    insert = _insert_full if full else _insert_poly
    out: Terms = {}
    for p in a.arities():
        ap = a.by_arity(p).terms
        for q in b.arities():
            bq = b.by_arity(q).terms
            for lab, v in insert(ap, bq).items():
                _accumulate(out, lab, v)
            sign = _sign((p - 1) * (q - 1))
            for lab, v in insert(bq, ap).items():
                _accumulate(out, lab, -sign * v)
    if full:
        out = {lab: v for lab, v in out.items() if lab.input_degree <= window}
    return Cochain(out, window)


def hochschild_diff_via_bracket(a: Cochain) -> Cochain:
    """
    d_H a computed as Σ_k (−1)^{k−1} [μ, a_k] over the arity-k parts of a,
    with μ sized so that the result keeps a's window.

    [μ, a_k] = (−1)^{k−1} d_H a_k, where k − 1 is the bracket degree of a_k, so
    the per-arity sign only undoes that degree: on a homogeneous cochain this
    is d_H = ±[μ, ·] with one fixed sign, and the two conventions agree.
    """
    if not a.is_full:
        raise ValueError("hochschild_diff_via_bracket works on full cochains")
    dim = next(iter(a.terms)).inputs[0].dim
    mu = multiplication_cochain(dim, a.window + max(a.max_weight(), 0))
    out = zero_cochain(a.window)
    for k in a.arities():
        out = out + gerstenhaber_bracket(mu, a.by_arity(k)).scale(_sign(k - 1))
    return out


def hochschild_diff_direct(a: Cochain) -> Cochain:
    return Cochain(hochschild_differential(a.terms, a.window), a.window)


# ── Maurer–Cartan ─────────────────────────────────────────────────────────────

@dataclass
class MCReport:
    window: int
    residual: Cochain
    arities: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def summary(self) -> str:
        if self.ok:
            return f"Maurer–Cartan within window {self.window} ✓"
        return f"Maurer–Cartan residual has {len(self.residual.terms)} terms in arities {self.arities}"


def mc_check(g: Cochain, dim: Optional[int] = None) -> MCReport:
    """Residual [μ, g] + ½[g, g] of μ + g inside g's window."""
    if g.is_zero():
        return MCReport(g.window or 0, zero_cochain(g.window), [])
    if dim is None:
        dim = next(iter(g.terms)).inputs[0].dim
    mu = multiplication_cochain(dim, g.window + max(g.max_weight(), 0))
    residual = gerstenhaber_bracket(mu, g) + gerstenhaber_bracket(g, g).scale(Fraction(1, 2))
    report = MCReport(residual.window, residual, residual.arities())
    logger.debug(report.summary())
    return report


# ── Polyvector fields and the Schouten bracket ────────────────────────────────

PolyKey = Tuple[Tuple[int, ...], Monomial]


@dataclass(frozen=True)
class PolyVector:
    dim: int
    terms: Dict[PolyKey, Fraction]

    def __post_init__(self) -> None:
        clean = {}
        for (ext, sym), v in self.terms.items():
            if not ext or list(ext) != sorted(set(ext)):
                raise ValueError(f"polyvector exterior part must be nonempty and increasing: {ext}")
            if sym.dim != self.dim:
                raise DimensionMismatch(f"coefficient {sym} not over dim {self.dim}")
            if v:
                clean[(tuple(ext), sym)] = Fraction(v)
        object.__setattr__(self, "terms", clean)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> List[int]:
        return sorted({len(ext) for ext, _ in self.terms})

    def scale(self, k) -> "PolyVector":
        q = Fraction(k)
        return PolyVector(self.dim, {key: v * q for key, v in self.terms.items()})

    def __add__(self, other: "PolyVector") -> "PolyVector":
        if self.dim != other.dim:
            raise DimensionMismatch(f"polyvectors over dim {self.dim} and {other.dim}")
        out = dict(self.terms)
        for key, v in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + v
        return PolyVector(self.dim, out)

    def __sub__(self, other: "PolyVector") -> "PolyVector":
        return self + other.scale(-1)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (ext, sym), v in sorted(self.terms.items()):
            wedge = "^".join(f"e{i}" for i in ext)
            parts.append(f"{format_rational(v)}*{wedge}⊗{sym}")
        return " + ".join(parts)


def _theta_product(a: Tuple[int, ...], b: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], int]]:
    joined = a + b
    if len(set(joined)) != len(joined):
        return None
    return tuple(sorted(joined)), sort_sign(joined)


def _x_derivative(f: Monomial, i: int) -> Optional[Tuple[Monomial, int]]:
    return derivative(f, Monomial.of(f.dim, i))


def schouten_bracket(p: PolyVector, q: PolyVector) -> PolyVector:
    if p.dim != q.dim:
        raise DimensionMismatch(f"schouten: dim {p.dim} vs {q.dim}")
    dim = p.dim
    out: Dict[PolyKey, Fraction] = {}

    def add(ext: Tuple[int, ...], sym: Monomial, v) -> None:
        if ext:
            key = (ext, sym)
            out[key] = out.get(key, Fraction(0)) + v

    for (A, f), cp in p.terms.items():
        for (B, g), cq in q.terms.items():
            for i in range(1, dim + 1):
                # (P ∂⃖_θi)(∂_xi Q)
                if i in A:
                    pos = A.index(i) + 1
                    dg = _x_derivative(g, i)
                    prod = _theta_product(A[: pos - 1] + A[pos:], B)
                    if dg is not None and prod is not None:
                        ext, s = prod
                        add(ext, merge(f, dg[0]), cp * cq * _sign(len(A) - pos) * s * dg[1])
                # −(∂_xi P)(∂⃗_θi Q)
                if i in B:
                    pos = B.index(i) + 1
                    df = _x_derivative(f, i)
                    prod = _theta_product(A, B[: pos - 1] + B[pos:])
                    if df is not None and prod is not None:
                        ext, s = prod
                        add(ext, merge(df[0], g), -cp * cq * _sign(pos - 1) * s * df[1])
    return PolyVector(dim, out)


def wedge(p: PolyVector, q: PolyVector) -> PolyVector:
    if p.dim != q.dim:
        raise DimensionMismatch(f"wedge: dim {p.dim} vs {q.dim}")
    out: Dict[PolyKey, Fraction] = {}
    for (A, f), cp in p.terms.items():
        for (B, g), cq in q.terms.items():
            prod = _theta_product(A, B)
            if prod is None:
                continue
            ext, s = prod
            key = (ext, merge(f, g))
            out[key] = out.get(key, Fraction(0)) + s * cp * cq
    return PolyVector(p.dim, out)


# ── HKR ───────────────────────────────────────────────────────────────────────

def polydiff_differential(z: Cochain) -> Terms:
    out: Terms = {}
    for lab, v in z.terms.items():
        for img, c in polydiff_boundary(lab).items():
            _accumulate(out, img, v * c)
    return _clean(out)


def hkr_project(z: Cochain, dim: Optional[int] = None) -> PolyVector:
    """
    Antisymmetrize the all-weight-one component of a polydifferential
    cocycle onto e_{i_1} ∧ … ∧ e_{i_m} ⊗ x^J.
    """
    if z.is_full:
        raise ValueError("hkr_project works on polydifferential cochains")
    dz = polydiff_differential(z)
    if dz:
        raise NotACocycle(f"hkr_project: δz has {len(dz)} nonzero terms", differential=dz)
    if dim is None:
        if not z.terms:
            raise ValueError("hkr_project of the zero cochain needs dim")
        dim = next(iter(z.terms)).coeff.dim
    out: Dict[PolyKey, Fraction] = {}
    for lab, v in z.terms.items():
        if any(b.weight != 1 for b in lab.bunches):
            continue
        idx = tuple(b.exponents[0] for b in lab.bunches)
        if len(set(idx)) != len(idx):
            continue
        key = (tuple(sorted(idx)), lab.coeff)
        out[key] = out.get(key, Fraction(0)) + sort_sign(idx) * v
    return PolyVector(dim, out)


def hkr_representative(p: PolyVector) -> Cochain:
    """(1/m!) Σ_σ sgn(σ) x^J ∂_{i_σ(1)} ⊗ … ⊗ ∂_{i_σ(m)} for each term e_I ⊗ x^J."""
    out: Terms = {}
    for (ext, sym), v in p.terms.items():
        norm = Fraction(1, factorial(len(ext)))
        for perm in permutations(ext):
            lab = PolyOpLabel(sym, tuple(Monomial.of(p.dim, i) for i in perm))
            _accumulate(out, lab, v * norm * sort_sign(perm))
    return Cochain(out)


# ── Label parsing and JSON ────────────────────────────────────────────────────

_FULL = re.compile(r"^F\(in=\[(.*)\]; out=(.*)\)$")
_POLY = re.compile(r"^H\(J=(.*); I=\[(.*)\]\)$")
_VAR = re.compile(r"x(\d+)(?:\^(\d+))?")


def _parse_compact(text: str, dim: int) -> Monomial:
    text = text.strip().replace("*", "")
    if text in ("", "1"):
        return Monomial.one(dim)
    pos = 0
    indices: List[int] = []
    for m in _VAR.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse monomial {text!r}")
        indices.extend([int(m.group(1))] * int(m.group(2) or 1))
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"cannot parse monomial {text!r}")
    return Monomial.of(dim, *indices)


def parse_label(text: str, dim: int) -> Label:
    m = _FULL.match(text.strip())
    if m:
        inputs = tuple(_parse_compact(t, dim) for t in m.group(1).split(","))
        return FullHochLabel(inputs, _parse_compact(m.group(2), dim))
    m = _POLY.match(text.strip())
    if m:
        bunches = tuple(_parse_compact(t, dim) for t in m.group(2).split(","))
        return PolyOpLabel(_parse_compact(m.group(1), dim), bunches)
    raise ValueError(f"unrecognised cochain label {text!r}")


def cochain_to_json(c: Cochain, dim: int) -> Dict[str, object]:
    return {
        "window": {"dim": dim, "max_input_degree": c.window},
        "terms": [{"label": str(lab), "coeff": format_rational(v)} for lab, v in sorted(c.terms.items())],
    }


def cochain_from_json(data: Mapping[str, object]) -> Tuple[Cochain, int]:
    window = data.get("window") or {}
    dim = int(window.get("dim", 1))
    terms = {parse_label(t["label"], dim): Fraction(t["coeff"]) for t in data.get("terms", [])}
    return Cochain(terms, window.get("max_input_degree")), dim


def polyvector_to_json(p: PolyVector) -> Dict[str, object]:
    return {
        "dim": p.dim,
        "terms": [
            {"ext": list(ext), "sym": str(sym), "coeff": format_rational(v)}
            for (ext, sym), v in sorted(p.terms.items())
        ],
    }


def polyvector_from_json(data: Mapping[str, object]) -> PolyVector:
    dim = int(data["dim"])
    terms = {
        (tuple(t["ext"]), Monomial.parse(t["sym"], dim)): Fraction(t["coeff"])
        for t in data.get("terms", [])
    }
    return PolyVector(dim, terms)


# ── Random samples (seeded) ───────────────────────────────────────────────────

def _coeff(rng: np.random.Generator) -> Fraction:
    value = 0
    while value == 0:
        value = int(rng.integers(-3, 4))
    return Fraction(value)


def random_full_cochain(
    rng: np.random.Generator, dim: int, arity: int, weight: int, window: int, size: int = 4,
) -> Cochain:
    """Ō-valued cochain of one arity and one weight, `size` random terms."""
    pool = []
    for s in range(arity, window + 1):
        if weight + s < 1:
            continue
        for inputs in enumerate_tuples(dim, s, arity):
            for out in monomials(dim, weight + s):
                pool.append(FullHochLabel(inputs, out))
    if not pool:
        return zero_cochain(window)
    picks = rng.choice(len(pool), size=min(size, len(pool)), replace=False)
    return Cochain({pool[int(i)]: _coeff(rng) for i in sorted(picks)}, window)


def random_polydiff_cochain(
    rng: np.random.Generator, dim: int, m: int, n: int, arity: int, size: int = 3,
) -> Cochain:
    pool = polydiff_basis(dim, m, n, arity)
    if not pool:
        return zero_cochain()
    picks = rng.choice(len(pool), size=min(size, len(pool)), replace=False)
    return Cochain({pool[int(i)]: _coeff(rng) for i in sorted(picks)})


def random_polyvector(rng: np.random.Generator, dim: int, degree: int, max_weight: int, size: int = 3) -> PolyVector:
    exts = list(combinations(range(1, dim + 1), degree))
    syms = monomials_up_to(dim, max_weight)
    terms: Dict[PolyKey, Fraction] = {}
    for _ in range(size):
        ext = exts[int(rng.integers(len(exts)))]
        sym = syms[int(rng.integers(len(syms)))]
        terms[(ext, sym)] = terms.get((ext, sym), Fraction(0)) + _coeff(rng)
    return PolyVector(dim, terms)


def polydiff_coboundary(rng: np.random.Generator, dim: int, m: int, n: int, arity: int) -> Cochain:
    """δy for a random y of the given arity (zero when arity < 1)."""
    if arity < 1:
        return zero_cochain()
    y = random_polydiff_cochain(rng, dim, m, n, arity, size=2)
    return Cochain(polydiff_differential(y))


def graded_jacobi_defect(bracket, a, b, c, da: int, db: int):
    """[a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]]."""
    lhs = bracket(a, bracket(b, c))
    rhs1 = bracket(bracket(a, b), c)
    rhs2 = bracket(b, bracket(a, c)).scale(_sign(da * db))
    return lhs - rhs1 - rhs2
