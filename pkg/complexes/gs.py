"""
Gerstenhaber–Schack complexes of the polynomial bialgebra
=========================================================
Polydifferential labels (I_1..I_k ; J_1..J_l) stand for the operator

    f_1 ⊗ … ⊗ f_k ↦ x^{J_1} ⊗ … ⊗ x^{J_l} · Δ^{l−1}(∂_{I_1} f_1 ⋯ ∂_{I_k} f_k)

and are graded by (k, l), total degree k + l. The differential splits an
input-side bunch I_a with sign (−1)^a, or an output-side bunch J_b with
sign (−1)^k·(−1)^b, with multiset multiplicities in both cases.

The full complex uses dual-basis labels (M_1..M_p ; N_1..N_q), all parts
nonempty, truncated to Σ|M| ≤ D_in and Σ|N| ≤ D_out (quotient). Its
differential is d¹ + (−1)^p d², where d¹ is the Hochschild differential
with values in Ō^{⊗q} (acted on through Δ^{q−1}) and d² is its dual built
from the coaction and the reduced coproduct.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Tuple

from complexes import TruncationOverflow
from complexes.chain import FinChainComplex, build_complex
from complexes.ratlin import compose
from complexes.polyalg import (
    Monomial,
    MultiIndexTuple,
    coproduct_splits,
    derivative,
    enumerate_tuples,
    iterated_coproduct,
    merge,
    merge_all,
    monomials_up_to,
    reduced_coproduct_splits,
    split_multiplicity,
    total_weight,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)

Bounds = Tuple[int, int]
GSCochain = Dict["FullGSLabel", Fraction]


def _compact(m: Monomial) -> str:
    return str(m).replace("*", "")


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


# ── Labels ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class GSOpLabel:
    out_bunches: MultiIndexTuple
    in_bunches: MultiIndexTuple

    def __post_init__(self) -> None:
        for part in (self.out_bunches, self.in_bunches):
            if not part or any(b.is_one() for b in part):
                raise ValueError(f"GS bunches must be nonempty monomials: {self}")

    @property
    def position(self) -> Tuple[int, int]:
        return len(self.out_bunches), len(self.in_bunches)

    @property
    def bigrade(self) -> Tuple[int, int]:
        return total_weight(self.out_bunches), total_weight(self.in_bunches)

    def __str__(self) -> str:
        i = ",".join(_compact(b) for b in self.out_bunches)
        j = ",".join(_compact(b) for b in self.in_bunches)
        return f"G(I=[{i}]; J=[{j}])"


@dataclass(frozen=True, order=True)
class FullGSLabel:
    inputs: MultiIndexTuple
    outputs: MultiIndexTuple

    def __post_init__(self) -> None:
        for part in (self.inputs, self.outputs):
            if not part or any(m.is_one() for m in part):
                raise ValueError(f"full GS parts must be nonempty monomials: {self}")

    @property
    def arity(self) -> Tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    @property
    def degrees(self) -> Tuple[int, int]:
        return total_weight(self.inputs), total_weight(self.outputs)

    @property
    def weight(self) -> int:
        din, dout = self.degrees
        return dout - din

    def __str__(self) -> str:
        ins = ", ".join(str(m) for m in self.inputs)
        outs = ", ".join(str(m) for m in self.outputs)
        return f"GF(in=[{ins}]; out=[{outs}])"


# ── Polydifferential complex ──────────────────────────────────────────────────

def _split_terms(parts: MultiIndexTuple) -> List[Tuple[MultiIndexTuple, int]]:
    out = []
    for a, bunch in enumerate(parts, start=1):
        for left, right, mult in reduced_coproduct_splits(bunch):
            out.append((parts[: a - 1] + (left, right) + parts[a:], _sign(a) * mult))
    return out


def poly_d1(label: GSOpLabel) -> Dict[GSOpLabel, Fraction]:
    out: Dict[GSOpLabel, Fraction] = {}
    for new, c in _split_terms(label.out_bunches):
        key = GSOpLabel(new, label.in_bunches)
        out[key] = out.get(key, Fraction(0)) + c
    return out


def poly_d2(label: GSOpLabel) -> Dict[GSOpLabel, Fraction]:
    out: Dict[GSOpLabel, Fraction] = {}
    for new, c in _split_terms(label.in_bunches):
        key = GSOpLabel(label.out_bunches, new)
        out[key] = out.get(key, Fraction(0)) + c
    return out


def polydiff_gs_boundary(label: GSOpLabel) -> Dict[GSOpLabel, Fraction]:
    k, _ = label.position
    out = dict(poly_d1(label))
    for key, c in poly_d2(label).items():
        out[key] = out.get(key, Fraction(0)) + _sign(k) * c
    return {key: v for key, v in out.items() if v}


def polydiff_gs_basis(dim: int, m: int, n: int, total: int) -> List[GSOpLabel]:
    out = []
    for k in range(1, min(m, total - 1) + 1):
        l = total - k
        if not 1 <= l <= n:
            continue
        for ins in enumerate_tuples(dim, m, k):
            for outs in enumerate_tuples(dim, n, l):
                out.append(GSOpLabel(ins, outs))
    return out


def build_polydiff_gs_complex(dim: int, m: int, n: int, cache=None) -> FinChainComplex:
    if dim < 1 or m < 1 or n < 1:
        raise ValueError(f"need dim, m, n ≥ 1; got dim={dim} m={m} n={n}")
    degrees = range(2, m + n + 1)
    basis = {t: polydiff_gs_basis(dim, m, n, t) for t in degrees}
    return build_complex(
        f"gs_poly_dim{dim}_m{m}_n{n}", degrees, basis, polydiff_gs_boundary,
        meta={"family": "gs-poly", "dim": dim, "m": m, "n": n}, cache=cache,
    )


def polydiff_gs_cohomology_dims(dim: int, m: int, n: int) -> Dict[int, int]:
    """C(dim, m)·C(dim, n) in total degree m + n, zero elsewhere."""
    return {t: (comb(dim, m) * comb(dim, n) if t == m + n else 0) for t in range(2, m + n + 1)}


def expected_full_gs_betti(dim: int, weight: int, total: int) -> int:
    out = 0
    for m in range(1, total):
        n = total - m
        if n - m == weight:
            out += comb(dim, m) * comb(dim, n)
    return out


# ── Full truncated complex ────────────────────────────────────────────────────

def full_gs_basis(dim: int, weight: int, bounds: Bounds, total: int) -> List[FullGSLabel]:
    din, dout = bounds
    out = []
    for p in range(1, total):
        q = total - p
        for s_in in range(p, din + 1):
            s_out = s_in + weight
            if not q <= s_out <= dout:
                continue
            outs = enumerate_tuples(dim, s_out, q)
            for ins in enumerate_tuples(dim, s_in, p):
                out.extend(FullGSLabel(ins, o) for o in outs)
    return out


def _room(label: FullGSLabel, bounds: Bounds) -> int:
    din, dout = label.degrees
    return min(bounds[0] - din, bounds[1] - dout)


def _left_action_terms(label: FullGSLabel, bounds: Bounds) -> Dict[FullGSLabel, Fraction]:
    """Δ^{q−1}(f_0)·Φ(f_1..f_p) on the dual basis."""
    dim = label.inputs[0].dim
    out: Dict[FullGSLabel, Fraction] = {}
    for f in monomials_up_to(dim, _room(label, bounds), min_weight=1):
        for parts, mult in iterated_coproduct(f, len(label.outputs)):
            grown = tuple(merge(n, p) for n, p in zip(label.outputs, parts))
            key = FullGSLabel((f,) + label.inputs, grown)
            out[key] = out.get(key, Fraction(0)) + mult
    return out


def _right_action_terms(label: FullGSLabel, bounds: Bounds) -> Dict[FullGSLabel, Fraction]:
    dim = label.inputs[0].dim
    sign = _sign(len(label.inputs) + 1)
    out: Dict[FullGSLabel, Fraction] = {}
    for f in monomials_up_to(dim, _room(label, bounds), min_weight=1):
        for parts, mult in iterated_coproduct(f, len(label.outputs)):
            grown = tuple(merge(n, p) for n, p in zip(label.outputs, parts))
            key = FullGSLabel(label.inputs + (f,), grown)
            out[key] = out.get(key, Fraction(0)) + sign * mult
    return out


def _merge_terms(label: FullGSLabel) -> Dict[FullGSLabel, Fraction]:
    out: Dict[FullGSLabel, Fraction] = {}
    ins = label.inputs
    for a, M in enumerate(ins, start=1):
        for left, right, _ in reduced_coproduct_splits(M):
            key = FullGSLabel(ins[: a - 1] + (left, right) + ins[a:], label.outputs)
            out[key] = out.get(key, Fraction(0)) + _sign(a)
    return out


def full_d1_terms(label: FullGSLabel, bounds: Bounds) -> Dict[FullGSLabel, Fraction]:
    out: Dict[FullGSLabel, Fraction] = {}
    for part in (_left_action_terms(label, bounds), _merge_terms(label), _right_action_terms(label, bounds)):
        for key, v in part.items():
            out[key] = out.get(key, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def _coaction_growths(label: FullGSLabel, room: int) -> List[Tuple[MultiIndexTuple, Monomial, int]]:
    """
    (M + P, ΣP, Π C(M_a + P_a; P_a)) over tuples P of possibly empty
    monomials with 1 ≤ Σ|P| ≤ room.
    """
    dim = label.inputs[0].dim
    p = len(label.inputs)
    out = []
    for s in range(1, room + 1):
        for parts in enumerate_tuples(dim, s, p, allow_empty=True):
            grown = tuple(merge(M, P) for M, P in zip(label.inputs, parts))
            mult = 1
            for G, P in zip(grown, parts):
                mult *= split_multiplicity(G, P)
            out.append((grown, merge_all(dim, parts), mult))
    return out


def full_d2_terms(label: FullGSLabel, bounds: Bounds) -> Dict[FullGSLabel, Fraction]:
    """
    Left coaction, reduced coproduct on each output and right coaction, on
    the dual basis; terms with a constant tensor factor are dropped.
    """
    out: Dict[FullGSLabel, Fraction] = {}

    def add(key: FullGSLabel, c: int) -> None:
        out[key] = out.get(key, Fraction(0)) + c

    q = len(label.outputs)
    for grown, collected, mult in _coaction_growths(label, _room(label, bounds)):
        add(FullGSLabel(grown, (collected,) + label.outputs), mult)
        add(FullGSLabel(grown, label.outputs + (collected,)), _sign(q + 1) * mult)
    for new, c in _split_terms(label.outputs):
        add(FullGSLabel(label.inputs, new), c)
    return {k: v for k, v in out.items() if v}


def full_gs_terms(label: FullGSLabel, bounds: Bounds) -> Dict[FullGSLabel, Fraction]:
    out = dict(full_d1_terms(label, bounds))
    sign = _sign(len(label.inputs))
    for key, v in full_d2_terms(label, bounds).items():
        out[key] = out.get(key, Fraction(0)) + sign * v
    return {k: v for k, v in out.items() if v}


def _build_full(dim: int, weight: int, bounds: Bounds, part: str, boundary, cache=None) -> FinChainComplex:
    din, dout = bounds
    if dim < 1 or din < 1 or dout < 1:
        raise ValueError(f"need dim ≥ 1 and positive bounds; got dim={dim} bounds={bounds}")
    degrees = range(2, din + dout + 1)
    basis = {t: full_gs_basis(dim, weight, bounds, t) for t in degrees}
    return build_complex(
        f"gs_full_{part}_dim{dim}_w{weight}_in{din}_out{dout}", degrees, basis, boundary,
        strict=False,
        meta={"family": "gs-full", "dim": dim, "weight": weight, "bounds": bounds},
        cache=cache,
    )


def build_full_gs_complex(dim: int, weight: int, bounds: Bounds, cache=None) -> FinChainComplex:
    return _build_full(dim, weight, bounds, "total", lambda lab: full_gs_terms(lab, bounds), cache)


def d1_matrix(dim: int, weight: int, bounds: Bounds) -> FinChainComplex:
    """Complex carrying d¹ alone (same bases as the total complex)."""
    return _build_full(dim, weight, bounds, "d1", lambda lab: full_d1_terms(lab, bounds))


def d2_matrix(dim: int, weight: int, bounds: Bounds) -> FinChainComplex:
    return _build_full(dim, weight, bounds, "d2", lambda lab: full_d2_terms(lab, bounds))


@dataclass
class PartialIdentities:
    d1_squared: bool
    d2_squared: bool
    commute: bool

    @property
    def ok(self) -> bool:
        return self.d1_squared and self.d2_squared and self.commute


def check_partial_identities(dim: int, weight: int, bounds: Bounds) -> PartialIdentities:
    """d¹d¹ = 0, d²d² = 0 and d¹d² = d²d¹ on every degree of the window."""
    c1 = d1_matrix(dim, weight, bounds)
    c2 = d2_matrix(dim, weight, bounds)
    sq1 = sq2 = comm = True
    for t in c1.degrees:
        if t + 1 not in c1.basis:
            continue
        a1, b1 = c1.differential(t), c1.differential(t + 1)
        a2, b2 = c2.differential(t), c2.differential(t + 1)
        sq1 = sq1 and compose(b1, a1).is_zero()
        sq2 = sq2 and compose(b2, a2).is_zero()
        comm = comm and (compose(b1, a2) - compose(b2, a1)).is_zero()
    result = PartialIdentities(sq1, sq2, comm)
    if not result.ok:
        logger.warning(f"GS partial identities fail at dim={dim} w={weight} bounds={bounds}: {result}")
    return result


# ── Inclusion ─────────────────────────────────────────────────────────────────

def include_polydiff_gs(label: GSOpLabel, bounds: Bounds) -> GSCochain:
    m, n = label.bigrade
    din, dout = bounds
    if din < m or dout < n:
        raise TruncationOverflow(
            f"{label} needs bounds ≥ ({m}, {n}), window is {bounds}", required=max(m, n),
        )
    dim = label.out_bunches[0].dim
    k, l = label.position
    out: GSCochain = {}
    for s in range(max(k, m), din + 1):
        if n + s - m > dout:
            break
        for inputs in enumerate_tuples(dim, s, k):
            value = Monomial.one(dim)
            coeff = 1
            for M, I in zip(inputs, label.out_bunches):
                d = derivative(M, I)
                if d is None:
                    break
                rest, c = d
                value = merge(value, rest)
                coeff *= c
            else:
                for parts, mult in iterated_coproduct(value, l):
                    outs = tuple(merge(J, P) for J, P in zip(label.in_bunches, parts))
                    key = FullGSLabel(inputs, outs)
                    out[key] = out.get(key, Fraction(0)) + coeff * mult
    return out


def gs_differential(cochain: Mapping[FullGSLabel, object], bounds: Bounds) -> GSCochain:
    """d¹ + (−1)^p d² of a sparse cochain, kept inside the bounds."""
    out: GSCochain = {}
    for lab, coeff in cochain.items():
        din, dout = lab.degrees
        if din > bounds[0] or dout > bounds[1]:
            continue
        for img, v in full_gs_terms(lab, bounds).items():
            if img.degrees[0] <= bounds[0] and img.degrees[1] <= bounds[1]:
                out[img] = out.get(img, Fraction(0)) + Fraction(coeff) * v
    return {k: v for k, v in out.items() if v}


def gs_chain_map_defects(dim: int, m: int, n: int, bounds: Bounds) -> List[str]:
    """Labels L with d_GS(include(L)) ≠ include(dL) inside the window."""
    defects = []
    for t in range(2, m + n + 1):
        for lab in polydiff_gs_basis(dim, m, n, t):
            lhs = gs_differential(include_polydiff_gs(lab, bounds), bounds)
            rhs: GSCochain = {}
            for img, v in polydiff_gs_boundary(lab).items():
                for fl, fv in include_polydiff_gs(img, bounds).items():
                    rhs[fl] = rhs.get(fl, Fraction(0)) + v * fv
            if lhs != {a: b for a, b in rhs.items() if b}:
                defects.append(str(lab))
    if defects:
        logger.warning(f"GS inclusion fails the chain-map identity on {len(defects)} labels")
    return defects


def coproduct_of_derivative(f: Monomial, by: Monomial) -> Dict[MultiIndexTuple, Fraction]:
    """Δ(∂_I f) expanded on monomial pairs."""
    out: Dict[MultiIndexTuple, Fraction] = {}
    d = derivative(f, by)
    if d is None:
        return out
    g, c = d
    for left, right, mult in coproduct_splits(g):
        out[(left, right)] = out.get((left, right), Fraction(0)) + c * mult
    return out


def derivative_of_coproduct(f: Monomial, by: Monomial) -> Dict[MultiIndexTuple, Fraction]:
    """(1 ⊗ ∂_I) Δf expanded on monomial pairs."""
    out: Dict[MultiIndexTuple, Fraction] = {}
    for left, right, mult in coproduct_splits(f):
        d = derivative(right, by)
        if d is None:
            continue
        g, c = d
        out[(left, g)] = out.get((left, g), Fraction(0)) + mult * c
    return out
