"""
Hochschild complexes of the polynomial algebra
==============================================
Two cochain complexes and the chain map between them:

  polydifferential   labels (J; I_1, …, I_k) standing for the operator
                     f_1 ⊗ … ⊗ f_k ↦ x^J · ∂_{I_1} f_1 ⋯ ∂_{I_k} f_k
                     differential: split one bunch I_a into two nonempty
                     halves (A, B) with sign (−1)^a and multiplicity C(I_a; A)

  full (truncated)   dual-basis cochains (M_1, …, M_k; N) sending
                     (x^{M_1}, …, x^{M_k}) ↦ x^N, inputs nonempty, output
                     possibly constant; differential is the standard d_H
                     restricted to total input degree ≤ D (quotient)

Arity k is the stored degree in both complexes. Bigrade (m, n) =
(Σ|I_a|, |J|) is preserved by the polydifferential differential; the full
complex is built one internal weight w = |N| − Σ|M_a| at a time, and an
operator of bigrade (m, n) has weight n − m.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Sequence, Tuple

from complexes import TruncationOverflow
from complexes.chain import BettiTable, FinChainComplex, betti, build_complex
from complexes.polyalg import (
    Monomial,
    MultiIndexTuple,
    derivative,
    enumerate_tuples,
    merge,
    monomials,
    monomials_up_to,
    reduced_coproduct_splits,
    total_weight,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)

Cochain = Dict["FullHochLabel", Fraction]


def _compact(m: Monomial) -> str:
    return str(m).replace("*", "")


# ── Labels ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class PolyOpLabel:
    coeff: Monomial
    bunches: MultiIndexTuple

    def __post_init__(self) -> None:
        if not self.bunches or any(b.is_one() for b in self.bunches):
            raise ValueError(f"bunches must be a nonempty tuple of nonempty monomials: {self.bunches}")

    @property
    def arity(self) -> int:
        return len(self.bunches)

    @property
    def bigrade(self) -> Tuple[int, int]:
        return total_weight(self.bunches), self.coeff.weight

    @property
    def weight(self) -> int:
        m, n = self.bigrade
        return n - m

    def __str__(self) -> str:
        inner = ", ".join(_compact(b) for b in self.bunches)
        return f"H(J={_compact(self.coeff)}; I=[{inner}])"


@dataclass(frozen=True, order=True)
class FullHochLabel:
    inputs: MultiIndexTuple
    output: Monomial

    def __post_init__(self) -> None:
        if not self.inputs or any(m.is_one() for m in self.inputs):
            raise ValueError(f"inputs must be nonempty monomials: {self.inputs}")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def input_degree(self) -> int:
        return total_weight(self.inputs)

    @property
    def weight(self) -> int:
        return self.output.weight - self.input_degree

    def __str__(self) -> str:
        return f"F(in=[{', '.join(str(m) for m in self.inputs)}]; out={self.output})"


# ── Polydifferential complex ──────────────────────────────────────────────────

def polydiff_boundary(label: PolyOpLabel) -> Dict[PolyOpLabel, Fraction]:
    out: Dict[PolyOpLabel, Fraction] = {}
    bunches = label.bunches
    for a, bunch in enumerate(bunches, start=1):
        sign = -1 if a % 2 else 1
        for left, right, mult in reduced_coproduct_splits(bunch):
            new = PolyOpLabel(label.coeff, bunches[: a - 1] + (left, right) + bunches[a:])
            out[new] = out.get(new, Fraction(0)) + sign * mult
    return {k: v for k, v in out.items() if v}


def polydiff_basis(dim: int, m: int, n: int, k: int) -> List[PolyOpLabel]:
    return [
        PolyOpLabel(J, bunches)
        for J in monomials(dim, n)
        for bunches in enumerate_tuples(dim, m, k)
    ]


def build_polydiff_complex(dim: int, m: int, n: int, cache=None) -> FinChainComplex:
    if dim < 1 or m < 1 or n < 0:
        raise ValueError(f"need dim ≥ 1, m ≥ 1, n ≥ 0; got dim={dim} m={m} n={n}")
    degrees = range(1, m + 1)
    basis = {k: polydiff_basis(dim, m, n, k) for k in degrees}
    return build_complex(
        f"hoch_poly_dim{dim}_m{m}_n{n}", degrees, basis, polydiff_boundary,
        meta={"family": "hoch-poly", "dim": dim, "m": m, "n": n}, cache=cache,
    )


def polydiff_cohomology_dims(dim: int, m: int, n: int) -> Dict[int, int]:
    """Expected cohomology: C(dim, m)·C(dim+n−1, n) in arity m, zero elsewhere."""
    return {k: (comb(dim, m) * comb(dim + n - 1, n) if k == m else 0) for k in range(1, m + 1)}


def expected_full_betti(dim: int, weight: int, arity: int) -> int:
    """Full-complex cohomology in the stable range, read off the polydifferential one."""
    n = arity + weight
    if n < 0:
        return 0
    return comb(dim, arity) * comb(dim + n - 1, n)


def polydiff_counterpart(dim: int, weight: int, arity: int) -> int:
    """Betti of the polydifferential piece (m, n) = (arity, arity + weight) in arity m."""
    n = arity + weight
    if n < 0:
        return 0
    return betti(build_polydiff_complex(dim, arity, n))[arity]


# ── Full truncated complex ────────────────────────────────────────────────────

def full_basis(dim: int, weight: int, max_input_degree: int, k: int) -> List[FullHochLabel]:
    out = []
    for s in range(k, max_input_degree + 1):
        if weight + s < 0:
            continue
        outs = monomials(dim, weight + s)
        for inputs in enumerate_tuples(dim, s, k):
            out.extend(FullHochLabel(inputs, N) for N in outs)
    return out


def full_boundary_terms(label: FullHochLabel, max_input_degree: int) -> Dict[FullHochLabel, Fraction]:
    """
    d_H of the dual-basis cochain δ_label, kept to input degree ≤ D:
      f_0·Φ(f_1..f_k)          → (f, M; N·f)              coefficient +1
      Φ(.., f_{a−1} f_a, ..)   → (.., A, B, ..; N)        sign (−1)^a
      Φ(f_0..f_{k−1})·f_k      → (M, f; N·f)              sign (−1)^{k+1}
    """
    dim = label.output.dim
    inputs = label.inputs
    k = len(inputs)
    room = max_input_degree - label.input_degree
    out: Dict[FullHochLabel, Fraction] = {}

    def add(lab: FullHochLabel, c: int) -> None:
        out[lab] = out.get(lab, Fraction(0)) + c

    right_sign = -1 if (k + 1) % 2 else 1
    for f in monomials_up_to(dim, room, min_weight=1):
        grown = merge(label.output, f)
        add(FullHochLabel((f,) + inputs, grown), 1)
        add(FullHochLabel(inputs + (f,), grown), right_sign)
    for a, M in enumerate(inputs, start=1):
        sign = -1 if a % 2 else 1
        # each ordered monomial pair (A, B) with x^A x^B = x^M occurs once
        for left, right, _ in reduced_coproduct_splits(M):
            add(FullHochLabel(inputs[: a - 1] + (left, right) + inputs[a:], label.output), sign)
    return {lab: v for lab, v in out.items() if v}


def build_full_hochschild_complex(
    dim: int, weight: int, max_input_degree: int, cache=None,
) -> FinChainComplex:
    if dim < 1 or max_input_degree < 1:
        raise ValueError(f"need dim ≥ 1 and D ≥ 1; got dim={dim} D={max_input_degree}")
    D = max_input_degree
    degrees = range(1, D + 1)
    basis = {k: full_basis(dim, weight, D, k) for k in degrees}
    return build_complex(
        f"hoch_full_dim{dim}_w{weight}_D{D}", degrees, basis,
        lambda lab: full_boundary_terms(lab, D),
        strict=False,
        meta={"family": "hoch-full", "dim": dim, "weight": weight, "D": D},
        cache=cache,
    )


def hochschild_differential(cochain: Mapping[FullHochLabel, object], max_input_degree: int) -> Cochain:
    """d_H of a sparse cochain, truncated to input degree ≤ D."""
    out: Cochain = {}
    for lab, coeff in cochain.items():
        if lab.input_degree > max_input_degree:
            continue
        for img, v in full_boundary_terms(lab, max_input_degree).items():
            out[img] = out.get(img, Fraction(0)) + Fraction(coeff) * v
    return {k: v for k, v in out.items() if v}


def evaluate(cochain: Mapping[FullHochLabel, object], args: Sequence[Monomial]) -> Dict[Monomial, Fraction]:
    """Value of a cochain on monomial arguments, as {output monomial: coefficient}."""
    key = tuple(args)
    out: Dict[Monomial, Fraction] = {}
    for lab, coeff in cochain.items():
        if lab.inputs == key:
            out[lab.output] = out.get(lab.output, Fraction(0)) + Fraction(coeff)
    return {k: v for k, v in out.items() if v}


# ── Inclusion ─────────────────────────────────────────────────────────────────

def include_polydiff(label: PolyOpLabel, max_input_degree: int) -> Cochain:
    """
    Expand f_1 ⊗ … ⊗ f_k ↦ x^J · Π ∂_{I_a} f_a on every monomial tuple of
    total degree ≤ D.
    """
    m, _ = label.bigrade
    if max_input_degree < m:
        raise TruncationOverflow(
            f"{label} needs input degree ≥ {m}, window is {max_input_degree}", required=m,
        )
    dim = label.coeff.dim
    k = label.arity
    out: Cochain = {}
    for s in range(max(k, m), max_input_degree + 1):
        for inputs in enumerate_tuples(dim, s, k):
            value = label.coeff
            coeff = 1
            for M, I in zip(inputs, label.bunches):
                d = derivative(M, I)
                if d is None:
                    break
                rest, c = d
                value = merge(value, rest)
                coeff *= c
            else:
                out[FullHochLabel(inputs, value)] = Fraction(coeff)
    return out


def include_image(terms: Mapping[PolyOpLabel, object], max_input_degree: int) -> Cochain:
    """Linear extension of include_polydiff to a sparse polydifferential cochain."""
    out: Cochain = {}
    for lab, v in terms.items():
        for fl, fv in include_polydiff(lab, max_input_degree).items():
            out[fl] = out.get(fl, Fraction(0)) + Fraction(v) * fv
    return {k: v for k, v in out.items() if v}


def chain_map_defects(dim: int, m: int, n: int, max_input_degree: int) -> List[str]:
    """
    Labels L where d_H(include(L)) ≠ include(δL) on inputs of degree ≤ D;
    empty when the inclusion is a chain map on the window.
    """
    D = max_input_degree
    defects = []
    for k in range(1, m + 1):
        for lab in polydiff_basis(dim, m, n, k):
            lhs = hochschild_differential(include_polydiff(lab, D), D)
            rhs = include_image(polydiff_boundary(lab), D)
            if lhs != rhs:
                defects.append(str(lab))
    if defects:
        logger.warning(f"inclusion fails the chain-map identity on {len(defects)} labels")
    return defects


# ── Truncation bookkeeping ────────────────────────────────────────────────────

@dataclass
class StabilityRow:
    arity: int
    betti_d: int
    betti_next: int
    expected: int
    polydiff: int = 0

    @property
    def stable(self) -> bool:
        return self.betti_d == self.betti_next


def truncation_stability(
    dim: int, weight: int, max_input_degree: int, max_arity: int = 3, jobs: int = 1,
) -> List[StabilityRow]:
    """Compare full-complex betti numbers at windows D and D+1, arity ≤ max_arity."""
    D = max_input_degree
    here: BettiTable = betti(build_full_hochschild_complex(dim, weight, D), jobs=jobs)
    there: BettiTable = betti(build_full_hochschild_complex(dim, weight, D + 1), jobs=jobs)
    rows = []
    for k in range(1, min(max_arity, D) + 1):
        rows.append(StabilityRow(
            k, here[k], there[k], expected_full_betti(dim, weight, k), polydiff_counterpart(dim, weight, k),
        ))
    unstable = [r.arity for r in rows if not r.stable]
    if unstable:
        logger.info(f"hoch_full dim={dim} w={weight}: arities {unstable} not yet stable at D={D}")
    return rows
