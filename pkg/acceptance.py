#!/usr/bin/env python3
"""
Acceptance Battery
==================
Runs every exact identity the package promises at desk scale and produces
a single pass/fail report.

Usage:
    python acceptance.py                  # desk scale
    python acceptance.py --level quick    # reduced windows, seconds
    python acceptance.py --jobs 4

The report is printed to the console (with timings) AND saved to:
    <OUT_DIR>/suite_report.json           (no timings, byte-identical across runs)
"""
from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np
from rich.console import Console

from complexes.barcobar import (
    build_bar_complex,
    build_cobar_complex,
    build_koszul_complex,
    cobar_matches_permutahedron,
    expected_bar_total,
    expected_cobar_total,
    expected_koszul,
)
from complexes.brackets import (
    Cochain,
    FullHochLabel,
    cochain_to_json,
    euler_cochain,
    gauge_deformation,
    gerstenhaber_bracket,
    graded_jacobi_defect,
    hkr_project,
    hkr_representative,
    hochschild_diff_direct,
    hochschild_diff_via_bracket,
    mc_check,
    multiplication_cochain,
    polydiff_coboundary,
    random_full_cochain,
    random_polyvector,
    schouten_bracket,
)
from complexes.cells import (
    build_perm_complex,
    build_simplex_complex,
    face_vector,
    is_equivariant_at,
    perm_face_count,
    simplex_face_count,
)
from complexes.chain import betti, to_json, validate
from complexes.gs import (
    build_polydiff_gs_complex,
    check_partial_identities,
    expected_full_gs_betti,
    build_full_gs_complex,
    gs_chain_map_defects,
    polydiff_gs_cohomology_dims,
)
from complexes.hoch import (
    build_polydiff_complex,
    chain_map_defects,
    full_basis,
    polydiff_cohomology_dims,
    truncation_stability,
)
from complexes.polyalg import monomials_up_to
from config.settings import (
    BRACKET_SAMPLES,
    EQUIVARIANCE_SAMPLES,
    HKR_PAIRS,
    HOCH_MAX_DEG,
    JOBS,
    MAX_PERM_N,
    MAX_SIMPLEX_N,
    OUT_DIR,
    SEED,
)
from utils.logger import setup_logger
from utils.report import ResultTable, betti_table, print_table, render

logger = setup_logger("acceptance")

PASS, FAIL, UNSTABLE = "pass", "fail", "not-yet-stable"


# ── Data structures ───────────────────────────────────────────────────────────

@dataclass
class CheckResult:
    criterion: int
    name: str
    status: str = PASS
    details: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def fail(self, detail: str) -> None:
        self.status = FAIL
        self.details.append(detail)

    def unstable(self, detail: str) -> None:
        if self.status == PASS:
            self.status = UNSTABLE
        self.details.append(detail)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


@dataclass(frozen=True)
class Scale:
    perm_n: int
    simplex_n: int
    equivariance_samples: int
    koszul_m: int
    bar_weight: int
    hoch_mn: int
    chain_map_mn: int
    chain_map_D: int
    full_D: int
    gs_mn: int
    gs_bounds: int
    bracket_samples: int
    hkr_pairs: int


LEVELS: Dict[str, Scale] = {
    "desk": Scale(MAX_PERM_N, MAX_SIMPLEX_N, EQUIVARIANCE_SAMPLES, 4, 5, 6, 4, HOCH_MAX_DEG, 5, 3, 3,
                  BRACKET_SAMPLES, HKR_PAIRS),
    "quick": Scale(4, 5, 20, 3, 3, 4, 3, 4, 3, 2, 2, 4, 3),
}


def _rng(offset: int) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


# ── Individual criteria ───────────────────────────────────────────────────────

def check_cells(scale: Scale) -> CheckResult:
    res = CheckResult(1, "cell complexes")
    rng = _rng(1)
    for family, top, build, count in (
        ("perm", scale.perm_n, build_perm_complex, perm_face_count),
        ("simplex", scale.simplex_n, build_simplex_complex, simplex_face_count),
    ):
        for n in range(1, top + 1):
            c = build(n)
            report = validate(c)
            if not report.ok:
                res.fail(report.summary())
                continue
            b = betti(c)
            if b.dims != {d: (1 if d == 0 else 0) for d in c.degrees}:
                res.fail(f"{family} n={n}: betti {b.dims}")
            for dim, size in face_vector(c).items():
                if size != count(n, dim):
                    res.fail(f"{family} n={n}: {size} cells of dim {dim}, expected {count(n, dim)}")
            cells = [lab for d in c.degrees for lab in c.basis[d]]
            for _ in range(scale.equivariance_samples):
                g = tuple(int(x) + 1 for x in rng.permutation(n))
                cell = cells[int(rng.integers(len(cells)))]
                if not is_equivariant_at(g, cell):
                    res.fail(f"{family} n={n}: not equivariant at g={g}, {cell}")
                    break
    for n in range(1, min(scale.perm_n, 5) + 1):
        if not cobar_matches_permutahedron(n):
            res.fail(f"multilinear cobar differs from P_{n - 1}")
    return res


def check_koszul(scale: Scale) -> CheckResult:
    res = CheckResult(2, "koszul complexes")
    for dim in (1, 2, 3):
        for m in range(1, scale.koszul_m + 1):
            c = build_koszul_complex(dim, m)
            b = betti(c)
            want = {d: (expected_koszul(dim, m) if d == m - 1 else 0) for d in c.degrees}
            if b.dims != want:
                res.fail(f"koszul dim={dim} m={m}: {b.dims} != {want}")
    return res


def check_barcobar(scale: Scale) -> CheckResult:
    res = CheckResult(3, "bar / cobar")
    for dim in (1, 2, 3):
        for w in range(1, scale.bar_weight + 1):
            bar = betti(build_bar_complex(dim, w)).total()
            if bar != expected_bar_total(dim, w):
                res.fail(f"bar dim={dim} w={w}: {bar} != {expected_bar_total(dim, w)}")
            cobar = betti(build_cobar_complex(dim, w)).total()
            if cobar != expected_cobar_total(dim, w):
                res.fail(f"cobar dim={dim} w={w}: {cobar} != {expected_cobar_total(dim, w)}")
    return res


def check_polydiff_hoch(scale: Scale) -> CheckResult:
    res = CheckResult(4, "polydifferential hochschild")
    for dim in (1, 2):
        for m in range(1, scale.hoch_mn + 1):
            for n in range(0, scale.hoch_mn - m + 1):
                b = betti(build_polydiff_complex(dim, m, n))
                want = polydiff_cohomology_dims(dim, m, n)
                if b.dims != want:
                    res.fail(f"hoch poly dim={dim} (m,n)=({m},{n}): {b.dims} != {want}")
    return res


def check_chain_maps(scale: Scale) -> CheckResult:
    res = CheckResult(5, "inclusion chain maps")
    for dim in (1, 2):
        for m in range(1, scale.chain_map_mn + 1):
            for n in range(0, scale.chain_map_mn - m + 1):
                bad = chain_map_defects(dim, m, n, scale.chain_map_D)
                if bad:
                    res.fail(f"hoch dim={dim} (m,n)=({m},{n}): {bad[:3]}")
    bound = scale.gs_mn + 1
    for m in range(1, scale.gs_mn + 1):
        for n in range(1, scale.gs_mn + 1):
            bad = gs_chain_map_defects(1, m, n, (bound, bound))
            if bad:
                res.fail(f"gs dim=1 (m,n)=({m},{n}): {bad[:3]}")
    return res


def check_full_hoch(scale: Scale) -> CheckResult:
    res = CheckResult(6, "full hochschild (truncated)")
    for w in (-1, 0, 1):
        for row in truncation_stability(1, w, scale.full_D, max_arity=3):
            tag = f"w={w} k={row.arity}"
            if not row.stable:
                res.unstable(f"{tag}: D={scale.full_D} gives {row.betti_d}, D+1 gives {row.betti_next}")
                continue
            if row.betti_d != row.polydiff:
                res.fail(f"{tag}: betti {row.betti_d} != polydifferential {row.polydiff}")
            if row.betti_d != row.expected:
                res.fail(f"{tag}: betti {row.betti_d} != closed form {row.expected}")
    return res


def check_gs(scale: Scale) -> CheckResult:
    res = CheckResult(7, "gerstenhaber–schack")
    for dim in (1, 2):
        for m in range(1, scale.gs_mn + 1):
            for n in range(1, scale.gs_mn + 1):
                b = betti(build_polydiff_gs_complex(dim, m, n))
                want = polydiff_gs_cohomology_dims(dim, m, n)
                if b.dims != want:
                    res.fail(f"gs poly dim={dim} (m,n)=({m},{n}): {b.dims} != {want}")
    D = scale.gs_bounds
    for w in (-1, 0, 1):
        ids = check_partial_identities(1, w, (D, D))
        if not ids.ok:
            res.fail(f"gs full w={w}: {ids}")
        here = betti(build_full_gs_complex(1, w, (D, D)))
        there = betti(build_full_gs_complex(1, w, (D + 1, D + 1)))
        for t in (2, 3):
            if here[t] != there[t]:
                res.unstable(f"gs full w={w} t={t}: {here[t]} vs {there[t]} at bounds {D}/{D + 1}")
            elif here[t] != expected_full_gs_betti(1, w, t):
                res.fail(f"gs full w={w} t={t}: betti {here[t]} != {expected_full_gs_betti(1, w, t)}")
    return res


def check_brackets(scale: Scale) -> CheckResult:
    res = CheckResult(8, "brackets")
    D = 4
    mu = multiplication_cochain(1, D)
    if not gerstenhaber_bracket(mu, mu).is_zero():
        res.fail("[μ, μ] ≠ 0")
    if not gerstenhaber_bracket(mu, euler_cochain(1, D)).is_zero():
        res.fail("[μ, Euler] ≠ 0")

    # d_H = [μ, ·] on every Ō-valued basis cochain of the window
    for w in (-1, 0, 1):
        for k in range(1, D + 1):
            for lab in full_basis(1, w, D, k):
                if lab.output.is_one():
                    continue
                a = Cochain({lab: Fraction(1)}, D)
                if hochschild_diff_via_bracket(a).terms != hochschild_diff_direct(a).terms:
                    res.fail(f"d_H ≠ ±[μ, ·] at {lab}")

    rng = _rng(8)
    for i in range(scale.bracket_samples):
        arities = [int(rng.integers(1, 3)) for _ in range(3)]
        a, b, c = (random_full_cochain(rng, 1, k, int(rng.integers(-1, 1)), D) for k in arities)
        defect = graded_jacobi_defect(gerstenhaber_bracket, a, b, c, arities[0] - 1, arities[1] - 1)
        if not defect.is_zero():
            res.fail(f"gerstenhaber jacobi sample {i}: {len(defect.terms)} terms")
        degs = [int(rng.integers(1, 3)) for _ in range(3)]
        p, q, r = (random_polyvector(rng, 2, d, 2) for d in degs)
        defect = graded_jacobi_defect(schouten_bracket, p, q, r, degs[0] - 1, degs[1] - 1)
        if not defect.is_zero():
            res.fail(f"schouten jacobi sample {i}: {defect}")

    rng = _rng(88)
    for i in range(scale.hkr_pairs):
        shapes = []
        for _ in range(2):
            m = int(rng.integers(1, 3))
            n = int(rng.integers(0, 4 - m))
            shapes.append((m, n))
        polys = [random_polyvector(rng, 2, m, n, size=2) for m, n in shapes]
        polys = [p if not p.is_zero() else random_polyvector(rng, 2, 1, 0, size=1) for p in polys]
        zs = []
        for (m, n), p in zip(shapes, polys):
            z = hkr_representative(p)
            if m >= 2:
                z = z + polydiff_coboundary(rng, 2, m, n, m - 1)
            zs.append(z)
        lhs = hkr_project(gerstenhaber_bracket(zs[0], zs[1]), dim=2)
        rhs = schouten_bracket(polys[0], polys[1])
        if lhs.terms != rhs.terms:
            res.fail(f"hkr pair {i}: {lhs} != {rhs}")

    if not mc_check(Cochain({}, D), dim=1).ok:
        res.fail("zero cochain is not Maurer–Cartan")
    rng = _rng(888)
    scales = {m: Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for m in monomials_up_to(1, D, 1)}
    if not mc_check(gauge_deformation(1, D, scales)).ok:
        res.fail("gauge deformation is not Maurer–Cartan")
    x = monomials_up_to(1, 1, 1)[0]
    bad = Cochain({FullHochLabel((x, x), monomials_up_to(1, 2, 2)[0]): Fraction(1)}, D)
    report = mc_check(bad)
    if report.ok or report.arities != [3]:
        res.fail(f"associativity-breaking perturbation gave residual arities {report.arities}")
    return res


def _artifacts(n: int) -> str:
    """Serialised complex, Betti table and bracket output, as written to disk."""
    c = build_perm_complex(n)
    a = random_full_cochain(_rng(9), 2, 2, 0, 3)
    parts = [
        json.dumps(to_json(c), sort_keys=True),
        render([betti_table(c, betti(c))], "json"),
        json.dumps(cochain_to_json(hochschild_diff_direct(a), 2), sort_keys=True),
    ]
    return "\n".join(parts)


def check_determinism(scale: Scale) -> CheckResult:
    res = CheckResult(9, "determinism")
    n = min(scale.perm_n, 4)
    first = _artifacts(n)
    if first != _artifacts(n):
        res.fail(f"two builds of P_{n - 1} serialise differently")
    # a fresh interpreter gets a different string-hash seed
    with ProcessPoolExecutor(max_workers=1, mp_context=multiprocessing.get_context("spawn")) as pool:
        other = pool.submit(_artifacts, n).result()
    if first != other:
        res.fail("artifacts differ between processes")
    return res


CHECKS: List[Callable[[Scale], CheckResult]] = [
    check_cells,
    check_koszul,
    check_barcobar,
    check_polydiff_hoch,
    check_chain_maps,
    check_full_hoch,
    check_gs,
    check_brackets,
    check_determinism,
]


# ── Runner ────────────────────────────────────────────────────────────────────

def _timed(job: Tuple[Callable[[Scale], CheckResult], Scale]) -> CheckResult:
    fn, scale = job
    start = time.perf_counter()
    try:
        res = fn(scale)
    except Exception as exc:
        logger.exception(f"{fn.__name__} raised: {exc}")
        criterion = CHECKS.index(fn) + 1 if fn in CHECKS else 0
        res = CheckResult(criterion, fn.__name__.removeprefix("check_"))
        res.fail(f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - start
    logger.info(f"criterion {res.criterion} ({res.name}): {res.status} in {res.seconds:.1f}s")
    return res


def run_suite(level: str = "desk", jobs: int = JOBS) -> List[CheckResult]:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; choose from {sorted(LEVELS)}")
    scale = LEVELS[level]
    work = [(fn, scale) for fn in CHECKS]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_timed, work))
    else:
        results = [_timed(job) for job in work]
    return sorted(results, key=lambda r: r.criterion)


def report_json(results: List[CheckResult], level: str) -> str:
    payload = {
        "level": level,
        "passed": all(r.passed for r in results),
        "checks": [
            {"criterion": r.criterion, "name": r.name, "status": r.status, "details": r.details}
            for r in results
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_report(results: List[CheckResult], level: str, out_dir: str = OUT_DIR) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "suite_report.json")
    with open(path, "w") as fh:
        fh.write(report_json(results, level))
    logger.info(f"Suite report saved to {path}")
    return path


def print_report(console: Console, results: List[CheckResult]) -> None:
    table = ResultTable("Acceptance battery", ["criterion", "name", "status", "seconds"])
    for r in results:
        table.add(r.criterion, r.name, r.status, f"{r.seconds:.1f}")
    print_table(console, table)
    for r in results:
        for d in r.details[:5]:
            console.print(f"  [{'red' if r.status == FAIL else 'yellow'}]{r.name}[/]: {d}")


# ── Entry point ───────────────────────────────────────────────────────────────

def main() -> int:
    parser = argparse.ArgumentParser(description="Run the acceptance battery")
    parser.add_argument("--level", choices=sorted(LEVELS), default="desk")
    parser.add_argument("--jobs", type=int, default=JOBS)
    parser.add_argument("--out-dir", default=OUT_DIR)
    args = parser.parse_args()

    results = run_suite(args.level, args.jobs)
    print_report(Console(), results)
    save_report(results, args.level, args.out_dir)
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
