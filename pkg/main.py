#!/usr/bin/env python3
"""
permucell: command-line orchestrator
====================================

Builds one complex (or runs one bracket computation), validates it, and
emits Betti / dimension tables.

  cells     permutahedra and simplices            --family perm|simplex --n N
  koszul    ⊙V ⊗ ∧V Koszul pieces                  --dim d --m m
  bar       bar construction of S(V)              --dim d --weight w
  cobar     cobar construction of ∧V*             --dim d --weight w [--multilinear]
  hoch      Hochschild cochains of S(V)           --dim d --m M --n N --mode poly|full --weight w --max-deg D
  gs        Gerstenhaber–Schack cochains          --dim d --m M --n N --mode poly|full --weight w --max-deg D
  bracket   Gerstenhaber / Schouten / MC          --op gerst|schouten|mc --in a.json [--in2 b.json]
  suite     acceptance battery                    --level desk|quick

Common flags: --out, --format json|csv|markdown, --cache-dir, --config, --jobs, --reps.

Exit codes: 0 all validations pass, 1 a validation failed, 2 bad parameters.

Run:
    python main.py cells --family perm --n 4 --out betti.md
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Dict, List, Optional

from rich.console import Console

from complexes import ConfigError, PermucellError
from complexes.barcobar import (
    build_bar_complex,
    build_cobar_complex,
    build_koszul_complex,
    expected_bar_total,
    expected_cobar_total,
    expected_koszul,
)
from complexes.brackets import (
    cochain_from_json,
    cochain_to_json,
    gerstenhaber_bracket,
    mc_check,
    polyvector_from_json,
    polyvector_to_json,
    schouten_bracket,
)
from complexes.cells import build_perm_complex, build_simplex_complex, face_vector
from complexes.chain import FinChainComplex, betti, cohomology_basis, validate
from complexes.gs import (
    build_full_gs_complex,
    build_polydiff_gs_complex,
    check_partial_identities,
    expected_full_gs_betti,
    polydiff_gs_cohomology_dims,
)
from complexes.hoch import (
    build_full_hochschild_complex,
    build_polydiff_complex,
    expected_full_betti,
    polydiff_cohomology_dims,
)
from complexes.ratlin import format_rational
from config.settings import CACHE_DIR, JOBS
from utils.logger import setup_logger
from utils.matrix_cache import MatrixCache
from utils.report import FORMATS, ResultTable, betti_table, guess_format, print_table, write_tables

logger = setup_logger("main")

# Fallbacks when neither a flag nor the TOML file sets a value
DEFAULTS: Dict[str, Dict[str, Any]] = {
    "cells":   {"family": "perm", "n": 4},
    "koszul":  {"dim": 2, "m": 2},
    "bar":     {"dim": 2, "weight": 2},
    "cobar":   {"dim": 2, "weight": 2, "multilinear": False},
    "hoch":    {"dim": 1, "m": 1, "n": 0, "mode": "poly", "weight": 0, "max_deg": 4},
    "gs":      {"dim": 1, "m": 1, "n": 1, "mode": "poly", "weight": 0, "max_deg": 3},
    "bracket": {"op": "gerst", "input": None, "input2": None},
    "suite":   {"level": "desk"},
}
COMMON = {"out": None, "format": None, "cache_dir": None, "jobs": None, "reps": False}


# ── Argument parsing ──────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write tables to this path")
    common.add_argument("--format", choices=FORMATS, help="output format (default: from --out extension)")
    common.add_argument("--cache-dir", dest="cache_dir", help="boundary-matrix cache directory")
    common.add_argument("--config", help="TOML file with [defaults] and per-command tables")
    common.add_argument("--jobs", type=int, help="worker processes for ranks / suite checks")
    common.add_argument("--reps", action="store_true", default=None, help="print cohomology representatives")

    parser = argparse.ArgumentParser(prog="permucell", description=__doc__.split("\n")[1])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cells", parents=[common], help="permutahedron / simplex cell complexes")
    p.add_argument("--family", choices=("perm", "simplex"))
    p.add_argument("--n", type=int)

    p = sub.add_parser("koszul", parents=[common], help="Koszul complex weight piece")
    p.add_argument("--dim", type=int)
    p.add_argument("--m", type=int)

    for name in ("bar", "cobar"):
        p = sub.add_parser(name, parents=[common], help=f"{name} construction weight piece")
        p.add_argument("--dim", type=int)
        p.add_argument("--weight", type=int)
        if name == "cobar":
            p.add_argument("--multilinear", action="store_true", default=None)

    for name in ("hoch", "gs"):
        p = sub.add_parser(name, parents=[common], help=f"{name} cochain complex")
        p.add_argument("--dim", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--mode", choices=("poly", "full"))
        p.add_argument("--weight", type=int)
        p.add_argument("--max-deg", dest="max_deg", type=int)

    p = sub.add_parser("bracket", parents=[common], help="brackets of cochains / polyvectors")
    p.add_argument("--op", choices=("gerst", "schouten", "mc"))
    p.add_argument("--in", dest="input")
    p.add_argument("--in2", dest="input2")

    p = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    p.add_argument("--level", choices=("desk", "quick"))
    return parser


def load_config(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        if not os.path.exists("permucell.toml"):
            return {}
        path = "permucell.toml"
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}")


def resolve(args: argparse.Namespace, file_cfg: Dict[str, Any]) -> Dict[str, Any]:
    """flags > [command] table > [defaults] table > settings / built-in defaults."""
    def norm(table: Any) -> Dict[str, Any]:
        if not isinstance(table, dict):
            return {}
        return {k.replace("-", "_"): v for k, v in table.items()}

    layers = [norm(file_cfg.get("defaults")), norm(file_cfg.get(args.command))]
    known = {**COMMON, **DEFAULTS[args.command]}
    cfg: Dict[str, Any] = {"command": args.command}
    for key, fallback in known.items():
        value = getattr(args, key, None)
        if value is None:
            for layer in reversed(layers):
                if key in layer:
                    value = layer[key]
                    break
        cfg[key] = fallback if value is None else value
    if cfg["jobs"] is None:
        cfg["jobs"] = JOBS
    if cfg["cache_dir"] is None:
        cfg["cache_dir"] = CACHE_DIR or None
    return cfg


def check_params(cfg: Dict[str, Any]) -> None:
    """Range checks before any construction."""
    def need(key: str, low: int) -> None:
        v = cfg.get(key)
        if not isinstance(v, int) or isinstance(v, bool) or v < low:
            raise ConfigError(f"{cfg['command']}: --{key.replace('_', '-')} must be an integer ≥ {low}, got {v!r}")

    cmd = cfg["command"]
    need("jobs", 1)
    if cfg["format"] is not None and cfg["format"] not in FORMATS:
        raise ConfigError(f"unknown format {cfg['format']!r}")
    if cmd == "cells":
        need("n", 1)
        if cfg["family"] not in ("perm", "simplex"):
            raise ConfigError(f"cells: unknown family {cfg['family']!r}")
    elif cmd == "koszul":
        need("dim", 1)
        need("m", 1)
    elif cmd in ("bar", "cobar"):
        need("dim", 1)
        need("weight", 1)
        if cfg.get("multilinear") and cfg["weight"] != cfg["dim"]:
            raise ConfigError("cobar --multilinear needs --weight equal to --dim")
    elif cmd in ("hoch", "gs"):
        need("dim", 1)
        if cfg["mode"] not in ("poly", "full"):
            raise ConfigError(f"{cmd}: unknown mode {cfg['mode']!r}")
        if cfg["mode"] == "poly":
            need("m", 1)
            need("n", 1 if cmd == "gs" else 0)
        else:
            need("max_deg", 1)
            if not isinstance(cfg["weight"], int):
                raise ConfigError(f"{cmd}: --weight must be an integer")
    elif cmd == "bracket":
        if cfg["op"] not in ("gerst", "schouten", "mc"):
            raise ConfigError(f"bracket: unknown op {cfg['op']!r}")
        if not cfg["input"]:
            raise ConfigError("bracket: --in is required")
        if cfg["op"] != "mc" and not cfg["input2"]:
            raise ConfigError(f"bracket --op {cfg['op']}: --in2 is required")
    elif cmd == "suite":
        if cfg["level"] not in ("desk", "quick"):
            raise ConfigError(f"suite: unknown level {cfg['level']!r}")


# ── Commands ──────────────────────────────────────────────────────────────────

class Outcome:
    """Tables to emit plus the pass/fail of the validations that produced them."""

    def __init__(self) -> None:
        self.tables: List[ResultTable] = []
        self.failures: List[str] = []
        self.payload: Optional[Dict[str, Any]] = None


def _complex_tables(c: FinChainComplex, cfg: Dict[str, Any], out: Outcome, expected=None) -> None:
    report = validate(c)
    if not report.ok:
        out.failures.append(report.summary())
        out.tables.append(ResultTable(c.name, ["degree", "dim"], [[d, c.dim(d)] for d in c.degrees]))
        return
    b = betti(c, jobs=cfg["jobs"])
    table = betti_table(c, b)
    if expected is not None:
        table.columns.append("expected")
        for row in table.rows:
            row.append(expected.get(row[0], 0))
    out.tables.append(table)
    if cfg["reps"]:
        reps = ResultTable(f"{c.name} representatives", ["degree", "representative"])
        for d in b.support():
            for vec in cohomology_basis(c, d):
                reps.add(d, " + ".join(f"{format_rational(v)}*{lab}" for lab, v in vec.items()))
        out.tables.append(reps)


def _expect(out: Outcome, name: str, got: Dict[int, int], want: Dict[int, int]) -> None:
    bad = {d: (got.get(d, 0), want.get(d, 0)) for d in set(got) | set(want) if got.get(d, 0) != want.get(d, 0)}
    if bad:
        out.failures.append(f"{name}: betti differs from closed form at {dict(sorted(bad.items()))}")


def run_cells(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    build = build_perm_complex if cfg["family"] == "perm" else build_simplex_complex
    c = build(cfg["n"], cache=cache)
    want = {d: (1 if d == 0 else 0) for d in c.degrees}
    _complex_tables(c, cfg, out, expected=want)
    fv = face_vector(c)
    out.tables[0].meta["f_vector"] = ", ".join(str(fv[k]) for k in sorted(fv))
    if not out.failures:
        _expect(out, c.name, {row[0]: row[2] for row in out.tables[0].rows}, want)
    return out


def run_koszul(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    dim, m = cfg["dim"], cfg["m"]
    c = build_koszul_complex(dim, m, cache=cache)
    want = {d: (expected_koszul(dim, m) if d == m - 1 else 0) for d in c.degrees}
    _complex_tables(c, cfg, out, expected=want)
    if not out.failures:
        _expect(out, c.name, {row[0]: row[2] for row in out.tables[0].rows}, want)
    return out


def run_barcobar(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    dim, w = cfg["dim"], cfg["weight"]
    if cfg["command"] == "bar":
        c = build_bar_complex(dim, w, cache=cache)
        total = expected_bar_total(dim, w)
    else:
        c = build_cobar_complex(dim, w, multilinear=bool(cfg["multilinear"]), cache=cache)
        total = 1 if cfg["multilinear"] else expected_cobar_total(dim, w)
    _complex_tables(c, cfg, out)
    if not out.failures:
        got = out.tables[0].meta["total"]
        out.tables[0].meta["expected_total"] = total
        if got != total:
            out.failures.append(f"{c.name}: total betti {got} != {total}")
    return out


def run_hoch(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    dim = cfg["dim"]
    if cfg["mode"] == "poly":
        c = build_polydiff_complex(dim, cfg["m"], cfg["n"], cache=cache)
        want = polydiff_cohomology_dims(dim, cfg["m"], cfg["n"])
        _complex_tables(c, cfg, out, expected=want)
        if not out.failures:
            _expect(out, c.name, {row[0]: row[2] for row in out.tables[0].rows}, want)
    else:
        c = build_full_hochschild_complex(dim, cfg["weight"], cfg["max_deg"], cache=cache)
        want = {k: expected_full_betti(dim, cfg["weight"], k) for k in c.degrees}
        # the top arities feel the truncation; closed forms are shown, not enforced
        _complex_tables(c, cfg, out, expected=want)
    return out


def run_gs(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    dim = cfg["dim"]
    if cfg["mode"] == "poly":
        c = build_polydiff_gs_complex(dim, cfg["m"], cfg["n"], cache=cache)
        want = polydiff_gs_cohomology_dims(dim, cfg["m"], cfg["n"])
        _complex_tables(c, cfg, out, expected=want)
        if not out.failures:
            _expect(out, c.name, {row[0]: row[2] for row in out.tables[0].rows}, want)
    else:
        bounds = (cfg["max_deg"], cfg["max_deg"])
        ids = check_partial_identities(dim, cfg["weight"], bounds)
        if not ids.ok:
            out.failures.append(f"gs full: {ids}")
        c = build_full_gs_complex(dim, cfg["weight"], bounds, cache=cache)
        want = {t: expected_full_gs_betti(dim, cfg["weight"], t) for t in c.degrees}
        _complex_tables(c, cfg, out, expected=want)
    return out


def _read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"input not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}")


def _load_cochain(path: str):
    try:
        return cochain_from_json(_read_json(path))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: not a cochain ({exc})")


def run_bracket(cfg: Dict[str, Any], cache) -> Outcome:
    out = Outcome()
    op = cfg["op"]
    if op == "schouten":
        try:
            p = polyvector_from_json(_read_json(cfg["input"]))
            q = polyvector_from_json(_read_json(cfg["input2"]))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"schouten inputs must be polyvector JSON ({exc})")
        result = schouten_bracket(p, q)
        out.payload = polyvector_to_json(result)
        table = ResultTable("schouten bracket", ["ext", "sym", "coeff"])
        for (ext, sym), v in sorted(result.terms.items()):
            table.add("^".join(f"e{i}" for i in ext), str(sym), format_rational(v))
        out.tables.append(table)
        return out

    a, dim = _load_cochain(cfg["input"])
    if op == "mc":
        if a.terms and not a.is_full:
            raise ConfigError("bracket --op mc needs a full (F(...)-labelled) cochain")
        report = mc_check(a, dim=dim)
        out.payload = {"ok": report.ok, "arities": report.arities, "residual": cochain_to_json(report.residual, dim)}
        table = ResultTable("maurer–cartan residual", ["label", "coeff"])
        for lab, v in sorted(report.residual.terms.items()):
            table.add(str(lab), format_rational(v))
        table.meta.update({"window": report.window, "ok": report.ok})
        out.tables.append(table)
        if not report.ok:
            out.failures.append(report.summary())
        return out

    b, dim_b = _load_cochain(cfg["input2"])
    if dim_b != dim:
        raise ConfigError(f"bracket: inputs over dim {dim} and {dim_b}")
    if a.terms and b.terms and a.is_full != b.is_full:
        raise ConfigError("bracket: cannot mix full and polydifferential cochains")
    result = gerstenhaber_bracket(a, b)
    out.payload = cochain_to_json(result, dim)
    table = ResultTable("gerstenhaber bracket", ["label", "coeff"])
    for lab, v in sorted(result.terms.items()):
        table.add(str(lab), format_rational(v))
    table.meta["window"] = result.window
    out.tables.append(table)
    return out


def run_suite_command(cfg: Dict[str, Any], cache) -> Outcome:
    from acceptance import run_suite, save_report

    out = Outcome()
    results = run_suite(cfg["level"], cfg["jobs"])
    table = ResultTable(f"acceptance battery ({cfg['level']})", ["criterion", "name", "status"])
    for r in results:
        table.add(r.criterion, r.name, r.status)
        if not r.passed:
            out.failures.extend(f"{r.name}: {d}" for d in r.details[:5])
    out.tables.append(table)
    save_report(results, cfg["level"])
    return out


RUNNERS = {
    "cells": run_cells,
    "koszul": run_koszul,
    "bar": run_barcobar,
    "cobar": run_barcobar,
    "hoch": run_hoch,
    "gs": run_gs,
    "bracket": run_bracket,
    "suite": run_suite_command,
}


# ── Entry point ───────────────────────────────────────────────────────────────

def run(cfg: Dict[str, Any], console: Console) -> int:
    check_params(cfg)
    cache = MatrixCache(cfg["cache_dir"]) if cfg["cache_dir"] else None
    logger.info(f"{cfg['command']}: started")
    start = time.perf_counter()
    out = RUNNERS[cfg["command"]](cfg, cache)
    logger.info(f"{cfg['command']}: finished in {time.perf_counter() - start:.2f}s")
    if cache is not None:
        logger.debug(f"matrix cache: {cache.hits} hits, {cache.misses} misses")

    for table in out.tables:
        print_table(console, table)
    if cfg["out"]:
        fmt = cfg["format"] or guess_format(cfg["out"])
        if out.payload is not None and fmt == "json":
            folder = os.path.dirname(cfg["out"])
            if folder:
                os.makedirs(folder, exist_ok=True)
            with open(cfg["out"], "w") as fh:
                fh.write(json.dumps(out.payload, indent=2, sort_keys=True) + "\n")
        else:
            write_tables(out.tables, cfg["out"], fmt)

    for failure in out.failures:
        logger.error(failure)
        console.print(f"[red]✗[/] {failure}")
    return 1 if out.failures else 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    console = Console()
    try:
        cfg = resolve(args, load_config(args.config))
        return run(cfg, console)
    except ConfigError as exc:
        logger.error(f"Configuration error: {exc}")
        console.print(f"[red]error:[/] {exc}")
        return 2
    except PermucellError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        console.print(f"[red]{type(exc).__name__}:[/] {exc}")
        return 1
    except Exception as exc:
        logger.exception(f"Unexpected error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
