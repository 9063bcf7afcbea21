"""
Table emitters shared by the CLI and the acceptance suite.
Console output goes through rich; files are written as Markdown, JSON or
CSV (via pandas). JSON is dumped with sorted keys so identical runs give
identical bytes.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd
from rich import box
from rich.console import Console
from rich.table import Table

from complexes.chain import BettiTable, FinChainComplex
from utils.logger import setup_logger

logger = setup_logger(__name__)

FORMATS = ("json", "csv", "markdown")


@dataclass
class ResultTable:
    title: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def add(self, *values: Any) -> None:
        self.rows.append(list(values))


def betti_table(c: FinChainComplex, b: BettiTable, title: Optional[str] = None) -> ResultTable:
    table = ResultTable(title or c.name, ["degree", "dim", "betti"])
    for d in c.degrees:
        table.add(d, c.dim(d), b[d])
    table.meta.update({"complex": c.name, "total": b.total()})
    table.meta.update({k: v for k, v in c.meta.items() if isinstance(v, (int, str, bool))})
    return table


# ── Emitters ──────────────────────────────────────────────────────────────────

def to_markdown(table: ResultTable) -> str:
    lines = [f"### {table.title}", ""]
    lines.append("| " + " | ".join(table.columns) + " |")
    lines.append("|" + "|".join("---" for _ in table.columns) + "|")
    for row in table.rows:
        lines.append("| " + " | ".join(str(v) for v in row) + " |")
    for key in sorted(table.meta):
        lines.append(f"\n- **{key}**: {table.meta[key]}")
    return "\n".join(lines) + "\n"


def to_json(tables: List[ResultTable]) -> str:
    payload = [
        {"title": t.title, "columns": t.columns, "rows": [[_plain(v) for v in r] for r in t.rows], "meta": t.meta}
        for t in tables
    ]
    return json.dumps(payload if len(payload) != 1 else payload[0], indent=2, sort_keys=True, default=str) + "\n"


def to_csv(table: ResultTable) -> str:
    df = pd.DataFrame([[_plain(v) for v in r] for r in table.rows], columns=table.columns)
    return df.to_csv(index=False)


def _plain(v: Any) -> Any:
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def render(tables: List[ResultTable], fmt: str) -> str:
    if fmt == "json":
        return to_json(tables)
    if fmt == "csv":
        return "\n".join(to_csv(t) for t in tables)
    if fmt == "markdown":
        return "\n".join(to_markdown(t) for t in tables)
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def write_tables(tables: List[ResultTable], path: str, fmt: str) -> None:
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(render(tables, fmt))
    logger.info(f"Wrote {len(tables)} table(s) to {path} ({fmt})")


def guess_format(path: str, default: str = "json") -> str:
    ext = os.path.splitext(path)[1].lower()
    return {".md": "markdown", ".csv": "csv", ".json": "json"}.get(ext, default)


# ── Console ───────────────────────────────────────────────────────────────────

def print_table(console: Console, table: ResultTable) -> None:
    tbl = Table(title=f"[bold]{table.title}[/]", box=box.SIMPLE_HEAD, show_edge=False)
    for col in table.columns:
        tbl.add_column(col, justify="right" if col in ("degree", "dim", "betti", "expected") else "left")
    for row in table.rows:
        tbl.add_row(*(str(v) for v in row))
    console.print(tbl)
    for key in sorted(table.meta):
        console.print(f"  [dim]{key}[/]: {table.meta[key]}")
