import json

import pytest

from complexes.chain import betti
from complexes.cells import build_simplex_complex
from utils.report import ResultTable, betti_table, guess_format, render, to_csv, to_markdown, write_tables


def _table():
    t = ResultTable("demo", ["degree", "dim", "betti"], meta={"total": 1})
    t.add(-1, 2, 0)
    t.add(0, 3, 1)
    return t


def test_markdown_layout():
    text = to_markdown(_table())
    assert text.startswith("### demo\n")
    assert "| degree | dim | betti |" in text
    assert "| 0 | 3 | 1 |" in text
    assert "- **total**: 1" in text


def test_json_is_sorted_and_stable():
    one = render([_table()], "json")
    data = json.loads(one)
    assert data["rows"] == [[-1, 2, 0], [0, 3, 1]]
    assert one == render([_table()], "json")
    assert isinstance(json.loads(render([_table(), _table()], "json")), list)


def test_csv_has_header_and_rows():
    lines = to_csv(_table()).strip().splitlines()
    assert lines == ["degree,dim,betti", "-1,2,0", "0,3,1"]


def test_unknown_format():
    with pytest.raises(ValueError):
        render([_table()], "xml")


@pytest.mark.parametrize("path,fmt", [("out/b.md", "markdown"), ("b.CSV", "csv"), ("b.json", "json"), ("b.txt", "json")])
def test_guess_format(path, fmt):
    assert guess_format(path) == fmt


def test_betti_table_for_simplex(tmp_path):
    c = build_simplex_complex(3)
    table = betti_table(c, betti(c))
    assert [row[2] for row in table.rows] == [0, 0, 1]
    assert table.meta["total"] == 1
    target = tmp_path / "nested" / "simplex.md"
    write_tables([table], str(target), "markdown")
    assert target.read_text().startswith(f"### {c.name}")
