import json

import pytest

from main import build_parser, load_config, main, resolve


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path, monkeypatch):
    # keep any permucell.toml in the checkout out of the way
    monkeypatch.chdir(tmp_path)


def _write_json(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_cells_perm_writes_markdown(tmp_path):
    out = tmp_path / "betti.md"
    assert main(["cells", "--family", "perm", "--n", "4", "--out", str(out)]) == 0
    text = out.read_text()
    assert "| degree | dim | betti | expected |" in text
    assert "- **f_vector**: 24, 36, 14, 1" in text


def test_hoch_poly_json(tmp_path):
    out = tmp_path / "hoch.json"
    assert main(["hoch", "--dim", "2", "--m", "2", "--n", "0", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["rows"] == [[1, 3, 0, 0], [2, 4, 1, 1]]


def test_koszul_top_degree_exits_0():
    assert main(["koszul", "--dim", "2", "--m", "3"]) == 0


def test_bad_parameters_exit_2():
    assert main(["cells", "--n", "0"]) == 2
    assert main(["cobar", "--dim", "3", "--weight", "2", "--multilinear"]) == 2
    assert main(["bracket", "--op", "gerst", "--in", "a.json"]) == 2
    assert main(["cells", "--config", "missing.toml"]) == 2


def test_toml_layers_under_flags(tmp_path):
    (tmp_path / "permucell.toml").write_text('[defaults]\njobs = 1\n\n[cells]\nfamily = "simplex"\nn = 3\n')
    args = build_parser().parse_args(["cells", "--n", "2"])
    cfg = resolve(args, load_config(None))
    assert cfg["family"] == "simplex"
    assert cfg["n"] == 2
    assert cfg["reps"] is False

    out = tmp_path / "s.json"
    assert main(["cells", "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["rows"]) == 3


def test_broken_toml_is_a_config_error(tmp_path):
    (tmp_path / "permucell.toml").write_text("[cells\n")
    assert main(["cells"]) == 2


def test_gerstenhaber_bracket_from_files(tmp_path):
    a = _write_json(tmp_path / "a.json", {"window": {"dim": 1}, "terms": [{"label": "H(J=1; I=[x1])", "coeff": "1"}]})
    b = _write_json(tmp_path / "b.json", {"window": {"dim": 1}, "terms": [{"label": "H(J=x1; I=[x1])", "coeff": "1"}]})
    out = tmp_path / "ab.json"
    assert main(["bracket", "--op", "gerst", "--in", a, "--in2", b, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["terms"] == [{"label": "H(J=1; I=[x1])", "coeff": "1/1"}]


def test_mc_violation_exits_1(tmp_path):
    g = _write_json(
        tmp_path / "g.json",
        {"window": {"dim": 1, "max_input_degree": 4}, "terms": [{"label": "F(in=[x1, x1]; out=x1^2)", "coeff": "1"}]},
    )
    out = tmp_path / "mc.json"
    assert main(["bracket", "--op", "mc", "--in", g, "--out", str(out)]) == 1
    payload = json.loads(out.read_text())
    assert payload["ok"] is False
    assert payload["arities"] == [3]


def test_schouten_from_files(tmp_path):
    p = _write_json(tmp_path / "p.json", {"dim": 1, "terms": [{"ext": [1], "sym": "x1", "coeff": "1"}]})
    q = _write_json(tmp_path / "q.json", {"dim": 1, "terms": [{"ext": [1], "sym": "1", "coeff": "1"}]})
    out = tmp_path / "pq.json"
    assert main(["bracket", "--op", "schouten", "--in", p, "--in2", q, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["terms"] == [{"ext": [1], "sym": "1", "coeff": "-1/1"}]


def test_malformed_cochain_is_a_config_error(tmp_path):
    bad = _write_json(tmp_path / "bad.json", {"window": {"dim": 1}, "terms": [{"label": "nonsense", "coeff": "1"}]})
    assert main(["bracket", "--op", "mc", "--in", bad]) == 2


# ── suite ─────────────────────────────────────────────────────────────────────

def check_crashing(scale):
    raise KeyError("x1^3")


def test_crashing_check_is_reported_as_a_failure(tmp_path, monkeypatch):
    import acceptance

    monkeypatch.setattr(acceptance, "CHECKS", [acceptance.check_koszul, check_crashing])
    assert main(["suite", "--level", "quick"]) == 1
    report = json.loads((tmp_path / "out" / "suite_report.json").read_text())
    statuses = {c["name"]: (c["status"], c["details"]) for c in report["checks"]}
    assert statuses["koszul complexes"] == ("pass", [])
    assert statuses["crashing"][0] == "fail"
    assert statuses["crashing"][1] == ["KeyError: 'x1^3'"]


def test_quick_suite_subset_exits_0(monkeypatch):
    import acceptance

    monkeypatch.setattr(acceptance, "CHECKS", [acceptance.check_cells, acceptance.check_koszul])
    assert main(["suite", "--level", "quick"]) == 0


def _suite_into(folder, monkeypatch):
    folder.mkdir()
    monkeypatch.chdir(folder)
    assert main(["suite", "--level", "quick", "--out", "table.json"]) == 0
    return (folder / "out" / "suite_report.json").read_bytes(), (folder / "table.json").read_bytes()


def test_suite_artifacts_are_byte_identical(tmp_path, monkeypatch):
    import acceptance

    monkeypatch.setattr(acceptance, "CHECKS", [
        acceptance.check_cells, acceptance.check_koszul, acceptance.check_determinism,
    ])
    first = _suite_into(tmp_path / "a", monkeypatch)
    second = _suite_into(tmp_path / "b", monkeypatch)
    assert first == second
    assert b"seconds" not in first[0] + first[1]


@pytest.mark.slow
def test_full_quick_suite_twice_is_byte_identical(tmp_path, monkeypatch):
    assert _suite_into(tmp_path / "a", monkeypatch) == _suite_into(tmp_path / "b", monkeypatch)
