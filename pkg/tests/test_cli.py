import csv
import io
import json

import pytest

from abcfrey.cli import CACHE_ENV, CSV_COLUMNS, RunConfig, build_parser, default_cache_path, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "factors.jsonl"))


def test_verify_tables(capsys):
    code, out = run(capsys, "verify-tables", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    groups = {c["group"] for c in doc["checks"]}
    assert any("c4" in g for g in groups) and any("change of variables" in g for g in groups)
    for c in doc["checks"]:
        if c["group"].endswith(tuple(f"item {i}" for i in "12345")) and c["asserted"]:
            assert c["passed"]


def test_generate_c2x4_json(capsys):
    code, out = run(capsys, "generate", "--family", "c2x4", "--seed", "32,49", "--steps", "2",
                    "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    assert [s["step"]["quality"] for s in doc["steps"]] == ["1.2425", "1.0531"]
    assert [s["curve"]["sigma_m"] for s in doc["steps"]] == ["7.4219", "6.3124"]
    assert all(s["torsion"]["certified"] for s in doc["steps"])
    a1 = doc["steps"][0]["step"]["triple"]["a"]
    assert a1["factors"] == [["2", 12], ["7", 4]]


def test_generate_c2x6_csv(capsys):
    code, out = run(capsys, "generate", "--family", "c2x6", "--seed", "432,299693", "--steps", "1",
                    "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0].keys()) == CSV_COLUMNS
    assert int(rows[0]["a"]) == 2**16 * 3**9 * 17**3 * 61
    assert rows[0]["sigma_m"] == "6.7269" and rows[0]["torsion_certified"] == "True"


def test_generate_bad_seed(capsys):
    code, _ = run(capsys, "generate", "--family", "c2x2", "--seed", "2,3", "--steps", "1")
    assert code == 2
    code, out = run(capsys, "generate", "--family", "c2x2", "--seed", "2,3", "--steps", "1",
                    "--format", "json")
    assert json.loads(out)["seed"]["checks"]["b = 1 mod 4"] is False


def test_generate_text(capsys):
    code, out = run(capsys, "generate", "--family", "c2x8", "--seed", "4,121", "--steps", "1")
    assert code == 0 and "a = 2^12*11^8" in out and "sigma_m = 6.1985" in out


def test_budget_exhaustion_exit_code(capsys):
    code, _ = run(capsys, "generate", "--family", "c2x8", "--seed", "4,121", "--steps", "2",
                  "--no-cache", "--trial-bound", "50", "--rho-iterations", "0", "--no-torsion",
                  "--format", "json")
    assert code == 3


def test_repro(capsys):
    code, out = run(capsys, "repro", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"]
    rows = {(r["family"], r["quantity"], r["j"]): r for r in doc["rows"]}
    assert rows[("C2xC8", "q", 1)]["computed"] == "1.0331"
    assert all(r["status"] == "ok" for r in doc["rows"])


def test_theta(capsys):
    code, out = run(capsys, "theta", "--family", "c2x6", "--format", "json")
    (row,) = json.loads(out)
    assert code == 0 and row["root"].startswith("4.87516")
    code, out = run(capsys, "theta", "--family", "c2x2")
    assert "0.2137" in out and "differs" in out
    code, out = run(capsys, "theta", "--family", "c2x8", "--digits", "5")
    assert "3.17374" in out


def test_cache_commands(capsys, tmp_path):
    run(capsys, "generate", "--family", "c2x8", "--seed", "4,121", "--steps", "2", "--no-torsion")
    code, out = run(capsys, "cache", "info")
    assert code == 0 and str(tmp_path) in out and " 0 entries" not in out
    code, out = run(capsys, "cache", "clear")
    assert code == 0 and "cleared" in out
    _, out = run(capsys, "cache", "info")
    assert " 0 entries" in out


def test_cache_path_env(monkeypatch):
    monkeypatch.setenv(CACHE_ENV, "/tmp/x.jsonl")
    assert default_cache_path() == "/tmp/x.jsonl"


def test_parser_validation():
    p = build_parser()
    with pytest.raises(SystemExit):
        p.parse_args(["generate", "--family", "c2x10", "--seed", "1,2"])
    with pytest.raises(SystemExit):
        p.parse_args(["generate", "--family", "c2x2", "--seed", "1-2"])
    with pytest.raises(SystemExit):
        p.parse_args(["generate", "--family", "c2x2", "--seed", "1,2", "--steps", "-1"])
    with pytest.raises(ValueError):
        RunConfig("generate", steps=-1)
