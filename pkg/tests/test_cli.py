import json

import pytest

from majperc.cli import main, _parse_p_grid, _parse_int_range


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- parsing

def test_parse_int_range():
    assert _parse_int_range("3..6") == [3, 4, 5, 6]
    assert _parse_int_range("7") == [7]


def test_parse_p_grid():
    assert _parse_p_grid("0.1:0.3:0.1") == (0.1, 0.2, 0.3)
    assert _parse_p_grid("0.25,0.75") == (0.25, 0.75)


# ---------------------------------------------------------------- theory

def test_theory_table(capsys):
    code, out, _ = run_cli(capsys, "theory", "--d", "3..12")
    assert code == 0
    assert "0.500000" in out
    row7 = next(line for line in out.splitlines() if line.strip().startswith("7 "))
    assert abs(float(row7.split()[1]) - 0.269) < 5e-4


def test_theory_json_with_window(capsys):
    code, out, _ = run_cli(capsys, "theory", "--d", "3", "--json", "--n", "1000000")
    assert code == 0
    doc = json.loads(out)
    assert doc["critical_probabilities"][0]["d"] == 3
    assert not doc["window"]["nonempty"]
    assert abs(doc["wheel_threshold"] - 0.4030) < 5e-5


# ---------------------------------------------------------------- usage errors

def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["theory", "--bogus"])
    assert exc.value.code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_invalid_params_exit_2(capsys):
    code, _, err = run_cli(capsys, "simulate", "--n", "5", "--k", "3",
                           "--p", "0.5")
    assert code == 2
    assert "error" in err


def test_simulate_without_p_exits_2(capsys):
    code, _, err = run_cli(capsys, "simulate", "--n", "16", "--k", "1")
    assert code == 2


# ---------------------------------------------------------------- running

def test_simulate_jsonl(tmp_path, capsys):
    out_path = tmp_path / "trials.jsonl"
    code, _, _ = run_cli(capsys, "simulate", "--n", "16", "--k", "1", "--r", "1",
                         "--p", "0.5", "--trials", "3", "--seed", "5",
                         "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert len(lines) == 3
    doc = json.loads(lines[0])
    assert list(doc) == ["trial", "seed", "disseminated", "rounds", "inactive",
                         "components", "lemma42", "config_hash"]


def test_scan_endpoints(tmp_path, capsys):
    out_path = tmp_path / "scan.csv"
    code, _, err = run_cli(capsys, "scan", "--n", "16", "--k", "1", "--r", "1",
                           "--p-grid", "0:1:1", "--trials", "4",
                           "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "p,trials,disseminated,freq,wilson_lo,wilson_hi,config_hash"
    assert lines[1].startswith("0,4,0,0.000000")
    assert lines[2].startswith("1,4,4,1.000000")
    assert "crossing at p=1" in err


def test_coupled_command(capsys):
    code, out, _ = run_cli(capsys, "coupled", "--n", "16", "--k", "1", "--r", "1",
                           "--p", "0.4", "--trials", "2")
    assert code == 0
    assert out.count("inclusion ok") == 2


def test_verify_small_grid(capsys):
    code, out, _ = run_cli(capsys, "verify", "--k-max", "5", "--a-max", "1",
                           "--b-max", "1")
    assert code == 0
    assert "0 failures" in out


def test_build_graph(capsys):
    code, out, _ = run_cli(capsys, "build-graph", "--n", "16", "--k", "2",
                           "--r", "1", "--matching", "det")
    assert code == 0
    doc = json.loads(out)
    assert doc["degree"] == 11 and doc["majority_threshold"] == 6


def test_sample_matchings_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "m.json"
    code, _, _ = run_cli(capsys, "sample-matchings", "--n", "8", "--k", "1",
                         "--r", "2", "--seed", "3", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert set(doc) == {"n", "r", "partners", "seed"}
    assert doc["n"] == 8 and doc["r"] == 2 and doc["seed"] == 3
    assert len(doc["partners"]) == 2 and len(doc["partners"][0]) == 64


def test_diagnose_json(tmp_path, capsys):
    out_path = tmp_path / "diag.json"
    code, _, _ = run_cli(capsys, "diagnose", "--n", "32", "--k", "2", "--r", "1",
                         "--p", "0.2", "--t", "8", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert "ubiquity" in doc and "diameter_stats" in doc
    assert set(doc["ubiquity"]) >= {"ubiquitous", "connected", "density_ok"}
    for entry in doc["diameter_stats"].values():
        assert {"cells", "cumulative", "bound", "cumulative_bound"} == set(entry)
