import json

import numpy as np
import pytest

from nashdescent.cli import main
from nashdescent.generator import solve_b


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, out


def test_constants(capsys):
    code, out = run(capsys, "constants")
    assert code == 0
    doc = json.loads(out)
    assert doc["b"] == pytest.approx(solve_b().b)
    assert set(doc) >= {"b", "lambda0", "mu0", "rhoStar"}


def test_generate_static_and_solve_ts(tmp_path, capsys):
    code, out = run(capsys, "generate", "--static", "tight-3x3", "--out", str(tmp_path))
    assert code == 0
    path = json.loads(out)["written"][0]
    code, out = run(capsys, "solve", path, "--algorithm", "ts",
                    "--init", "file:canonical", "--delta", "1e-6")
    assert code == 0
    doc = json.loads(out)
    assert doc["f"] == pytest.approx(solve_b().b, abs=1e-6)


def test_solve_dfm_on_static_instance(tmp_path, capsys):
    run(capsys, "generate", "--static", "dfm-tight", "--out", str(tmp_path))
    code, out = run(capsys, "solve", str(tmp_path / "dfm-tight.json"),
                    "--algorithm", "dfm", "--init", "file:canonical", "--delta", "1e-6")
    assert code == 0
    assert json.loads(out)["f"] == pytest.approx(1 / 3, abs=1e-9)


def test_solve_regret_matching_finds_pure_equilibrium(tmp_path, capsys):
    run(capsys, "generate", "--static", "tight-3x3", "--out", str(tmp_path))
    code, out = run(capsys, "solve", str(tmp_path / "tight-3x3.json"),
                    "--algorithm", "rm", "--rounds", "100000", "--seed", "1")
    assert code == 0
    assert json.loads(out)["f"] <= 1e-3


def test_generate_verify_and_determinism(tmp_path, capsys):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    code, summary = run(capsys, "generate", "--size", "3x3", "--count", "2",
                        "--seed", "7", "--out", str(out1))
    assert code == 0
    assert json.loads(summary)["written"] == 2
    code, _ = run(capsys, "generate", "--size", "3x3", "--count", "2",
                  "--seed", "7", "--out", str(out2))
    assert code == 0
    for name in ("game_0000.json", "game_0001.json", "game_0000.cert.json"):
        assert (out1 / name).read_text() == (out2 / name).read_text()

    code, out = run(capsys, "verify", str(out1 / "game_0000.json"),
                    "--cert", str(out1 / "game_0000.cert.json"), "--grid", "100")
    assert code == 0
    assert json.loads(out)["passed"]


def test_verify_fails_on_tampered_game(tmp_path, capsys):
    run(capsys, "generate", "--static", "tight-3x3", "--out", str(tmp_path))
    path = tmp_path / "tight-3x3.json"
    doc = json.loads(path.read_text())
    doc["R"][0][0] = 0.25
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "verify", str(path))
    assert code == 2
    assert not json.loads(out)["passed"]


def test_nested_generation_exits_empty(tmp_path, capsys):
    code, out = run(capsys, "generate", "--size", "3x3", "--count", "1",
                    "--restriction", "nested", "--seed", "1",
                    "--max-attempts", "40", "--out", str(tmp_path))
    assert code == 2
    assert json.loads(out)["written"] == 0


def test_missing_file_is_io_error(capsys):
    code, _ = run(capsys, "solve", "/nonexistent/game.json")
    assert code == 1


def test_bad_init_spec_is_io_error(tmp_path, capsys):
    run(capsys, "generate", "--static", "half-sp", "--out", str(tmp_path))
    code, _ = run(capsys, "solve", str(tmp_path / "half-sp.json"), "--init", "weird")
    assert code == 1


def test_exp_success_subcommand(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, text = run(capsys, "exp-success", "--size", "3x3", "--trials", "10",
                     "--seed", "3", "--out", str(out), "--format", "json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert "aggregates" in doc and "records" in doc
    assert json.loads(text)["aggregates"]


def test_exp_stability_csv_output(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code, _ = run(capsys, "exp-stability", "--size", "3x3", "--count", "2",
                  "--samples", "4", "--seed", "3", "--out", str(out),
                  "--format", "csv")
    assert code == 0
    header = out.read_text().splitlines()[0]
    assert header.startswith("experiment,instance,algorithm")
