"""Command line behavior: parsing, file inputs, reports, exit codes."""

import json

import pytest

from curvedist import checks, fileio
from curvedist.cli import build_parser, main


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_parser_analyze_flags():
    args = build_parser().parse_args(
        ["analyze", "--scenario", "poly-staircase", "--rmin", "10",
         "--rmax", "100", "--radii", "4", "--tol", "1e-4"]
    )
    assert args.command == "analyze"
    assert args.scenario == "poly-staircase"
    assert args.rmin == 10.0 and args.radii == 4
    assert args.tol == pytest.approx(1e-4)


def test_analyze_requires_inputs(capsys):
    rc = main(["analyze"])
    assert rc == 2
    assert "--scenario" in capsys.readouterr().err


def test_analyze_staircase_with_reports(tmp_path, capsys):
    csv_path = tmp_path / "report.csv"
    json_path = tmp_path / "report.json"
    rc = main([
        "analyze", "--scenario", "poly-staircase",
        "--rmin", "100", "--rmax", "1000", "--radii", "3",
        "--out", str(csv_path), "--json", str(json_path),
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "certified" in out
    assert "admissible subset coords" in out

    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].split(",")[:2] == ["r", "T"]
    assert len(lines) == 4
    doc = json.loads(json_path.read_text())
    assert doc["schema"] == 1
    assert doc["dim"] == 3
    assert doc["invariant_violations"] == []
    assert [row["status"] for row in doc["rows"]] == ["certified"] * 3
    Ts = [row["T"] for row in doc["rows"]]
    assert Ts == sorted(Ts)


def test_analyze_from_files(tmp_path, capsys):
    curve_doc = {
        "label": "line",
        "components": [
            {"type": "poly", "coeffs": [1]},
            {"type": "poly", "coeffs": [0, 1]},
        ],
    }
    planes_doc = {
        "name": "three-lines",
        "planes": [
            {"name": "a0", "vector": [1, 0]},
            {"name": "a1", "vector": [0, 1]},
            {"name": "a2", "vector": [1, "-1/2"]},
        ],
    }
    cpath = tmp_path / "curve.json"
    ppath = tmp_path / "planes.json"
    cpath.write_text(json.dumps(curve_doc))
    ppath.write_text(json.dumps(planes_doc))
    rc = main([
        "analyze", "--curve", str(cpath), "--planes", str(ppath),
        "--rmin", "1", "--rmax", "4", "--radii", "3", "--tol", "1e-4",
    ])
    out = capsys.readouterr().out
    assert rc == 0
    assert "curve: line" in out
    assert "three-lines" in out


def test_analyze_worker_env_var(tmp_path, capsys, monkeypatch):
    args = [
        "analyze", "--scenario", "poly-staircase",
        "--rmin", "100", "--rmax", "1000", "--radii", "3",
    ]
    seq_path = tmp_path / "seq.csv"
    par_path = tmp_path / "par.csv"
    rc = main(args + ["--out", str(seq_path)])
    assert rc == 0
    monkeypatch.setenv("CURVEDIST_WORKERS", "3")
    rc = main(args + ["--out", str(par_path)])
    capsys.readouterr()
    assert rc == 0
    # rows are assembled in grid order regardless of the worker count
    assert par_path.read_text() == seq_path.read_text()


def test_analyze_malformed_curve_file(tmp_path, capsys):
    cpath = tmp_path / "curve.json"
    ppath = tmp_path / "planes.json"
    out = tmp_path / "report.csv"
    cpath.write_text("{not json")
    ppath.write_text(json.dumps({"planes": [{"vector": [1, 0]}]}))
    rc = main([
        "analyze", "--curve", str(cpath), "--planes", str(ppath),
        "--out", str(out),
    ])
    err = capsys.readouterr().err
    assert rc == 1
    assert "error:" in err
    assert not out.exists()


def test_indicator_empty_family_file(tmp_path, capsys):
    fpath = tmp_path / "family.json"
    fpath.write_text(json.dumps({"rho": 1, "members": {}}))
    rc = main(["indicator", "--family", str(fpath)])
    err = capsys.readouterr().err
    assert rc == 1
    assert "empty family" in err


def test_load_planes_dimension_mismatch(tmp_path):
    doc = {"planes": [{"vector": [1, 0, 0]}]}
    p = tmp_path / "p.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        fileio.load_planes(str(p), dim=2)


def test_indicator_exp123(capsys):
    rc = main(["indicator", "--family", "exp123"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "characteristic coefficient: 2/pi" in out
    assert "maximal admissible proximity sum bound: 24" in out
    assert "counting coefficient of the Wronskian: 0" in out
    assert "[exact zero]" in out


def test_indicator_airy_certify(capsys):
    rc = main(["indicator", "--family", "airy", "--certify"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "maximal admissible proximity sum bound: 32/3" in out
    assert "m_1: 4/pi" in out and "m_2: 2/pi" in out
    assert out.count("exact zero") == 2
    assert "ordering on" in out
    assert "{H0}" in out


def test_indicator_family_file(tmp_path, capsys):
    fam_doc = {
        "rho": 1,
        "members": {
            "C": [{"lo": "-pi", "hi": "pi", "A": 1}],
            "Z": [{"lo": "-pi", "hi": "pi"}],
        },
    }
    fpath = tmp_path / "family.json"
    fpath.write_text(json.dumps(fam_doc))
    rc = main(["indicator", "--family", str(fpath)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "no dimension jumps declared" in out


def test_check_reports_and_replay(tmp_path, capsys, monkeypatch):
    rows = [
        {"suite": "alpha", "case": "one", "min_ratio": 1.25, "ok": True},
        {"suite": "beta", "case": "two", "max_residual": 3e-9, "ok": False},
    ]
    failure = {"suite": "beta", "case": "two", "seed": 7}

    def fake_run_all(seed, samples):
        assert seed == 9 and samples == 50
        return False, rows, failure

    monkeypatch.setattr(checks, "run_all", fake_run_all)
    replay = tmp_path / "replay.json"
    rc = main(["check", "--seed", "9", "--samples", "50",
               "--replay", str(replay)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out and "alpha" in out
    assert json.loads(replay.read_text())["seed"] == 7

    monkeypatch.setattr(
        checks, "run_all",
        lambda seed, samples: (True, rows[:1], None),
    )
    rc = main(["check", "--seed", "9", "--samples", "50",
               "--replay", str(replay)])
    assert rc == 0
