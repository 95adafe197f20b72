"""Command-line front end: exit codes, file outputs, determinism."""

import json

import numpy as np
import pytest

import swelab.cli as cli


def test_list_schemes(capsys):
    assert cli.main(["list-schemes"]) == 0
    out = capsys.readouterr().out
    assert "roe" in out and "modified-hr" in out
    assert "subsonic" in out and "not implemented" in out


def test_unimplemented_scheme_exits_1(capsys):
    rc = cli.main(["run", "--test", "3", "--scheme", "subsonic"])
    assert rc == 1
    assert "subsonic" in capsys.readouterr().err


def test_usage_errors_exit_2():
    assert cli.main(["run", "--test", "3", "--scheme", "hllc"]) == 2
    assert cli.main(["run", "--test", "9", "--scheme", "roe"]) == 2
    assert cli.main(["run", "--test", "3", "--scheme", "roe", "--param", "oops"]) == 2
    assert cli.main(["run", "--test", "3", "--scheme", "roe", "--until", "never"]) == 2
    assert cli.main(["convergence", "--test", "2", "--scheme", "roe"]) == 2
    assert cli.main([]) == 2


def test_run_writes_snapshot_and_summary(tmp_path):
    rc = cli.main([
        "run", "--test", "3", "--scheme", "roe", "--cells", "40",
        "--until", "time=0.05", "--out", str(tmp_path),
    ])
    assert rc == 0
    snap = tmp_path / "snapshot_final.csv"
    lines = snap.read_text().splitlines()
    assert lines[0] == "x,H,h,q,eta,u,fr2"
    assert len(lines) == 41
    row = [float(v) for v in lines[1].split(",")]
    x, H, h, q, eta, u, fr2 = row
    assert eta == pytest.approx(h - H, rel=1e-15)
    assert u == pytest.approx(q / h, rel=1e-12)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert list(summary) == ["test", "scheme", "params", "metadata"]
    assert summary["test"] == 3 and summary["scheme"] == "roe"
    assert summary["metadata"]["omega_split_form"] == "half"


def test_run_is_deterministic(tmp_path):
    argv = ["run", "--test", "6", "--scheme", "force-hr", "--cells", "30",
            "--until", "time=0.2"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.main(argv + ["--out", str(out1)]) == 0
    assert cli.main(argv + ["--out", str(out2)]) == 0
    assert (out1 / "snapshot_final.csv").read_bytes() == \
        (out2 / "snapshot_final.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()


def test_sweep_outputs_ordered_rows(tmp_path):
    rc = cli.main([
        "sweep", "--test", "3", "--scheme", "hr", "--scheme", "roe",
        "--cells", "40", "--until", "time=0.05",
        "--sweep", "H_r=0.2,0.3", "--out", str(tmp_path),
    ])
    assert rc == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("H_r,scheme,h_l,h_r,")
    assert len(lines) == 5
    # rows come out in (value, scheme) order regardless of worker timing
    got = [tuple(l.split(",")[:2]) for l in lines[1:]]
    assert got == [("0.20000000000000001", "hr"), ("0.20000000000000001", "roe"),
                   ("0.29999999999999999", "hr"), ("0.29999999999999999", "roe")]


def test_sweep_records_failed_rows(tmp_path, capsys):
    rc = cli.main([
        "sweep", "--test", "3", "--scheme", "hr", "--cells", "40",
        "--until", "time=0.05", "--sweep", "H_r=0.2,-1.0",
        "--out", str(tmp_path),
    ])
    assert rc == 0  # the sweep completes; the bad value is recorded in-row
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert "ValueError" in lines[2]
    assert "failed rows" in capsys.readouterr().out


def test_convergence_outputs(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "_LADDER", (25, 50))
    rc = cli.main([
        "convergence", "--test", "6", "--scheme", "roe",
        "--bound", "0.05", "--out", str(tmp_path),
    ])
    assert rc == 0
    lines = (tmp_path / "convergence.csv").read_text().splitlines()
    assert lines[0] == "scheme,dH,dl,n_cells,l1_error,met_bound"
    assert len(lines) == 3
    needed = json.loads((tmp_path / "cells_needed.json").read_text())
    assert needed["bound"] == 0.05
    assert needed["cells_needed"]["roe"] in (25, 50)


def test_config_file_fills_defaults(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("cells = 30   # small grid\nuntil = time=0.05\n")
    rc = cli.main([
        "run", "--test", "3", "--scheme", "roe",
        "--config", str(cfgfile), "--out", str(tmp_path),
    ])
    assert rc == 0
    lines = (tmp_path / "snapshot_final.csv").read_text().splitlines()
    assert len(lines) == 31  # the config's cell count was used
    bad = tmp_path / "bad.cfg"
    bad.write_text("gravity = 10\n")
    assert cli.main(["run", "--test", "3", "--scheme", "roe",
                     "--config", str(bad)]) == 2


def test_snapshot_round_trips_at_full_precision(tmp_path):
    rc = cli.main([
        "run", "--test", "2", "--scheme", "roe", "--cells", "30",
        "--until", "time=0.1", "--out", str(tmp_path),
    ])
    assert rc == 0
    data = np.genfromtxt(tmp_path / "snapshot_final.csv", delimiter=",", names=True)
    # 17 significant digits survive the text round trip losslessly
    assert np.all(data["eta"] == data["h"] - data["H"])
