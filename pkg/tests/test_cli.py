import json

import numpy as np
import pytest

from fwflow.cli import main


def test_run_writes_trajectory(tmp_path, capsys):
    rc = main(
        [
            "run",
            "--problem",
            "triangle",
            "--method",
            "fw",
            "--max-iter",
            "20",
            "--output-dir",
            str(tmp_path),
        ]
    )
    assert rc == 0
    out = tmp_path / "triangle_fw.csv"
    assert out.exists()
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "iter,t,f,gap,feas_violation"
    assert len(lines) == 22


def test_certify_midpoint(capsys):
    rc = main(["certify", "midpoint", "--c", "2", "--k-max", "2"])
    assert rc == 0
    out = capsys.readouterr().out.strip().split("\n")
    assert out[1].startswith("1,-0.3810,1.1429")
    assert out[2].startswith("2,-0.2222,0.8889")


def test_certify_euler(capsys):
    rc = main(["certify", "euler", "--c", "2", "--k-max", "3"])
    assert rc == 0
    rows = capsys.readouterr().out.strip().split("\n")[1:]
    vals = [float(r.split(",")[1]) for r in rows]
    np.testing.assert_allclose(vals, [2 / 3, 0.5, 0.4], atol=5e-5)


def test_unknown_tableau_exits_2(capsys):
    assert main(["certify", "heun"]) == 2


def test_unknown_preset_exits_2(tmp_path):
    assert main(["preset", "nope", "--output-dir", str(tmp_path)]) == 2


def test_invalid_method_exits_2(tmp_path):
    rc = main(
        ["run", "--problem", "triangle", "--method", "newton", "--output-dir", str(tmp_path)]
    )
    assert rc == 2


def test_bound_consistency(tmp_path):
    rc = main(
        [
            "bound",
            "--c",
            "2",
            "--t-max",
            "10",
            "--points",
            "5",
            "--output",
            "bound.csv",
            "--output-dir",
            str(tmp_path),
        ]
    )
    assert rc == 0
    rows = np.loadtxt(tmp_path / "bound.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(rows[:, 1], rows[:, 2], atol=1e-8)


def test_sweep(tmp_path):
    cfg = [
        {"problem": "scalar_box", "method": "fw", "max_iter": 10, "output": "a"},
        {"problem": "scalar_box", "method": "rk", "tableau": "rk4", "max_iter": 10, "output": "b"},
    ]
    cfg_path = tmp_path / "sweep.json"
    cfg_path.write_text(json.dumps(cfg))
    rc = main(["sweep", "--config", str(cfg_path), "--output-dir", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "a.csv").exists() and (tmp_path / "b.csv").exists()


def test_output_dir_env_override(tmp_path, monkeypatch):
    other = tmp_path / "redirected"
    monkeypatch.setenv("FWFLOW_OUTPUT_DIR", str(other))
    rc = main(
        [
            "run",
            "--problem",
            "scalar_box",
            "--max-iter",
            "5",
            "--output-dir",
            str(tmp_path),
        ]
    )
    assert rc == 0
    assert (other / "scalar_box_fw.csv").exists()
    assert not (tmp_path / "scalar_box_fw.csv").exists()


def test_tableau_file(tmp_path):
    tab = {"A": [[0.0, 0.0], [0.5, 0.0]], "beta": [0.0, 1.0], "omega": [0.0, 0.5]}
    tp = tmp_path / "mid.json"
    tp.write_text(json.dumps(tab))
    rc = main(
        [
            "run",
            "--problem",
            "scalar_box",
            "--method",
            "rk",
            "--tableau-file",
            str(tp),
            "--max-iter",
            "10",
            "--output-dir",
            str(tmp_path),
        ]
    )
    assert rc == 0


def test_preset_fig3_manifest(tmp_path):
    rc = main(["preset", "fig3", "--output-dir", str(tmp_path)])
    assert rc == 0
    for stem in ("fig3_fw", "fig3_fw_linesearch", "fig3_rk_linesearch", "fig3_fw_momentum"):
        assert (tmp_path / f"{stem}.csv").exists()


def test_zigzag_table_shape(tmp_path):
    rc = main(
        [
            "zigzag",
            "--problem",
            "logistic",
            "--deltas",
            "1,0.5",
            "--windows",
            "5",
            "--T",
            "20",
            "--output",
            "z.csv",
            "--output-dir",
            str(tmp_path),
        ]
    )
    assert rc == 0
    lines = (tmp_path / "z.csv").read_text().strip().split("\n")
    assert lines[0] == "method,delta,W,energy"
    assert len(lines) == 3
