from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import trisweep as ts


def run_cli(*args: str) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "trisweep.cli", *args],
        text=True,
        capture_output=True,
        check=False,
    )


GOLDEN_SWEEP_1 = """\
(ac,cb) -> (x, y)
(ab) -> (x*y*phi_acb^-1)
(ad,db) -> (x*y*phi_acb^-1, phi_adb)
(ad,dc,cb) -> (x*y*phi_acb^-1, phi_adb, phi_dcb)
(ac,cb) -> (x*y*phi_acb^-1*phi_adb*phi_adc^-1, phi_dcb)
"""

GOLDEN_SWEEP_2 = """\
(ac,cb) -> (x, y)
(ab) -> (x*y*phi_acb^-1)
(ad,db) -> (x*y*phi_acb^-1, phi_adb)
(ac,cd,db) -> (x*y*phi_acb^-1, phi_acd, phi_adb)
(ac,cb) -> (x*y*phi_acb^-1, phi_acd*phi_adb*phi_cdb^-1)
"""


def test_validate_bundled_tetrahedron():
    proc = run_cli("validate", "--complex", "tetrahedron.json")
    assert proc.returncode == 0
    assert proc.stdout == "ok\n"


def test_validate_broken_closure(tmp_path: Path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a","b","c","x"], "triangles": [["a","b","c"]], "pure_dim2": true}')
    proc = run_cli("validate", "--complex", str(bad))
    assert proc.returncode == 1
    assert "not in any 2-simplex" in proc.stdout


def test_validate_unparseable_file(tmp_path: Path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": ["a", "a"]}')
    proc = run_cli("validate", "--complex", str(bad))
    assert proc.returncode == 1
    assert "duplicate vertex" in proc.stderr


def test_missing_file_is_usage_error():
    proc = run_cli("validate", "--complex", "/nonexistent/complex.json")
    assert proc.returncode == 2


def test_holonomy_degenerate_loop():
    proc = run_cli(
        "holonomy",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--path", "a,a",
    )
    assert proc.returncode == 0
    assert proc.stdout == "e\n"


def test_holonomy_modular_loop(tmp_path: Path):
    conn = tmp_path / "z12.json"
    conn.write_text(
        '{"group": {"cyclic": 12}, "edges": {"a>b": "3", "b>d": "4", "d>a": "7", "a>c": "0", "b>c": "0", "c>d": "0"}}'
    )
    forward = run_cli(
        "holonomy", "--complex", "tetrahedron.json", "--connection", str(conn), "--path", "a,b,d,a"
    )
    assert forward.returncode == 0
    assert forward.stdout == "2\n"
    reverse = run_cli(
        "holonomy", "--complex", "tetrahedron.json", "--connection", str(conn), "--path", "a,d,b,a"
    )
    assert reverse.stdout == "10\n"


def test_sweep_scheme1_golden_text():
    proc = run_cli(
        "sweep",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", "scheme1.json",
        "--word", "x,y",
    )
    assert proc.returncode == 0
    assert proc.stdout == GOLDEN_SWEEP_1


def test_sweep_scheme2_golden_text():
    proc = run_cli(
        "sweep",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", "scheme2.json",
        "--word", "x,y",
    )
    assert proc.returncode == 0
    assert proc.stdout == GOLDEN_SWEEP_2


def test_sweep_json_round_trips():
    proc = run_cli(
        "sweep",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", "scheme1.json",
        "--word", "x,y",
        "--format", "json",
    )
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert len(payload) == 5
    K = ts.load_complex(ts.data_path("tetrahedron.json").read_text())
    conn = ts.load_connection(ts.data_path("tetrahedron_symbolic.json").read_text(), K)
    for entry in payload:
        path = ts.EdgePath(tuple((x, y) for x, y in entry["path"]))
        letters = tuple(ts.parse_element(t, conn.group) for t in entry["letters"])
        ts.Section(path, letters)
    assert payload[-1]["letters"] == ["x*y*phi_acb^-1*phi_adb*phi_adc^-1", "phi_dcb"]


def test_sweep_empty_scheme(tmp_path: Path):
    scheme = tmp_path / "empty.json"
    scheme.write_text('{"start": [["a","c"],["c","b"]], "steps": []}')
    proc = run_cli(
        "sweep",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", str(scheme),
        "--word", "x,y",
    )
    assert proc.returncode == 0
    assert proc.stdout == "(ac,cb) -> (x, y)\n"


def test_sweep_accepts_fresh_generators(tmp_path: Path):
    scheme = tmp_path / "one.json"
    scheme.write_text(
        '{"start": [["a","c"],["c","b"]], "steps": [{"move":"alpha_merge","cell":"a.c.b","position":0}]}'
    )
    proc = run_cli(
        "sweep",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", str(scheme),
        "--word", "fresh_u,fresh_v",
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "(ab) -> (fresh_u*fresh_v*phi_acb^-1)"


def test_compare_bundled_schemes():
    proc = run_cli(
        "compare",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", "scheme1.json",
        "--scheme", "scheme2.json",
        "--word", "x,y",
    )
    assert proc.returncode == 0
    lines = proc.stdout.splitlines()
    assert lines[0] == "different"
    assert lines[1] == "quotient: (phi_adc*phi_adb^-1, phi_dcb^-1*phi_acd*phi_adb*phi_cdb^-1)"


def test_curvature_flat_cells(tmp_path: Path):
    conn = tmp_path / "flat.json"
    edges = {f"{a}>{b}": "0" for a, b in (("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d"))}
    cells = {}
    for tri in (("a", "b", "c"), ("a", "b", "d"), ("a", "c", "d"), ("b", "c", "d")):
        for apex in tri:
            u, w = sorted(set(tri) - {apex})
            cells[f"{u}.{apex}.{w}"] = "0"
            cells[f"{w}.{apex}.{u}"] = "0"
    conn.write_text(json.dumps({"group": {"cyclic": 5}, "edges": edges, "cells": cells}))
    proc = run_cli(
        "curvature", "--complex", "tetrahedron.json", "--connection", str(conn), "a", "b", "c", "d"
    )
    assert proc.returncode == 0
    assert proc.stdout == "path: (ab,bd)\ndefects: (0, 0)\n"


def test_center_symmetric_three():
    proc = run_cli("center", '{"symmetric":3}')
    assert proc.returncode == 0
    assert proc.stdout == "e\n"


def test_center_dihedral_json():
    proc = run_cli("center", '{"dihedral":4}', "--format", "json")
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"center": ["e", "r^2"]}


def test_output_is_deterministic():
    args = (
        "compare",
        "--complex", "tetrahedron.json",
        "--connection", "tetrahedron_symbolic.json",
        "--scheme", "scheme1.json",
        "--scheme", "scheme2.json",
        "--word", "x,y",
        "--format", "json",
        "--seed", "0",
    )
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0
