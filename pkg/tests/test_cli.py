"""Command-line interface: exit codes, JSON output, round trips."""

from __future__ import annotations

import csv
import io
import json
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction as F

import numpy as np
import pytest

from manired.cli import main
from manired.closedform import permutation_oracle_flag_lp
from manired.graphs import generate
from manired.manifolds import FlagSignature
from manired.reductions import (
    build_stiefel_lp,
    instance_to_json,
    solve_stiefel_diag_exact,
)


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


GR24_JSON = json.dumps({"n": 4, "ks": [2], "params": [[1, 1], [0, 1]]})


def test_oracle_kappa_exact_output():
    code, out, _ = run_cli("oracle", "complete:3", "--which", "kappa")
    assert code == 0
    assert json.loads(out) == {"value": 2, "witness": [1]}


def test_oracle_alpha_and_ms():
    code, out, _ = run_cli("oracle", "cycle:5", "--which", "alpha")
    assert code == 0
    assert json.loads(out) == {"value": 2, "witness": [1, 3]}
    code, out, _ = run_cli("oracle", "complete:3", "--which", "ms")
    assert code == 0
    assert json.loads(out)["value"] == [2, 3]


def test_oracle_capacity_exit_code():
    code, out, err = run_cli("oracle", "empty:26", "--which", "alpha")
    assert code == 3
    assert out == ""
    assert err.strip() != ""


def test_usage_errors_exit_two():
    code, _, err = run_cli("oracle", "complete:3", "--which", "beta")
    assert code == 2
    code, _, err = run_cli("reduce", "complete:3", "--theorem", "grassmann-feas")
    assert code == 2  # missing --k
    assert err.strip() != ""
    code, _, _ = run_cli("verify", "--theorem", "stiefel-lp")
    assert code == 2  # neither graph nor family
    code, _, _ = run_cli("oracle", "no/such/file.col", "--which", "alpha")
    assert code == 2
    code, _, _ = run_cli("frobnicate")
    assert code == 2


def test_reduce_writes_file_and_stdout(tmp_path):
    path = tmp_path / "inst.json"
    code, out, err = run_cli(
        "reduce", "path:3", "--theorem", "stiefel-lp", "--n", "3", "-o", str(path)
    )
    assert code == 0
    on_disk = json.loads(path.read_text())
    assert json.loads(out) == on_disk
    assert on_disk == instance_to_json(build_stiefel_lp(generate("path", 3), 3))
    assert str(path) in err


def test_reduce_solve_round_trip(tmp_path):
    path = tmp_path / "lp.json"
    run_cli("reduce", "path:3", "--theorem", "stiefel-lp", "--n", "3", "-o", str(path))
    code, out, _ = run_cli("solve-exact", str(path))
    assert code == 0
    got = json.loads(out)
    exact_val, x = solve_stiefel_diag_exact(build_stiefel_lp(generate("path", 3), 3))
    assert got["value"] == int(exact_val)
    assert got["witness_diagonal"] == [int(v) for v in np.diag(x)]
    assert got["certificate"]["kind"] == "stable_set"
    assert got["certificate"]["vertices"] == [1, 3]


def test_solve_exact_feasibility(tmp_path):
    path = tmp_path / "gf.json"
    run_cli("reduce", "cycle:4", "--theorem", "grassmann-feas", "--k", "2", "-o", str(path))
    code, out, _ = run_cli("solve-exact", str(path))
    assert code == 0
    got = json.loads(out)
    assert got["feasible"] is True
    assert got["witness_diagonal"] == [1, 0, 1, 0]

    path2 = tmp_path / "gf3.json"
    run_cli("reduce", "complete:3", "--theorem", "grassmann-feas", "--k", "2", "-o", str(path2))
    code, out, _ = run_cli("solve-exact", str(path2))
    assert code == 0
    assert json.loads(out)["feasible"] is False


def test_solve_exact_flag_qp(tmp_path):
    path = tmp_path / "fqp.json"
    code, _, _ = run_cli(
        "reduce", "complete:4", "--theorem", "flag-qp", "--sig", GR24_JSON, "-o", str(path)
    )
    assert code == 0
    code, out, _ = run_cli("solve-exact", str(path))
    assert code == 0
    got = json.loads(out)
    assert got["value"] == 3
    assert got["witness_diagonal"] == [[1, 2], [1, 2], [1, 2], [1, 2]]


def test_solve_riemannian_close_to_exact(tmp_path):
    path = tmp_path / "qp.json"
    run_cli("reduce", "complete:3", "--theorem", "stiefel-qp", "-o", str(path))
    code, out, _ = run_cli(
        "solve-riemannian", str(path), "--restarts", "10", "--seed", "1"
    )
    assert code == 0
    got = json.loads(out)
    assert abs(got["best"]["value"] - 5.0) <= 1e-6
    assert len(got["restarts"]) == 10


def test_closed_form_random_matches_oracle():
    code, out, _ = run_cli(
        "closed-form", "--random-dim", "4", "--seed", "3", "--sig", GR24_JSON
    )
    assert code == 0
    got = json.loads(out)
    assert got["residuals"]["objective"] <= 1e-9
    x = np.array(got["X"])
    assert x.shape == (4, 4)


def test_closed_form_matrix_file(tmp_path):
    path = tmp_path / "a.json"
    a = [[3.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]
    path.write_text(json.dumps(a))
    sig13 = json.dumps({"n": 3, "ks": [1], "params": [[1, 1], [0, 1]]})
    code, out, _ = run_cli("closed-form", "--matrix", str(path), "--sig", sig13)
    assert code == 0
    got = json.loads(out)
    assert abs(got["value"] - 3.0) <= 1e-9
    oracle = permutation_oracle_flag_lp(
        np.array(a), FlagSignature(3, (1,), (F(1), F(0)))
    )
    assert abs(got["value"] - oracle) <= 1e-8


def test_verify_single_graph():
    # ambient unpinned: both n = m and n = m + 2 are exercised
    code, out, _ = run_cli("verify", "complete:3", "--theorem", "stiefel-qp")
    assert code == 0
    got = json.loads(out)
    assert got["pass"] is True
    assert got["rows"] == 2
    assert {r["theorem"] for r in got["reports"]} == {"stiefel_qp:n=3", "stiefel_qp:n=5"}
    assert got["reports"][0]["computed"] == 5

    code, out, _ = run_cli("verify", "complete:3", "--theorem", "stiefel-qp", "--n", "3")
    got = json.loads(out)
    assert code == 0 and got["rows"] == 1


def test_verify_family_sweeps_and_is_byte_stable():
    code1, out1, _ = run_cli("verify", "--family", "all:4", "--theorem", "grassmann-feas")
    assert code1 == 0
    got = json.loads(out1)
    assert got["pass"] is True
    assert got["graphs"] == 64
    assert got["rows"] == 64 * 4  # every k in 1..4
    code2, out2, _ = run_cli("verify", "--family", "all:4", "--theorem", "grassmann-feas")
    assert out2 == out1  # timing must not leak into stdout


def test_verify_sample_family_deterministic():
    args = ("verify", "--family", "sample:6:5:9", "--theorem", "stiefel-lp")
    code1, out1, _ = run_cli(*args)
    code2, out2, _ = run_cli(*args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["graphs"] == 5


def test_verify_jobs_flag_matches_serial():
    base = ("verify", "--family", "all:3", "--theorem", "flag-feas")
    _, out1, _ = run_cli(*base)
    _, out4, _ = run_cli(*base, "--jobs", "4")
    assert out1 == out4


def test_report_csv(tmp_path):
    path = tmp_path / "rep.csv"
    code, out, _ = run_cli("report", "--family", "all:3", "-o", str(path))
    assert code == 0
    got = json.loads(out)
    assert got["pass"] is True
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [
        "graph_id",
        "m",
        "edges",
        "theorem",
        "oracle",
        "predicted",
        "computed",
        "pass",
        "millis",
    ]
    assert len(rows) - 1 == got["rows"]
    head = rows[1]
    assert head[0].startswith("g3-")
    assert head[7] == "1"
    float(head[8])  # millis parses as a number


def test_bad_family_spec():
    code, _, err = run_cli("verify", "--family", "all:nine", "--theorem", "stiefel-lp")
    assert code == 2
    code, _, _ = run_cli("verify", "--family", "all:7", "--theorem", "stiefel-lp")
    assert code == 3  # exhaustive corpus capped at m = 6
