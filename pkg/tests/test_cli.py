import csv
import io
import json
import subprocess
import sys

import pytest

from cgsbound import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_petersen_json(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "petersen", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["lambda2"] == pytest.approx(2, abs=1e-10)
    assert d["mohar_bound"] == pytest.approx(0.2)
    assert d["lu_bound"] == pytest.approx(0.164, abs=5e-4)
    assert d["cgs_single_path_bound"] == pytest.approx(10 / 9, rel=1e-11)
    assert d["optimizer_converged"] is True


def test_bounds_star_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "star", "--n", "10", "--format", "csv")
    assert code == 0
    (row,) = list(csv.DictReader(io.StringIO(out)))
    assert float(row["cgs_single_path_bound"]) == pytest.approx(10 / 17, rel=1e-11)
    assert float(row["lambda2"]) == pytest.approx(1, rel=1e-11)
    assert row["n"] == "10"


def test_bounds_table_format(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "cycle", "--n", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["field", "value"]
    assert any(line.split() == ["diameter", "3"] for line in lines)


def test_bounds_strategy_subset_and_scores(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "path", "--n", "4", "--strategies", "uniform",
                       "--format", "json", "--scores")
    d = json.loads(out)
    assert code == 0
    assert d["cgs_single_path_bound"] is None and d["cgs_optimized_bound"] is None
    assert d["scores"] == {"uniform": [6.0, 8.0, 6.0]}


def test_bounds_file_with_labels(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("# triangle plus tail\nann bob\nbob cat\ncat ann\ncat dan\n")
    code, out, _ = run(capsys, "bounds", "--input", str(f), "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert (d["n"], d["edge_count"], d["diameter"]) == (4, 4, 2)
    # the pendant edge carries dan's three connections: 1 + 2 + 2
    assert d["argmax_edge_ends"] == "cat-dan"
    assert d["cgs_single_path_bound"] == pytest.approx(4 / 5)
    assert d["graph"] == "g.txt"


def test_disconnected_file_exit_3(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("a b\nc d\n")
    code, _, err = run(capsys, "bounds", "--input", str(f))
    assert code == 3
    assert "vertex c" in err


def test_parse_error_exit_2(tmp_path, capsys):
    f = tmp_path / "g.txt"
    f.write_text("a b\nc\n")
    code, _, err = run(capsys, "bounds", "--input", str(f))
    assert code == 2
    assert "line 2" in err
    f.write_text("a a\n")
    assert run(capsys, "bounds", "--input", str(f))[0] == 2


@pytest.mark.parametrize("argv", [
    ["bounds"],
    ["bounds", "--family", "star", "--input", "x.txt"],
    ["bounds", "--input", "/nonexistent/graph.txt"],
    ["bounds", "--family", "star", "--strategies", "greedy"],
    ["bench", "--trials", "0"],
    ["bench", "--n", "9:3"],
    ["bounds", "--family", "star", "--tol", "0"],
])
def test_bad_configuration_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_gnp_retry_exhaustion_exit_3(capsys):
    code, _, _ = run(capsys, "bounds", "--family", "erdos_renyi", "--n", "40", "--p", "0.001")
    assert code == 3


def test_convergence_exit_4(capsys, monkeypatch):
    from cgsbound.errors import ConvergenceError

    def boom(g):
        raise ConvergenceError("no convergence")
    monkeypatch.setattr("cgsbound.bounds.algebraic_connectivity", boom)
    assert run(capsys, "bounds", "--family", "petersen")[0] == 4


def test_flow_exit_5(capsys, monkeypatch):
    from cgsbound.errors import InvalidFlowError

    def boom(*a, **k):
        raise InvalidFlowError("bad flow")
    monkeypatch.setattr("cgsbound.bounds.optimize_strategy", boom)
    assert run(capsys, "bounds", "--family", "cycle", "--n", "6")[0] == 5


def test_table1(capsys):
    code, out, _ = run(capsys, "table1", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["mismatches"] == 0
    rows = {(r["graph"], r["quantity"]): r for r in d["rows"]}
    assert rows[("path10", "cgs")]["computed"] == pytest.approx(0.08)
    for q in ("lambda2", "lu", "cgs"):
        assert rows[("complete10", q)]["computed"] == pytest.approx(10)
    cyc = rows[("cycle9", "cgs")]
    assert cyc["computed"] == pytest.approx(0.3) and cyc["expected"] == pytest.approx(0.3)
    assert "24n/(n^2-1)" in cyc["note"]
    assert {g for g, _ in rows} == {"complete10", "path10", "cycle9", "star10", "petersen"}


def test_table1_flags_mismatch(capsys, monkeypatch):
    real = cli._table1_rows

    def skewed():
        rows = real()
        g, expect, note = rows[0]
        return [(g, dict(expect, mohar=expect["mohar"] + 1e-6), note)] + rows[1:]
    monkeypatch.setattr(cli, "_table1_rows", skewed)
    code, out, _ = run(capsys, "table1", "--format", "csv")
    recs = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [(r["graph"], r["quantity"]) for r in recs if r["status"] == "MISMATCH"] == [("complete10", "mohar")]


def test_bench_rows(capsys):
    code, out, _ = run(capsys, "bench", "--n", "12", "--p", "0.3", "--trials", "50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,p,seed,lambda2,mohar,lu,cgs_single,cgs_uniform,cgs_opt"
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 50
    assert [int(r["seed"]) for r in rows] == list(range(50))
    for r in rows:
        lam = float(r["lambda2"])
        assert float(r["cgs_opt"]) <= lam + 1e-9
        assert float(r["cgs_single"]) >= float(r["mohar"]) - 1e-12


def test_bench_k2(capsys):
    code, out, _ = run(capsys, "bench", "--n", "2", "--p", "1", "--trials", "1", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert d["lambda2"] == pytest.approx(2) and d["cgs_single"] == 2


def test_bench_complete_rows(capsys):
    code, out, _ = run(capsys, "bench", "--n", "7", "--p", "1", "--trials", "3", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(rows) == 3
    for r in rows:
        assert r["cgs_single"] == r["lu"] == 7
        assert r["lambda2"] == pytest.approx(7, rel=1e-11)


def test_bench_violation_exit_6(capsys, monkeypatch):
    real = cli.check_report

    def strict(rep, tol=1e-6):
        return real(rep, tol) + (["forced"] if rep.n == 9 else [])
    monkeypatch.setattr(cli, "check_report", strict)
    code, out, err = run(capsys, "bench", "--n", "5:9", "--p", "0.5", "--trials", "30", "--seed", "3")
    assert code == 6
    assert "seed" in err and "forced" in err
    bad_seed = int(err.split("seed ")[1].split(":")[0])
    trials = cli.bench_trials(cli.RunConfig("bench", n="5:9", p="0.5", seed=3, trials=30))
    assert dict((s, n) for n, _, s in trials)[bad_seed] == 9


def test_bench_deterministic(capsys):
    argv = ["bench", "--n", "4:20", "--p", "0.2:0.8", "--trials", "8", "--seed", "5"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first
    assert run(capsys, *argv, "--jobs", "2")[1] == first


def test_bounds_deterministic(capsys):
    argv = ["bounds", "--family", "erdos_renyi", "--n", "18", "--p", "0.3", "--seed", "4", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_json_reals_lossless_at_12_digits():
    assert cli.json_line({"x": 1 / 3}) == '{"x": 0.333333333333}\n'
    assert cli.fmt(2 / 3) == "0.666666666667"
    assert cli.fmt(True) == "true" and cli.fmt(None) == ""


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cgsbound", "bounds", "--family", "complete", "--n", "4",
                          "--format", "csv"], capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[1].startswith("complete4,4,6,1,4,")
