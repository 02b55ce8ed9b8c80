import json
import os

import pytest

from swaproute import cli, fixtures
from swaproute.problem import ProblemGraph
from swaproute.report import RunReport
from swaproute.router import RoutedCircuit
from swaproute.topology import CouplingMap


def run_cli(*args):
    return cli.main([str(a) for a in args])


def test_gen_problem_fixture(tmp_path):
    out = tmp_path / "g10.json"
    assert run_cli("gen-problem", "--fixture", "g10", "-o", out) == 0
    assert ProblemGraph.load(out) == fixtures.g10()


def test_gen_problem_random_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("gen-problem", "--n", 9, "--density", 0.5, "--seed", 7, "-o", a)
    run_cli("gen-problem", "--n", 9, "--density", 0.5, "--seed", 7, "-o", b)
    assert a.read_text() == b.read_text()


def test_gen_map_and_route_report(tmp_path):
    pmap = tmp_path / "map.json"
    prob = tmp_path / "prob.json"
    rep = tmp_path / "report.json"
    circ = tmp_path / "circ.json"
    qasm = tmp_path / "circ.qasm"
    assert run_cli("gen-map", "--family", "line", "--dims", 6, "-o", pmap) == 0
    assert run_cli("gen-problem", "--n", 6, "--density", 1.0, "--seed", 1, "-o", prob) == 0
    code = run_cli(
        "route", "--problem", prob, "--map", pmap, "--p", 2,
        "--report", rep, "--circuit-json", circ, "--qasm", qasm,
    )
    assert code == 0
    report = RunReport.from_json(rep.read_text())
    routed = RoutedCircuit.from_json(circ.read_text())
    assert report.matches(routed)  # counters round-trip exactly
    assert RunReport.from_json(report.to_json()) == report
    assert qasm.read_text().count("cx q[") == routed.cnot_count


def test_verify_exit_codes(tmp_path, monkeypatch):
    prob = tmp_path / "prob.json"
    pmap = tmp_path / "map.json"
    run_cli("gen-problem", "--fixture", "g10", "-o", prob)
    run_cli("gen-map", "--fixture", "nairobi", "-o", pmap)
    strat = tmp_path / "s0.json"
    strat.write_text(fixtures.nairobi_strategy().to_json())
    assert run_cli(
        "verify", "--problem", prob, "--map", pmap, "--strategy", strat, "--report", os.devnull
    ) == 0
    # a failing equivalence check must exit with code 2
    monkeypatch.setattr(cli, "verify_equivalence", lambda *a, **k: False)
    assert run_cli(
        "verify", "--problem", prob, "--map", pmap, "--strategy", strat, "--report", os.devnull
    ) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        cli.make_parser().parse_args(["route", "--problem", "x"])  # missing --map
    assert err.value.code == 1


def test_density_curve_csv(tmp_path):
    out = tmp_path / "curve.csv"
    assert run_cli("density-curve", "--family", "line", "--n", 10, "-o", out) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "layers,line"
    assert len(lines) == 10  # header + L = 0..8
    assert lines[-1].endswith("1.00000000")


def test_estimate_json(tmp_path):
    out = tmp_path / "est.json"
    assert run_cli(
        "estimate", "--n", 485, "--density", 1, "--family", "heavy-hex",
        "--shots-policy", "fixed:10000", "-o", out,
    ) == 0
    doc = json.loads(out.read_text())
    assert doc["tau_total_h"] == pytest.approx(9.65, abs=0.15)
    assert doc["n_shots"] == 10000


def test_bench_reproducible_and_threaded(tmp_path, monkeypatch):
    cfg = tmp_path / "bench.json"
    cfg.write_text(json.dumps({
        "families": ["unrolled-heavy-hex"],
        "sizes": [10, 12],
        "densities": [0.5],
        "seeds": [0, 1],
    }))
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert run_cli("bench", "--config", cfg, "-o", a) == 0
    assert run_cli("bench", "--config", cfg, "-o", b) == 0
    rows_a = _strip_times(a.read_text())
    assert rows_a == _strip_times(b.read_text())
    monkeypatch.setenv("SWAPROUTE_THREADS", "2")
    assert run_cli("bench", "--config", cfg, "-o", c) == 0
    assert rows_a == _strip_times(c.read_text())  # order independent of pool


def _strip_times(csv_text):
    # wall-clock columns vary run to run; all counter columns must not
    rows = []
    for line in csv_text.strip().splitlines():
        cells = line.split(",")
        rows.append(cells[:11])
    return rows


def test_map_fixture_mumbai():
    cmap = fixtures.mumbai_map()
    assert cmap.num_qubits == 27
    assert len(cmap.edges) == 28
    g = fixtures.mumbai27()
    assert g.edge_set() == cmap.edges  # instance is hardware native
