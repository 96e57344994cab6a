import io
import json
import subprocess
import sys

import pytest

from zflow.cli import build_parser, main
from zflow.flowsolve import FlowAssignment, Orientation, verify_flow, is_beta_orientation
from zflow.multigraph import Multigraph, complete_graph, cycle_graph


@pytest.fixture
def k4_file(tmp_path):
    path = tmp_path / "k4.txt"
    path.write_text(complete_graph(4).serialize())
    return str(path)


@pytest.fixture
def k5_file(tmp_path):
    path = tmp_path / "k5.txt"
    path.write_text(complete_graph(5).serialize())
    return str(path)


def run(args, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_k4_nz3(k4_file, capsys):
    code, out, _ = run(["solve", k4_file, "--mode", "nz3", "--json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "zflow/1"
    assert doc["exists"] is False and doc["nodes_searched"] > 0


def test_census_k4(k4_file, capsys):
    code, out, _ = run(["census", k4_file, "--max-size", "5", "--json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["counts_by_size"] == {"1": 0, "2": 0, "3": 4, "4": 3, "5": 0}
    assert doc["edge_connectivity"] == 3 and len(doc["cuts"]) == 7


def test_census_human(k4_file, capsys):
    code, out, _ = run(["census", k4_file], capsys)
    assert code == 0 and "cuts_of_size 3 4" in out.splitlines()


def test_flowpoly_from_stdin(capsys, monkeypatch):
    code, out, _ = run(["solve", "-", "--mode", "flowpoly", "--k", "3"], capsys, cycle_graph(5).serialize(), monkeypatch)
    assert code == 0 and out == "2\n"


def test_count_mode(k4_file, capsys):
    code, out, _ = run(["solve", k4_file, "--mode", "count", "--k", "4", "--json"], capsys)
    assert json.loads(out)["value"] == 6


def test_solve_certificates_reverify(k5_file, capsys):
    g = complete_graph(5)
    _, out, _ = run(["solve", k5_file, "--mode", "nz3", "--json"], capsys)
    doc = json.loads(out)
    arcs = tuple((t, h) for _, t, h in doc["orientation"])
    values = tuple(v for _, v in doc["flow"])
    assert verify_flow(g, FlowAssignment(Orientation(arcs), values), 3)
    _, out, _ = run(["solve", k5_file, "--mode", "beta", "--beta", "1,2,0,0,0", "--json"], capsys)
    doc = json.loads(out)
    arcs = tuple((t, h) for _, t, h in doc["orientation"])
    assert is_beta_orientation(g, Orientation(arcs), (1, 2, 0, 0, 0))


def test_solve_z3(k4_file, capsys):
    code, out, _ = run(["solve", k4_file, "--mode", "z3"], capsys)
    assert code == 0
    assert "z3_connected false" in out and "counterexample 0,0,0,0" in out


def test_gadget_outputs(k5_file, tmp_path, capsys):
    code, out, _ = run(["gadget", k5_file, "--op", "glue-k7"], capsys)
    glued = Multigraph.parse(out)
    assert code == 0 and glued.n == 35
    path = tmp_path / "k6.txt"
    path.write_text(complete_graph(6).add_edges([(0, 1)]).serialize())
    side = tmp_path / "side.json"
    code, out, _ = run(["gadget", str(path), "--op", "z0-3flow", "--sidecar", str(side)], capsys)
    assert code == 0 and Multigraph.parse(out).n == 7
    doc = json.loads(side.read_text())
    assert doc["beta"] == [0, 0, 2, 2, 2, 2, 1] and len(doc["pre_orientation"]) == 4
    code, out, _ = run(["gadget", str(path), "--op", "z0-z3", "--beta", "0,0,0,0,1,2", "--json"], capsys)
    assert json.loads(out)["beta"] == [0, 0, 2, 2, 0, 1, 1]


def test_verify_campaign_json_is_byte_identical(capsys):
    args = ["verify", "--theorem", "1.14", "--count", "4", "--seed", "7", "--json"]
    _, first, _ = run(args, capsys)
    _, second, _ = run(args, capsys)
    assert first == second
    doc = json.loads(first)
    assert doc["summary"]["instances"] == 4
    assert all("wall_time" not in r for r in doc["reports"])


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--theorem", "1.12", "--count", "3", "--csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("theorem,graph_hash") and len(lines) == 4


def test_verify_single_graph(k4_file, capsys):
    code, out, _ = run(["verify", "--theorem", "1.12", "--graph", k4_file, "--json", "--timing"], capsys)
    report = json.loads(out)["reports"][0]
    assert code == 0 and report["verdict"] == "not-applicable" and "wall_time" in report


def test_generate_and_controls(capsys):
    code, out, _ = run(["generate", "--n", "6", "--theorem", "1.14", "--seed", "2"], capsys)
    assert code == 0 and Multigraph.parse(out).n == 6
    code, out, _ = run(["controls"], capsys)
    assert code == 0 and all(line.endswith("PASS") for line in out.splitlines())


@pytest.mark.parametrize(
    "args",
    [
        [],
        ["solve"],
        ["solve", "x.txt", "--mode", "bogus"],
        ["verify", "--theorem", "9.9"],
        ["verify", "--theorem", "1.12", "--json", "--csv"],
    ],
)
def test_usage_errors_exit_1(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 1 and "usage" in err


def test_input_errors_exit_2(tmp_path, k4_file, capsys):
    assert run(["census", str(tmp_path / "missing.txt")], capsys)[0] == 2
    bad = tmp_path / "loop.txt"
    bad.write_text("3 1\n0 0\n")
    code, _, err = run(["census", str(bad)], capsys)
    assert code == 2 and "line 2" in err
    assert run(["solve", k4_file, "--mode", "beta", "--beta", "1,0,0,0"], capsys)[0] == 2
    assert run(["solve", k4_file, "--mode", "beta"], capsys)[0] == 2
    assert run(["gadget", k4_file, "--op", "z0-3flow"], capsys)[0] == 2


def test_resource_limit_exit_3(k4_file, capsys, monkeypatch):
    from zflow import limits

    monkeypatch.setattr(limits, "LIMITS", limits.Limits(census_max_n=3))
    assert run(["census", k4_file], capsys)[0] == 3


def test_help_lists_subcommands():
    text = build_parser().format_help()
    for name in ("census", "solve", "gadget", "verify", "generate", "controls"):
        assert name in text


def test_module_entry_point(k4_file):
    proc = subprocess.run(
        [sys.executable, "-m", "zflow", "solve", k4_file, "--mode", "mod3", "--json"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["exists"] is False


def test_env_limits_escape_hatch(k4_file):
    proc = subprocess.run(
        [sys.executable, "-m", "zflow", "census", k4_file],
        capture_output=True,
        text=True,
        env={"ZFLOW_LIMITS": "census_max_n=3", "PATH": ""},
    )
    assert proc.returncode == 3
