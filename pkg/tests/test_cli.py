import json

import pytest

from dpcst.cli import main
from dpcst.sim import EpsilonRecord, read_trace

TWO_PENAL = "nodes 1 2\nroot 1\nprize 2 3\nedge 1 2 10\n"
TWO_MERGE = "nodes 1 2\nroot 1\nprize 2 5\nedge 1 2 2\n"


@pytest.fixture
def two_penal(tmp_path):
    p = tmp_path / "two.pcst"
    p.write_text(TWO_PENAL)
    return str(p)


def test_solve_exact(two_penal, capsys):
    assert main(["solve", "--alg", "exact", two_penal]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["objective"] == "3"
    assert out["penalty_nodes"] == [2]


def test_solve_dpcst_writes_trace(two_penal, tmp_path, capsys):
    trace_path = tmp_path / "t.jsonl"
    code = main(
        ["solve", "--alg", "dpcst", "--schedule", "seeded:7", "--trace", str(trace_path), two_penal]
    )
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["objective"] == "3"
    trace = read_trace(str(trace_path))
    assert any(isinstance(r, EpsilonRecord) for r in trace)


def test_solve_gw_matches(two_penal, capsys):
    assert main(["solve", "--alg", "gw", two_penal]) == 0
    assert json.loads(capsys.readouterr().out)["objective"] == "3"


def test_solve_generated_instance(capsys):
    assert main(["solve", "--alg", "exact", "--gen", "n=5,m=7,seed=3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert "objective" in out


def test_identical_invocations_identical_output(capsys, tmp_path):
    p = tmp_path / "g.pcst"
    assert main(["gen", "--n", "6", "--m", "8", "--seed", "5"]) == 0
    text1 = capsys.readouterr().out
    assert main(["gen", "--n", "6", "--m", "8", "--seed", "5"]) == 0
    assert capsys.readouterr().out == text1
    p.write_text(text1)
    assert main(["solve", "--alg", "dpcst", "--json", str(p)]) == 0
    o1 = capsys.readouterr().out
    assert main(["solve", "--alg", "dpcst", "--json", str(p)]) == 0
    assert capsys.readouterr().out == o1


def test_verify_clean_run_exits_zero(two_penal, tmp_path, capsys):
    trace_path = tmp_path / "t.jsonl"
    main(["solve", "--alg", "dpcst", "--trace", str(trace_path), two_penal])
    capsys.readouterr()
    assert main(["verify", two_penal, str(trace_path)]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert {l["check"] for l in lines} == {"edge_packing", "penalty_packing", "ratio", "bounds"}
    assert all(l["status"] in ("pass", "partial") for l in lines)


def test_verify_corrupted_trace_exits_three(two_penal, tmp_path, capsys):
    trace_path = tmp_path / "t.jsonl"
    main(["solve", "--alg", "dpcst", "--trace", str(trace_path), two_penal])
    capsys.readouterr()
    doctored = []
    for line in trace_path.read_text().splitlines():
        rec = json.loads(line)
        if rec["kind"] == "epsilon" and rec["chosen"] == "deactivate":
            rec["eps2"] = "4"  # was 3
        doctored.append(json.dumps(rec))
    trace_path.write_text("\n".join(doctored) + "\n")
    assert main(["verify", two_penal, str(trace_path)]) == 3
    assert "divergence" in capsys.readouterr().out


def test_verify_bound_violation_exits_two(two_penal, tmp_path, capsys):
    trace_path = tmp_path / "t.jsonl"
    main(["solve", "--alg", "dpcst", "--trace", str(trace_path), two_penal])
    capsys.readouterr()
    lines = trace_path.read_text().splitlines()
    last = json.loads(lines[-1])
    extra = []
    for i in range(30):
        extra.append(
            json.dumps(
                {"kind": "round", "step": last["step"] + 1 + i, "leader": 1, "round": 100 + i}
            )
        )
    trace_path.write_text("\n".join(lines + extra) + "\n")
    assert main(["verify", two_penal, str(trace_path)]) == 2
    out = capsys.readouterr().out
    assert '"status": "violation"' in out


def test_render_dot(two_penal, tmp_path, capsys):
    sol_path = tmp_path / "sol.json"
    main(["solve", "--alg", "exact", two_penal])
    sol_path.write_text(capsys.readouterr().out)
    assert main(["render", two_penal, str(sol_path)]) == 0
    dot = capsys.readouterr().out
    assert dot.startswith("graph pcst {")
    assert "doublecircle" in dot  # the root
    assert "style=dashed" in dot  # the penalized node


def test_render_single_node(tmp_path, capsys):
    p = tmp_path / "one.pcst"
    p.write_text("nodes 1\nroot 1\n")
    main(["solve", "--alg", "exact", str(p)])
    sol_path = tmp_path / "sol.json"
    sol_path.write_text(capsys.readouterr().out)
    assert main(["render", str(p), str(sol_path)]) == 0
    assert "doublecircle" in capsys.readouterr().out


def test_render_mismatch_is_usage_error(two_penal, tmp_path, capsys):
    sol_path = tmp_path / "sol.json"
    sol_path.write_text(json.dumps({"objective": "99", "branch_edges": [], "penalty_nodes": [2]}))
    assert main(["render", two_penal, str(sol_path)]) == 1


def test_missing_file_exits_one(capsys):
    assert main(["solve", "--alg", "exact", "/nonexistent.pcst"]) == 1
