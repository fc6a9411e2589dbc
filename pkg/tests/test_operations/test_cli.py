import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from nbg_toolkit.cli import main
from nbg_toolkit.game_core import MassDistribution, costVector, loadGame

P6_EQUILIBRIUM = "15/76,11/76,12/76,12/76,11/76,15/76"


@pytest.fixture
def runner():
    return CliRunner()


#region verify
@pytest.mark.parametrize("dist, code, verdict", [
    ("3/4,1/4", 0, "equilibrium"),
    ("0.75 0.25", 0, "equilibrium"),
    ("1/2,1/2", 1, "not an equilibrium, worst gap 1/2"),
], ids=["interior", "decimal", "unbalanced"])
def test_verify_dilemma(runner, dist, code, verdict):
    result = runner.invoke(main, ["verify", "builtin:dilemma", "--dist", dist])
    assert result.exit_code == code
    assert verdict in result.stdout


def test_verify_names_the_witness(runner):
    result = runner.invoke(main, ["verify", "builtin:dilemma", "--dist", "1/2,1/2"])
    assert "vertex 1 pays more than vertex 2" in result.stdout


def test_verify_distribution_file(runner, tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(P6_EQUILIBRIUM.split(",")))
    result = runner.invoke(main, ["verify", "path6_quarter", str(path), "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["equilibrium"] is True
    assert payload["common_cost"] == "71/304"
    assert payload["class"] == "alpha-uniform"


def test_verify_strongness(runner):
    result = runner.invoke(main, ["verify", "builtin:directed-triangle", "--dist", "1/3,1/3,1/3", "--delta", "1/100"])
    assert result.exit_code == 1
    assert "equilibrium" in result.stdout
    assert "delta = 1/100: refuted (exact), moving 1/100 from 1 to 2 improves" in result.stdout


@pytest.mark.parametrize("args, message", [
    (["builtin:dilemma", "--dist", "1"], "distribution has 1 masses"),
    (["builtin:dilemma"], "give a distribution"),
    (["builtin:dilemma", "--dist", "1/2,x"], "not a number"),
    (["builtin:nothing", "--dist", "1"], "unknown builtin game"),
    (["missing_game", "--dist", "1"], "no game or digraph file"),
    (["directed_triangle", "--dist", "1,0,0"], "is a digraph file"),
    (["builtin:dilemma", "--dist", "1,0", "--delta=-1"], "delta"),
], ids=["length", "no_dist", "bad_mass", "bad_builtin", "missing_file", "digraph", "negative_delta"])
def test_verify_input_errors(runner, args, message):
    result = runner.invoke(main, ["verify"] + args)
    assert result.exit_code == 2
    assert message in result.output


def test_truncated_game_file(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2,\n "r": 1, "costs": [')
    result = runner.invoke(main, ["verify", str(path), "--dist", "1/2,1/2"])
    assert result.exit_code == 2
    assert "malformed JSON at line 2" in result.output
#endregion


#region solve and metrics
def test_solve_uniform_cost(runner):
    result = runner.invoke(main, ["solve", "path6_quarter", "--method", "uniform-cost"])
    assert result.exit_code == 0
    assert "15/76" in result.stdout
    assert "11/76" in result.stdout


def test_solve_supports_json(runner):
    result = runner.invoke(main, ["solve", "anarchy_alpha2", "--format", "json"])
    assert result.exit_code == 0
    equilibria = json.loads(result.stdout)["equilibria"]
    assert len(equilibria) == 3
    assert all(e["verified"] for e in equilibria)
    assert sorted(str(e["masses"][0]) for e in equilibria) == ["0", "1", "1/2"]


def test_solve_potential(runner):
    result = runner.invoke(main, ["solve", "braess", "--method", "potential", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "#,kind,masses,cost,condition,verified"
    assert len(lines) == 2
    assert lines[1].endswith("True")


def test_solve_dynamics(runner):
    result = runner.invoke(main, ["solve", "builtin:dilemma", "--method", "dynamics", "--format", "json"])
    assert result.exit_code == 0
    equilibria = json.loads(result.stdout)["equilibria"]
    assert len(equilibria) == 1
    assert equilibria[0]["method"] == "dynamics"
    assert equilibria[0]["verified"]


@pytest.mark.parametrize("args", [
    ["builtin:directed-triangle", "--method", "potential"],
    ["builtin:dilemma", "--method", "supports"],
    ["path6_quarter", "--n-max", "4"],
], ids=["asymmetric_potential", "general_supports", "too_large"])
def test_solve_rejects_inapplicable_methods(runner, args):
    result = runner.invoke(main, ["solve"] + args)
    assert result.exit_code == 2
    assert "Error" in result.output


def test_metrics_anarchy(runner):
    result = runner.invoke(main, ["metrics", "anarchy_alpha9", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["poa_u"]["value"] == pytest.approx(5.0)
    assert payload["pos_u"]["value"] == pytest.approx(1.0)


def test_metrics_table(runner):
    result = runner.invoke(main, ["metrics", "stability_gap"])
    assert result.exit_code == 0
    assert "PoS utilitarian" in result.stdout
    assert "101/51" in result.stdout


def test_metrics_rejects_general_games(runner):
    result = runner.invoke(main, ["metrics", "builtin:dilemma"])
    assert result.exit_code == 2
#endregion


#region family and scans
def test_family_saves_to_data_dir(runner, dataDir):
    result = runner.invoke(main, ["family", "path", "-n", "6", "--alpha", "1/4"])
    assert result.exit_code == 0
    path = dataDir / "path6_alpha1_4.json"
    assert result.stdout.strip() == str(path)
    # C_1 at the uniform point is 1/6 + (1/4)(1/6)
    assert costVector(loadGame(path), MassDistribution.uniform(6, 1))[0] == Fraction(5, 24)

    # saved games resolve by name
    result = runner.invoke(main, ["solve", "path6_alpha1_4", "--method", "uniform-cost"])
    assert result.exit_code == 0
    assert "15/76" in result.stdout


def test_family_bipartite_name_and_output(runner, dataDir, tmp_path):
    result = runner.invoke(main, ["family", "complete_bipartite", "-p", "2", "-q", "2", "--alpha", "1/2"])
    assert result.exit_code == 0
    assert (dataDir / "complete_bipartite2x2_alpha1_2.json").is_file()
    target = tmp_path / "mine.json"
    result = runner.invoke(main, ["family", "star", "-n", "5", "--alpha", "2", "--output", str(target)])
    assert result.exit_code == 0
    assert loadGame(target).n == 5


@pytest.mark.parametrize("args", [
    ["path", "--alpha", "1/4"],
    ["path", "-n", "3", "--alpha", "x"],
    ["cycle", "-n", "2", "--alpha", "1"],
], ids=["missing_n", "bad_alpha", "short_cycle"])
def test_family_errors(runner, dataDir, args):
    result = runner.invoke(main, ["family"] + args)
    assert result.exit_code == 2


def test_scan_without_counterexamples(runner):
    result = runner.invoke(main, ["scan-det", "path", "--n-to", "6", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "n,alpha,det,unique,nonneg"
    assert len(lines) == 1 + 5 * 9


def test_scan_reports_counterexamples(runner):
    result = runner.invoke(main, ["scan-det", "path", "--n-from", "3", "--n-to", "3", "--alphas", "3/4"])
    assert result.exit_code == 1
    assert "counterexample candidates" in result.stderr
#endregion


#region dynamics, reproduce, curves, kernels
def test_dynamics_converges(runner):
    result = runner.invoke(main, ["dynamics", "builtin:dilemma", "--start", "0.8,0.2", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["converged"] is True
    assert payload["final"][0] == pytest.approx(1.0, abs=1e-6)


def test_dynamics_trace(runner):
    result = runner.invoke(main, ["dynamics", "builtin:dilemma", "--trace", "--max-iters", "5"])
    assert result.exit_code == 0
    # header, start and five moves
    assert len(result.stdout.strip().splitlines()) == 1 + 6 + 1
    assert "stopped after 5 iterations" in result.stdout


@pytest.mark.parametrize("step", ["2", "abc", "0"], ids=["too_big", "not_number", "zero"])
def test_dynamics_bad_step(runner, step):
    result = runner.invoke(main, ["dynamics", "builtin:dilemma", "--step", step])
    assert result.exit_code == 2


def test_reproduce_section(runner):
    result = runner.invoke(main, ["reproduce", "--section", "braess"])
    assert result.exit_code == 0
    assert result.stdout.strip().endswith("passed, 0 failed")
    assert "FAIL" not in result.stdout


def test_reproduce_numbered_section(runner):
    result = runner.invoke(main, ["reproduce", "--section", "4.1", "--format", "json"])
    assert result.exit_code == 0
    checks = json.loads(result.stdout)["checks"]
    assert {c["section"] for c in checks} == {"paths"}
    assert any(c["check"] == "P6 alpha = 1/4 equilibrium" and c["computed"] == "(15/76, 11/76, 3/19, 3/19, 11/76, 15/76)"
               for c in checks)
    assert all(c["status"] == "PASS" for c in checks)


def test_reproduce_needs_a_choice(runner):
    result = runner.invoke(main, ["reproduce"])
    assert result.exit_code == 2
    assert "--section" in result.output


def test_reproduce_reports_failures(runner, monkeypatch):
    import nbg_toolkit.worked_examples as we
    from nbg_toolkit.worked_examples import Check

    monkeypatch.setitem(we.SECTIONS, "braess", lambda: [Check("braess", "forced", "1", "2", False)])
    result = runner.invoke(main, ["reproduce", "--section", "braess"])
    assert result.exit_code == 1
    assert "0 passed, 1 failed" in result.stdout


def test_curves(runner, tmp_path):
    result = runner.invoke(main, ["curves", "braess", "--points", "5"])
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "x1,C1,C2,Phi"
    assert len(lines) == 6
    target = tmp_path / "curves.csv"
    result = runner.invoke(main, ["curves", "builtin:dilemma", "--output", str(target)])
    assert result.exit_code == 0
    assert target.read_text().splitlines()[0] == "x1,C1,C2"


def test_curves_need_two_vertices(runner):
    result = runner.invoke(main, ["curves", "path6_quarter"])
    assert result.exit_code == 2


@pytest.mark.parametrize("digraph, kernels", [
    ("directed_triangle", []),
    ("out_star", [[1]]),
], ids=["triangle", "out_star"])
def test_kernels(runner, digraph, kernels):
    result = runner.invoke(main, ["kernels", digraph, "--alpha", "3", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["kernels"] == kernels
    assert payload["match"] is True


def test_kernels_table(runner):
    result = runner.invoke(main, ["kernels", "directed_triangle"])
    assert result.exit_code == 0
    assert "(nothing found)" in result.stdout
    assert "strong-equilibrium supports match the kernels" in result.stdout


def test_kernels_bad_file(runner, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n1 4\n")
    result = runner.invoke(main, ["kernels", str(path)])
    assert result.exit_code == 2
#endregion
