import csv
import json

import numpy as np
import pytest

from gammainterp.cli import main, map_from_dict
from gammainterp.problem import InterpProblem


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def fixture(tmp_path, name, *params):
    path = tmp_path / f"{name}.json"
    args = ["examples", name, "--out", path]
    for p in params:
        args += ["--param", p]
    assert main([str(a) for a in args]) == 0
    return path


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


class TestExamples:
    def test_unknown_name(self, capsys):
        code, _, err = run(capsys, "examples", "nope")
        assert code == 64 and "unknown example" in err

    def test_aligned_fixture(self, tmp_path):
        data = json.loads(fixture(tmp_path, "ex52_2", "r=0.5").read_text())
        assert data["version"] == "gamma-interp/1"
        h = map_from_dict(data["reference_map"])
        lam = 0.25 - 0.1j
        s, p = h(lam)
        assert abs(s - (1 * lam ** 2) / (1 + 0.5 * lam ** 3)) < 1e-14
        assert abs(p - lam * (lam ** 3 + 0.5) / (1 + 0.5 * lam ** 3)) < 1e-14

    def test_caddy_four_royal_numerator(self, tmp_path):
        data = json.loads(fixture(tmp_path, "excaddy4", "alpha=0.3333333333333333").read_text())
        h = map_from_dict(data["reference_map"])
        lam = np.array([0.2, -0.5j, 0.7 + 0.1j])
        s, p = h(lam)
        assert np.max(np.abs(s ** 2 - 4 * p - (lam - 1) ** 6 / (3 - lam) ** 2)) < 1e-12

    def test_surprise_fixture(self, tmp_path):
        data = json.loads(fixture(tmp_path, "surprise", "a=0.5", "c=1").read_text())
        h = map_from_dict(data["reference_map"])
        lam = 0.3 + 0.2j
        s, p = h(lam)
        assert abs(s - lam / (1 - 0.5 * lam)) < 1e-14
        assert abs(p - lam * (lam - 0.5) / (1 - 0.5 * lam)) < 1e-14

    def test_custom_nodes_and_map_out(self, tmp_path):
        out, mp = tmp_path / "f.json", tmp_path / "m.json"
        assert main(["examples", "ex52_3", "--param", "zeros=0.3;0.1j", "--nodes", "0.1,0.2j,-0.3",
                     "--out", str(out), "--map-out", str(mp)]) == 0
        prob = InterpProblem.load(out)
        assert np.allclose(prob.nodes, [0.1, 0.2j, -0.3])
        assert json.loads(mp.read_text())["version"] == "gamma-map/1"


class TestCheck:
    def test_aligned(self, tmp_path, capsys):
        code, out, _ = run(capsys, "check", fixture(tmp_path, "ex52_2"))
        assert code == 0
        assert json.loads(out)["status"] == "holds_extremally_active"

    def test_constant_targets(self, tmp_path, capsys):
        path = write(tmp_path, "c.json", InterpProblem([0.3, -0.2, 0.4j], [0.5] * 3, [0.1] * 3).to_dict())
        code, out, _ = run(capsys, "check", path)
        assert code == 0 and json.loads(out)["status"] == "holds"

    def test_infeasible(self, tmp_path, capsys):
        path = write(tmp_path, "bad.json", InterpProblem([0, 0.1, 0.2], [0] * 3, [0, 0.9, -0.9]).to_dict())
        code, out, _ = run(capsys, "check", path, "--plot", tmp_path / "bad")
        assert code == 2 and json.loads(out)["status"] == "fails"
        assert header(tmp_path / "bad_pencil.csv") == ["theta", "min_eigenvalue"]

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "x.json"
        path.write_text("{not json")
        assert run(capsys, "check", path)[0] == 64

    def test_wrong_version(self, tmp_path, capsys):
        assert run(capsys, "check", write(tmp_path, "v.json", {"version": "other"}))[0] == 64

    def test_bad_override(self, tmp_path, capsys):
        assert run(capsys, "check", fixture(tmp_path, "ex52_2"), "--tol", "extremal")[0] == 64

    def test_missing_arguments(self, capsys):
        assert run(capsys, "check")[0] == 64


class TestSolve:
    def test_aligned_with_plots(self, tmp_path, capsys):
        prefix = tmp_path / "plot"
        out = tmp_path / "rep.json"
        code, _, _ = run(capsys, "solve", fixture(tmp_path, "ex52_2"), "--plot", prefix, "--out", out)
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["status"] == "solved" and rep["classification"] == "aligned"
        assert header(f"{prefix}_boundary.csv") == ["theta", "abs_s"]
        assert header(f"{prefix}_royal.csv") == ["node_re", "node_im", "multiplicity", "on_circle",
                                                 "target_re", "target_im"]
        with open(f"{prefix}_royal.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert sum(int(r["on_circle"]) for r in rows) == 3

    def test_deterministic(self, tmp_path, capsys):
        path = fixture(tmp_path, "ex52_2")
        _, first, _ = run(capsys, "solve", path, "--seed", 3)
        _, second, _ = run(capsys, "solve", path, "--seed", 3)
        assert first == second

    def test_royal(self, tmp_path, capsys):
        code, out, _ = run(capsys, "solve", fixture(tmp_path, "ex52_3"))
        assert code == 0 and json.loads(out)["classification"] == "royal_variety_case"

    def test_caddy_three(self, tmp_path, capsys):
        code, out, _ = run(capsys, "solve", fixture(tmp_path, "excaddy3"))
        assert code == 4 and json.loads(out)["status"] == "inconclusive"

    def test_unsolvable(self, tmp_path, capsys):
        path = write(tmp_path, "bad.json", InterpProblem([0, 0.1, 0.2], [0] * 3, [0, 0.9, -0.9]).to_dict())
        assert run(capsys, "solve", path)[0] == 3


class TestClassifyAndVerify:
    def test_aligned(self, tmp_path, capsys):
        mp = tmp_path / "m.json"
        main(["examples", "ex52_2", "--out", str(tmp_path / "f.json"), "--map-out", str(mp)])
        code, out, _ = run(capsys, "classify", mp)
        rep = json.loads(out)
        assert code == 0 and rep["kind"] == "aligned"
        assert len(rep["table"]) == 3 and set(rep["table"][0]) == {"node", "target"}

    @pytest.mark.parametrize("name,kind", [("excaddy2", "caddywhompus"), ("excaddy3", "neither")])
    def test_other_kinds(self, tmp_path, capsys, name, kind):
        mp = tmp_path / "m.json"
        params = ["--param", "alpha=0.4"] if name == "excaddy3" else []
        main(["examples", name, *params, "--out", str(tmp_path / "f.json"), "--map-out", str(mp)])
        code, out, _ = run(capsys, "classify", mp)
        assert code == 0 and json.loads(out)["kind"] == kind

    def test_superficial(self, tmp_path, capsys):
        # (lambda + 1, lambda)
        mp = write(tmp_path, "sup.json", {"version": "gamma-map/1",
                                          "s": {"num": [[1, 0], [1, 0]], "den": [[1, 0]]},
                                          "p": {"num": [[0, 0], [1, 0]], "den": [[1, 0]]}})
        assert run(capsys, "classify", mp)[0] == 5

    def test_verify(self, tmp_path, capsys):
        mp = tmp_path / "m.json"
        prob = tmp_path / "f.json"
        main(["examples", "ex52_2", "--out", str(prob), "--map-out", str(mp)])
        code, out, _ = run(capsys, "verify", prob, mp)
        assert code == 0 and json.loads(out)["passed"]
        other = fixture(tmp_path, "ex52_1")
        assert run(capsys, "verify", other, mp)[0] == 1


class TestDiamond:
    def test_from_problem(self, tmp_path, capsys):
        code, out, _ = run(capsys, "diamond", fixture(tmp_path, "ex52_2"))
        rep = json.loads(out)
        assert code == 0
        assert rep["feasibility"]["feasible"] and rep["p"] is not None

    def test_from_diamond_file(self, tmp_path, capsys):
        _, out, _ = run(capsys, "diamond", fixture(tmp_path, "ex52_2"))
        dfile = write(tmp_path, "d.json", json.loads(out)["problem"])
        code, out2, _ = run(capsys, "diamond", dfile)
        assert code == 0 and json.loads(out2)["feasibility"]["feasible"]


def test_report_reparses_identically(tmp_path, capsys):
    _, out, _ = run(capsys, "check", fixture(tmp_path, "ex52_2"))
    data = json.loads(out)
    assert json.loads(json.dumps(data)) == data
    prob = InterpProblem.load(fixture(tmp_path, "ex52_2"))
    again = InterpProblem.from_dict(json.loads(prob.dumps()))
    assert np.array_equal(prob.s, again.s) and np.array_equal(prob.p, again.p)
