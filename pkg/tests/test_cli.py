import json
import subprocess
import sys

import pytest

from fiberfan.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


SQUARE = {"ambient_dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}
FIRST = {"matrix": [[1, 0]]}


class TestBuild:
    def test_hypersimplex(self, tmp_path, capsys):
        out = tmp_path / "d4.json"
        code, _, _ = run(["build", "hypersimplex", "4", "--out", str(out)], capsys)
        assert code == EXIT_OK
        obj = json.loads(out.read_text())
        assert len(obj["vertices"]) == 6 and obj["ambient_dim"] == 4

    def test_gt3(self, tmp_path, capsys):
        out = tmp_path / "g3.json"
        assert run(["build", "gt", "--n", "3", "--out", str(out)], capsys)[0] == EXIT_OK
        obj = json.loads(out.read_text())
        assert obj["ambient_dim"] == 3 and len(obj["vertices"]) == 3

    def test_gt_pattern_segment(self, tmp_path, capsys):
        out = tmp_path / "p.json"
        assert run(["build", "gt-pattern", "--lambda", "1,0", "--out", str(out)], capsys)[0] == EXIT_OK
        assert json.loads(out.read_text())["vertices"] == [["0"], ["1"]]

    @pytest.mark.parametrize("argv", [
        ["build", "weight-polytope", "--lambda", "1,1,0,0"],
        ["build", "phi", "4"],
        ["build", "parity-lattice", "5"],
        ["build", "pi-lambda", "--lambda", "2,1,0"],
        ["build", "gt-string", "--lambda", "2,1,0"],
    ])
    def test_other_objects(self, argv, capsys):
        code, out, _ = run(argv + ["--format", "json"], capsys)
        assert code == EXIT_OK
        assert json.loads(out)["summary"]["result"]

    @pytest.mark.parametrize("argv", [
        ["build", "octagon", "4"],
        ["build", "hypersimplex"],
        ["build", "hypersimplex", "2"],
        ["build", "gt-pattern", "--lambda", "0,1"],
        ["build", "gt-pattern", "--lambda", "a,b"],
        ["build", "pi-lambda", "--lambda", "1,0,0", "--word", "1,1,2"],
    ])
    def test_usage_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == EXIT_USAGE and err

    def test_not_reduced_message(self, capsys):
        code, _, err = run(["build", "pi-lambda", "--lambda", "1,0,0", "--word", "1,1,2"], capsys)
        assert code == EXIT_USAGE and "not a reduced word" in err

    def test_no_overwrite(self, tmp_path, capsys):
        out = tmp_path / "x.json"
        out.write_text("keep")
        code, _, err = run(["build", "hypersimplex", "4", "--out", str(out)], capsys)
        assert code == EXIT_USAGE and "--force" in err and out.read_text() == "keep"
        assert run(["build", "hypersimplex", "4", "--out", str(out), "--force"], capsys)[0] == EXIT_OK
        assert json.loads(out.read_text())["ambient_dim"] == 4

    def test_argparse_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE


class TestFiberPolytope:
    def test_square(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, text, _ = run(["fiber-polytope", write(tmp_path / "p.json", SQUARE),
                             write(tmp_path / "pi.json", FIRST), "--out", str(out)], capsys)
        assert code == EXIT_OK
        obj = json.loads(out.read_text())
        assert obj["sigma"]["vertices"] == [["0"], ["1"]] and obj["agreement"] is True

    def test_gt4(self, tmp_path, capsys):
        g = tmp_path / "g.json"
        pi = tmp_path / "phi.json"
        assert run(["build", "gt", "4", "--out", str(g)], capsys)[0] == EXIT_OK
        assert run(["build", "phi", "4", "--out", str(pi)], capsys)[0] == EXIT_OK
        code, out, _ = run(["fiber-polytope", str(g), str(pi), "--format", "json"], capsys)
        rep = json.loads(out)
        assert code == EXIT_OK and rep["summary"]["sigma_dim"] == 1 and rep["summary"]["agreement"]

    def test_dimension_mismatch(self, tmp_path, capsys):
        code, _, err = run(["fiber-polytope", write(tmp_path / "p.json", SQUARE),
                            write(tmp_path / "pi.json", {"matrix": [[1, 0, 0]]})], capsys)
        assert code == EXIT_USAGE and "dimension mismatch" in err

    def test_unbounded(self, tmp_path, capsys):
        P = {"ambient_dim": 2, "inequalities": [["-1", "0", "0"], ["0", "-1", "0"]]}
        code, _, err = run(["fiber-polytope", write(tmp_path / "p.json", P),
                            write(tmp_path / "pi.json", FIRST)], capsys)
        assert code == EXIT_FAIL and "Unbounded" in err

    def test_empty(self, tmp_path, capsys):
        P = {"ambient_dim": 1, "inequalities": [["1", "0"], ["-1", "-1"]]}
        code, _, err = run(["fiber-polytope", write(tmp_path / "p.json", P),
                            write(tmp_path / "pi.json", {"matrix": [[1]]})], capsys)
        assert code == EXIT_FAIL and "Empty" in err

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(["fiber-polytope", str(tmp_path / "nope.json"), str(tmp_path / "nope2.json")], capsys)
        assert code == EXIT_USAGE and "cannot read" in err


class TestNbar:
    def test_n3(self, capsys):
        code, out, _ = run(["nbar", "3"], capsys)
        assert code == EXIT_OK and "sigma_dim: 0" in out

    def test_n4(self, tmp_path, capsys):
        out = tmp_path / "n4.json"
        code, text, _ = run(["nbar", "--n", "4", "--out", str(out)], capsys)
        assert code == EXIT_OK
        assert "fan_f_vector: [1, 2]" in text and "chambers: 8" in text and "agreement: true" in text
        obj = json.loads(out.read_text())
        assert obj["fan_from_sigma"]["rays"] == [[-1], [1]]

    def test_budget(self, capsys):
        code, out, _ = run(["nbar", "5", "--budget-seconds", "0.01", "--format", "json"], capsys)
        assert code == EXIT_BUDGET
        assert json.loads(out)["complete"] is False


class TestVerify:
    def test_trivial(self, capsys):
        code, out, _ = run(["verify", "3", "1"], capsys)
        assert code == EXIT_OK and "FAIL" not in out

    def test_4_2(self, capsys):
        code, out, _ = run(["verify", "--n", "4", "--k", "2", "--format", "json"], capsys)
        rep = json.loads(out)
        assert code == EXIT_OK and rep["complete"]
        by_name = {c["name"]: c for c in rep["checks"]}
        assert by_name["ehrhart(4,1) = weyl_dim((1,1),4)"]["witness"] == {"count": 6, "oracle": 6}
        assert by_name["ehrhart(4,2) = weyl_dim((2,2),4)"]["witness"] == {"count": 20, "oracle": 20}
        assert all(c["passed"] for c in rep["checks"])

    def test_no_parity_fails_with_witness(self, capsys):
        code, out, _ = run(["verify", "4", "2", "--no-parity", "--format", "json"], capsys)
        assert code == EXIT_FAIL
        failed = {c["name"]: c["witness"] for c in json.loads(out)["checks"] if not c["passed"]}
        w = failed["ehrhart(4,2) = weyl_dim((2,2),4)"]
        assert w["count"] == 21 and w["oracle"] == 20 and w["non_parity_points"] == [[1, 1, 1, 1, 1]]

    def test_bad_bounds(self, capsys):
        assert run(["verify", "2", "1"], capsys)[0] == EXIT_USAGE
        assert run(["verify"], capsys)[0] == EXIT_USAGE

    def test_byte_stable(self, capsys):
        first = run(["verify", "4", "1", "--format", "json"], capsys)[1]
        second = run(["verify", "4", "1", "--format", "json"], capsys)[1]
        assert first == second
        assert "timing" not in first

    def test_timing_opt_in(self, capsys):
        out = run(["verify", "3", "1", "--format", "json", "--timing"], capsys)[1]
        assert "timing_seconds" in json.loads(out)

    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        assert run(["verify", "3", "1", "--out", str(out)], capsys)[0] == EXIT_OK
        assert json.loads(out.read_text())["command"] == "verify"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "fiberfan", "build", "hypersimplex", "3", "--format", "json"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert len(json.loads(r.stdout)["summary"]["result"]["vertices"]) == 3
