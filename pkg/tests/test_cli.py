import csv
import io
import json

import numpy as np
import pytest

from dkroots.cli import main
from dkroots.poly import RealPolynomial


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestSolve:
    def test_quadratic(self):
        code, text = run("solve", "--coeffs", "1,-5,6", "--bound", "lambda-max")
        assert code == 0
        d = json.loads(text)
        got = sorted(r["re"] for r in d["roots"])
        np.testing.assert_allclose(got, [2, 3], atol=1e-8)
        assert d["bound"] == "lambda-max"

    def test_non_monic(self, capsys):
        code, _ = run("solve", "--coeffs", "2,1", "--bound", "cauchy")
        assert code == 1
        assert "leading coefficient must be 1" in capsys.readouterr().err

    def test_imaginary_roots(self):
        code, text = run("solve", "--coeffs", "1,0,1", "--bound", "new-bound-1")
        roots = sorted((round(r["re"], 8), round(r["im"], 8)) for r in json.loads(text)["roots"])
        assert code == 0 and roots == [(0, -1), (0, 1)]

    def test_bad_token_named(self, capsys):
        code, _ = run("solve", "--coeffs", "1,abc,2")
        assert code == 1 and "abc" in capsys.readouterr().err

    def test_unknown_bound(self):
        assert run("solve", "--coeffs", "1,1", "--bound", "fujiwara")[0] == 1

    def test_unknown_flag(self):
        assert run("solve", "--coeffs", "1,1", "--frobnicate")[0] == 1

    def test_no_input(self):
        assert run("solve")[0] == 1

    def test_bad_tolerance(self):
        assert run("solve", "--coeffs", "1,1", "--eps1", "0")[0] == 1

    def test_file_input(self, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("# a comment\n1,-3,2\n1,0,1\n")
        code, text = run("solve", "--file", str(f))
        assert code == 0
        np.testing.assert_allclose(sorted(r["re"] for r in json.loads(text)["roots"]), [1, 2], atol=1e-8)

    def test_missing_file(self, tmp_path):
        assert run("solve", "--file", str(tmp_path / "none.txt"))[0] == 1

    def test_history_flag(self):
        d = json.loads(run("solve", "--coeffs", "1,-3,2", "--record-history")[1])
        assert len(d["history"]) == d["iterations"]

    @pytest.mark.parametrize(
        "coeffs", ["1,-5,6", "1,6,11,6", "1,0,1", "1,-2.5,0.75,4.1,-3", "1,14,3,-9,0.5,7,-2"]
    )
    def test_round_trip_residual(self, coeffs):
        d = json.loads(run("solve", "--coeffs", coeffs)[1])
        p = RealPolynomial(tuple(float(v) for v in coeffs.split(",")))
        roots = np.array([complex(r["re"], r["im"]) for r in d["roots"]])
        assert np.max(np.abs(p(roots))) <= 10 * d["max_residual"]

    def test_numerical_failure_exit_code(self, monkeypatch):
        import dkroots.cli as cli
        from dkroots.solver import DivergenceError

        def boom(*a, **k):
            raise DivergenceError("divergence detected")

        monkeypatch.setattr(cli, "solve", boom)
        assert run("solve", "--coeffs", "1,1")[0] == 2


class TestBounds:
    def rows(self, coeffs):
        code, text = run("bounds", "--coeffs", coeffs)
        assert code == 0
        return {r["method"]: r for r in csv.DictReader(io.StringIO(text))}

    def test_quadratic(self):
        rows = self.rows("1,-5,6")
        assert len(rows) == 5
        assert float(rows["cauchy"]["radius"]) == 7
        assert float(rows["aberth"]["radius"]) == 3.5 and rows["aberth"]["r0"] == "1"
        assert float(rows["new-bound-1"]["radius"]) == pytest.approx(7.4495, abs=1e-4)
        assert float(rows["lambda-max"]["radius"]) == pytest.approx(3, rel=1e-6)

    def test_binomial(self):
        assert float(self.rows("1,0,0,8")["new-bound-1"]["radius"]) == pytest.approx(2)

    def test_linear(self):
        assert float(self.rows("1,1")["lambda-max"]["radius"]) == 1


class TestExperiment:
    def test_radius_comparison(self, tmp_path):
        out = tmp_path / "r.csv"
        code, _ = run("experiment", "--scenario", "radius-comparison", "--count", "50", "--deg-range", "3:50",
                      "--coeff-range", "-15:15", "--seed", "42", "--out", str(out))
        assert code == 0
        assert len(list(csv.DictReader(out.open()))) == 250

    def test_wilkinson_to_stdout(self):
        code, text = run("experiment", "--scenario", "wilkinson", "--n-list", "5,10,20", "--seed", "1")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and len(rows) == 15
        assert {r["bound"] for r in rows} == {"cauchy", "lagrange", "aberth", "new-bound-1", "lambda-max"}

    def test_perturbed(self):
        code, text = run("experiment", "--scenario", "wilkinson-perturbed", "--n-list", "20",
                         "--perturb", "1.1920928955078125e-7", "--bounds", "new-bound-1,lambda-max")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert code == 0 and len(rows) == 2
        assert rows[0]["scenario"] == "wilkinson-perturbed:eps=1.1920928955078125e-07:k=19"

    def test_unknown_scenario(self):
        assert run("experiment", "--scenario", "nope")[0] == 1

    def test_bad_perturb_power(self):
        assert run("experiment", "--scenario", "wilkinson-perturbed", "--n-list", "5", "--perturb-power", "5")[0] == 1

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("DK_SEED", "11")
        rows = list(csv.DictReader(io.StringIO(run("experiment", "--scenario", "random", "--n-list", "4")[1])))
        assert rows[0]["seed"] == "11"

    def test_bad_environment_seed(self, monkeypatch):
        monkeypatch.setenv("DK_SEED", "eleven")
        assert run("experiment", "--scenario", "random", "--n-list", "4")[0] == 1


class TestPlot:
    @pytest.fixture
    def radius_csv(self, tmp_path):
        path = tmp_path / "r.csv"
        run("experiment", "--scenario", "radius-comparison", "--seed", "42", "--out", str(path))
        return path

    def test_radius_polylines(self, radius_csv, tmp_path):
        svg = tmp_path / "r.svg"
        assert run("plot", "--in", str(radius_csv), "--kind", "radius", "--out", str(svg))[0] == 0
        text = svg.read_text()
        assert text.count("<polyline") == 5
        assert text.startswith("<svg") and "degree" in text and "radius" in text

    def test_byte_identical(self, radius_csv, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run("plot", "--in", str(radius_csv), "--kind", "radius", "--out", str(a))
        run("plot", "--in", str(radius_csv), "--kind", "radius", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_header_only(self, tmp_path, capsys):
        path = tmp_path / "e.csv"
        path.write_text("scenario,degree,bound,radius,iterations,status,mean_error,max_residual,seed,wall_time_ms\n")
        assert run("plot", "--in", str(path), "--kind", "radius", "--out", str(tmp_path / "x.svg"))[0] == 1
        assert "no data rows" in capsys.readouterr().err

    def test_missing_column(self, tmp_path, capsys):
        path = tmp_path / "e.csv"
        path.write_text("degree,bound\n3,cauchy\n")
        assert run("plot", "--in", str(path), "--kind", "radius", "--out", str(tmp_path / "x.svg"))[0] == 1
        assert "radius" in capsys.readouterr().err

    def test_convergence(self, tmp_path):
        hist = tmp_path / "h.csv"
        run("experiment", "--scenario", "wilkinson", "--n-list", "5,10", "--bounds", "lambda-max",
            "--history", str(hist), "--out", str(tmp_path / "w.csv"))
        svg = tmp_path / "c.svg"
        assert run("plot", "--in", str(hist), "--kind", "convergence", "--out", str(svg))[0] == 0
        assert svg.read_text().count("<polyline") == 2

    def test_convergence_needs_history_columns(self, radius_csv, tmp_path):
        assert run("plot", "--in", str(radius_csv), "--kind", "convergence", "--out", str(tmp_path / "x.svg"))[0] == 1
