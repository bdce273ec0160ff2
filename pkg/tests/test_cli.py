import csv
import io
import json
import math

import pytest

import pciclone.cli
from pciclone.cli import SWEEP_HEADER, main
from pciclone.errors import ConvergenceError


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


class TestReport:
    def test_json_keys_and_values(self, capsys):
        code, out = run_cli(capsys, "report", 1, 1, 3)
        assert code == 0
        doc = json.loads(out)
        assert list(doc) == [
            "gain",
            "n_th_clone",
            "n_th_anticlone",
            "var_clone",
            "var_anticlone",
            "f_clone",
            "f_anticlone",
            "baseline_var",
            "baseline_f",
            "baseline_f_anticlone",
            "measurement_limit_noise",
        ]
        assert doc["f_clone"] == pytest.approx(9 / 10, rel=1e-12)
        assert doc["baseline_f"] == pytest.approx(6 / 7, rel=1e-12)
        assert doc["measurement_limit_noise"] == pytest.approx(0.25, rel=1e-12)

    def test_headline_numbers(self, capsys):
        code, out = run_cli(capsys, "report", 1, 1, 2)
        doc = json.loads(out)
        assert doc["var_clone"] == pytest.approx(0.5625, abs=1e-15)
        assert doc["f_clone"] == pytest.approx(16 / 17, rel=1e-14)

    def test_no_anticlone_fields_serialize_empty(self, capsys):
        code, out = run_cli(capsys, "report", 2, 0, 2, "--format", "csv")
        assert code == 0
        header, values = out.strip().splitlines()
        row = dict(zip(header.split(","), values.split(",")))
        assert row["n_th_anticlone"] == ""
        assert float(row["gain"]) == pytest.approx(1.0)  # M=N, no added noise
        assert float(row["n_th_clone"]) == pytest.approx(0.0, abs=1e-15)

    def test_attenuation_exit_code(self, capsys):
        code, out = run_cli(capsys, "report", 2, 1, 1)
        assert code == 2

    def test_split_matches_counts(self, capsys):
        _, split_out = run_cli(capsys, "report", 8, 0.25, 16, "--split")
        _, count_out = run_cli(capsys, "report", 6, 2, 16)
        assert json.loads(split_out) == json.loads(count_out)

    def test_split_requires_integral_counts(self, capsys):
        code, _ = run_cli(capsys, "report", 8, 0.3, 16, "--split")
        assert code == 2


class TestSweep:
    def test_header_and_feasible_rows(self, capsys):
        code, out = run_cli(capsys, "sweep", 8, 8, "--a-steps", 5)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == SWEEP_HEADER
        rows = [dict(zip(SWEEP_HEADER.split(","), ln.split(","))) for ln in lines[1:]]
        assert [float(r["a"]) for r in rows] == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert float(rows[0]["n_th"]) == pytest.approx(0.0, abs=1e-15)
        assert float(rows[-1]["n_th"]) == pytest.approx(0.125, rel=1e-12)
        assert float(rows[-1]["sqrt_n_th"]) == pytest.approx(
            math.sqrt(0.125), rel=1e-12
        )

    def test_conjugate_end_independent_of_m(self, capsys):
        code, out = run_cli(capsys, "sweep", 8, 16, 32, 64, "--a-steps", 3)
        lines = out.strip().splitlines()[1:]
        ends = [ln for ln in lines if ln.split(",")[2] == "1"]
        assert len(ends) == 3
        for ln in ends:
            row = dict(zip(SWEEP_HEADER.split(","), ln.split(",")))
            assert float(row["n_th"]) == pytest.approx(0.125, rel=1e-12)

    def test_rows_ordered_by_m_then_a(self, capsys):
        _, out = run_cli(capsys, "sweep", 4, 8, 4, "--a-steps", 3)
        keys = [
            (float(ln.split(",")[1]), float(ln.split(",")[2]))
            for ln in out.strip().splitlines()[1:]
        ]
        assert keys == sorted(keys)

    def test_infeasible_corner_skipped(self, capsys):
        # M=4 < n=8: the standard end a=0 implies more inputs than clones.
        _, out = run_cli(capsys, "sweep", 8, 4, "--a-steps", 5)
        a_values = [float(ln.split(",")[2]) for ln in out.strip().splitlines()[1:]]
        assert 0.0 not in a_values
        assert 0.25 not in a_values  # (1-a)n = 6 still exceeds M
        assert 0.5 in a_values

    def test_csv_round_trip(self, capsys):
        _, out = run_cli(capsys, "sweep", 8, 16, "--a-steps", 9)
        reader = csv.DictReader(io.StringIO(out))
        for row in reader:
            a = float(row["a"])
            g = float(row["G"])
            assert float(row["n_th"]) == pytest.approx((g - 1) / 16, rel=1e-12)
            assert float(row["N"]) == pytest.approx((1 - a) * 8, abs=1e-12)
            assert float(row["Nc"]) == pytest.approx(a * 8, abs=1e-12)

    def test_json_format(self, capsys):
        _, out = run_cli(capsys, "sweep", 2, 2, "--a-steps", 3, "--format", "json")
        rows = json.loads(out)
        assert [r["a"] for r in rows] == [0.0, 0.5, 1.0]
        assert rows[1]["G"] == pytest.approx(9 / 8, rel=1e-12)


class TestOptimize:
    def test_standard_is_best_when_m_equals_n(self, capsys):
        code, out = run_cli(capsys, "optimize", 8, 8)
        assert code == 0
        doc = json.loads(out)
        assert doc["a_star"] == 0.0
        assert doc["n_th"] == pytest.approx(0.0, abs=1e-12)

    def test_interior_optimum(self, capsys):
        _, out = run_cli(capsys, "optimize", 8, 16)
        doc = json.loads(out)
        assert 0.0 < doc["a_star"] < 0.5
        assert doc["a_star"] == pytest.approx(0.25, abs=1e-6)

    def test_convergence_failure_exit_code(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise ConvergenceError("stalled")

        monkeypatch.setattr(pciclone.cli, "minimize_asymmetry", boom)
        code, _ = run_cli(capsys, "optimize", 8, 16)
        assert code == 3


class TestSolve:
    def test_conjugate_only_amplifier(self, capsys):
        code, out = run_cli(capsys, "solve", 0, 1, 1)
        assert code == 0
        doc = json.loads(out)
        assert doc["gain"] == pytest.approx(2.0, rel=1e-8)
        assert doc["converged"] is True

    def test_domain_error_exit_code(self, capsys):
        code, _ = run_cli(capsys, "solve", 2, 1, 1)
        assert code == 2

    def test_csv_format(self, capsys):
        _, out = run_cli(capsys, "solve", 0, 1, 1, "--format", "csv")
        header, values = out.strip().splitlines()
        row = dict(zip(header.split(","), values.split(",")))
        assert float(row["gain"]) == pytest.approx(2.0, rel=1e-8)
        assert row["converged"] == "true"


class TestVerify:
    def test_passing_run(self, capsys):
        code, out = run_cli(capsys, "verify", 1, 0, 1, 100, 7)
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert doc["structural_pass"] is True
        assert doc["samples"] == 100
        assert doc["seed"] == 7

    def test_two_clone_machine(self, capsys):
        code, out = run_cli(capsys, "verify", 1, 1, 2, 50000, 42)
        assert code == 0
        doc = json.loads(out)
        assert doc["Mc"] == 2
        assert doc["comparison"]["passed"] is True

    def test_attenuation_exit_code(self, capsys):
        code, _ = run_cli(capsys, "verify", 3, 1, 2)
        assert code == 2

    def test_env_tolerance_fails_structural_check(self, capsys, monkeypatch):
        monkeypatch.setenv("PCICLONE_TOL", "1e-30")
        code, out = run_cli(capsys, "verify", 1, 1, 2, 1000, 1)
        assert code == 1
        assert json.loads(out)["structural_pass"] is False

    def test_explicit_tol_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("PCICLONE_TOL", "1e-30")
        code, _ = run_cli(capsys, "verify", 1, 1, 2, 1000, 1, "--tol", "1e-10")
        assert code == 0

    def test_csv_z_table(self, capsys):
        _, out = run_cli(capsys, "verify", 1, 1, 2, 1000, 1, "--format", "csv")
        lines = out.strip().splitlines()
        assert lines[0] == "mode,role,z_mean_x,z_mean_p,z_var_x,z_var_p,z_fidelity"
        assert len(lines) == 5  # four modes


class TestOutputFile:
    def test_out_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out = run_cli(capsys, "report", 1, 1, 2, "--out", str(target))
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["f_clone"] == pytest.approx(16 / 17)


def test_unknown_command_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
