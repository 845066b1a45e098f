"""Command-line interface: exit codes, schemas, determinism."""

import json

import pytest

from besqint.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def data_lines(text):
    return [l for l in text.splitlines() if not l.startswith("#")]


class TestLaplace:
    def test_single_point(self, capsys):
        rc, out, _ = run(capsys, "laplace", "--nu", "1", "--p", "1",
                         "--x", "1", "--y", "0.5", "--lambda", "4")
        assert rc == 0
        rows = data_lines(out)
        assert rows[0] == "nu,p,x,y,lambda,value,defective"
        fields = rows[1].split(",")
        assert float(fields[5]) == pytest.approx(0.30326532985631671, rel=1e-12)
        assert fields[6] == "1"

    def test_grid_row_count(self, capsys):
        rc, out, _ = run(capsys, "laplace", "--nu", "0.5", "--p", "0",
                         "--x", "0", "--y", "1", "--grid", "0.1:10:25")
        assert rc == 0
        assert len(data_lines(out)) == 26  # header + 25 rows

    def test_delta_alias(self, capsys):
        rc1, out1, _ = run(capsys, "laplace", "--delta", "4", "--p", "1",
                           "--x", "1", "--y", "0.5", "--lambda", "4")
        rc2, out2, _ = run(capsys, "laplace", "--nu", "1", "--p", "1",
                           "--x", "1", "--y", "0.5", "--lambda", "4")
        assert rc1 == rc2 == 0
        assert data_lines(out1) == data_lines(out2)

    def test_regime_violation_exit_2(self, capsys):
        rc, out, err = run(capsys, "laplace", "--nu", "-0.5", "--p", "-0.5",
                           "--x", "0.5", "--y", "1", "--lambda", "2")
        assert rc == 2
        assert "regime" in err
        assert "p >= 0" in err  # message states the violated hypothesis
        assert out == ""

    def test_usage_error_exit_2(self, capsys):
        rc, *_ = run(capsys, "laplace", "--nu", "1", "--p", "1", "--x", "1", "--y", "0.5")
        assert rc == 2  # neither --lambda nor --grid

    def test_joint_max_needs_barrier(self, capsys):
        rc, *_ = run(capsys, "laplace", "--nu", "1", "--p", "1", "--x", "1",
                     "--y", "0.5", "--lambda", "1", "--kind", "joint-max")
        assert rc == 2

    def test_deterministic_rerun(self, capsys):
        argv = ["laplace", "--nu", "1", "--p", "1", "--x", "0", "--y", "1",
                "--grid", "0.5:8:10"]
        _, out1, _ = run(capsys, *argv)
        _, out2, _ = run(capsys, *argv)
        assert data_lines(out1) == data_lines(out2)


class TestPrice:
    def test_put_at_the_money_is_zero(self, capsys):
        rc, out, _ = run(capsys, "price", "--kind", "put", "--nu", "1", "--p", "1",
                         "--x", "0", "--y", "1", "--strike", "1.0")
        assert rc == 0
        doc = json.loads(out)
        assert doc["price"] == 0.0
        assert doc["schema_version"] == "1"
        assert doc["manifest"]["command"] == "price"

    def test_digital_report(self, capsys):
        rc, out, _ = run(capsys, "price", "--kind", "digital", "--nu", "1", "--p", "1",
                         "--x", "0", "--y", "1", "--threshold", "0.1")
        assert rc == 0
        doc = json.loads(out)
        assert 0.0 < doc["price"] < 1.0
        assert doc["error_estimate"] <= 1e-6

    def test_mc_check_requires_seed(self, capsys):
        rc, *_ = run(capsys, "price", "--kind", "digital", "--nu", "1", "--p", "1",
                     "--x", "0", "--y", "1", "--threshold", "0.1", "--mc-check")
        assert rc == 2

    def test_mc_check_fields(self, capsys):
        rc, out, _ = run(capsys, "price", "--kind", "digital", "--nu", "1", "--p", "1",
                         "--x", "0", "--y", "1", "--threshold", "0.1", "--mc-check",
                         "--seed", "5", "--paths", "2000", "--step", "1e-3")
        assert rc == 0
        doc = json.loads(out)
        assert abs(doc["mc_estimate"] - doc["price"]) <= 4 * doc["mc_std_error"]


class TestValidate:
    def test_clean_run(self, capsys):
        rc, out, _ = run(capsys, "validate")
        assert rc == 0
        assert all("pass" in row for row in data_lines(out)[1:])

    def test_kernel_perturbation_detected(self, capsys):
        rc, out, err = run(capsys, "validate", "--inject-kernel-perturbation", "1e-6")
        assert rc == 3
        assert any("FAIL" in row for row in data_lines(out))
        assert "FAILED" in err


class TestExperiment:
    def test_smallball_series(self, capsys):
        rc, out, _ = run(capsys, "experiment", "smallball", "--nu", "1", "--p", "1",
                         "--x", "1", "--y", "2", "--grid", "1e2:1e6:5")
        assert rc == 0
        rows = data_lines(out)
        assert rows[0] == "lambda,rate,target"
        assert len(rows) == 6

    def test_seed_required(self, capsys):
        for what in ("lil", "bias-study", "paths"):
            rc, *_ = run(capsys, "experiment", what, "--nu", "1", "--p", "1",
                         "--x", "0", "--y", "1")
            assert rc == 2

    def test_paths_csv(self, capsys, tmp_path):
        out_file = tmp_path / "paths.csv"
        rc, *_ = run(capsys, "experiment", "paths", "--nu", "1", "--p", "1",
                     "--x", "0", "--y", "1", "--seed", "4", "--paths", "20",
                     "--step", "1e-2", "--out", str(out_file))
        assert rc == 0
        lines = out_file.read_text().splitlines()
        assert lines[2] == "path_id,hit_time,sigma,max,min,censored"
        assert len(lines) == 23

    def test_bias_study_csv(self, capsys):
        rc, out, _ = run(capsys, "experiment", "bias-study", "--nu", "1", "--p", "1",
                         "--x", "0", "--y", "1", "--lambda", "2", "--seed", "6",
                         "--paths", "500", "--step", "2e-3", "--h-levels", "2")
        assert rc == 0
        rows = data_lines(out)
        assert rows[0].startswith("h,estimate")
        assert rows[-1].startswith("order,")
