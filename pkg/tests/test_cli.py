import json
import math
import subprocess
import sys


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "gupho", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=120,
    )


def data_rows(stdout):
    lines = [ln for ln in stdout.splitlines() if ln and not ln.startswith("#")]
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


class TestSpectrumCommand:
    def test_undeformed_nonrel_levels(self):
        result = run_cli("spectrum", "--eta", "0", "--branch", "nr", "--nmax", "4")
        assert result.returncode == 0
        header, rows = data_rows(result.stdout)
        assert header == ["n", "energy", "residual", "iterations", "method"]
        assert [float(r[1]) for r in rows] == [0.5, 1.5, 2.5, 3.5, 4.5]
        assert all(r[4] == "closed_form" for r in rows)

    def test_relativistic_residual_column(self):
        result = run_cli("spectrum", "--eta", "0.1", "--branch", "rel", "--nmax", "6")
        assert result.returncode == 0
        _, rows = data_rows(result.stdout)
        for row in rows:
            assert abs(float(row[2])) <= 1e-10
            assert row[4] in ("fixed_point", "bisection")

    def test_malformed_flag_exits_64_writes_nothing(self, tmp_path):
        out = tmp_path / "never.csv"
        result = run_cli("spectrum", "--eta", "bogus", "--out", str(out))
        assert result.returncode == 64
        assert not out.exists()
        assert result.stdout == ""

    def test_invalid_parameter_value_exits_64(self):
        result = run_cli("spectrum", "--mass", "-2")
        assert result.returncode == 64

    def test_json_format(self):
        result = run_cli("spectrum", "--eta", "0", "--branch", "nr", "--nmax", "2",
                         "--format", "json")
        assert result.returncode == 0
        doc = json.loads(result.stdout)
        assert doc["meta"]["columns"] == ["n", "energy", "residual", "iterations", "method"]
        assert [row[1] for row in doc["rows"]] == [0.5, 1.5, 2.5]


class TestFigure1Command:
    def test_anchor_ratios(self):
        result = run_cli("figure1", "--omega", str(math.pi), "--xi-min", "0",
                         "--xi-max", "50", "--steps", "2", "--n-list", "1,2,3")
        assert result.returncode == 0
        header, rows = data_rows(result.stdout)
        assert header == ["xi", "n", "E_n", "E_0", "ratio"]
        at_zero = {int(r[1]): float(r[4]) for r in rows if float(r[0]) == 0.0}
        assert at_zero == {1: 3.0, 2: 5.0, 3: 7.0}
        at_fifty = {int(r[1]): float(r[4]) for r in rows if float(r[0]) == 50.0}
        assert abs(at_fifty[3] - 16.0) <= 0.16

    def test_row_count_contract(self):
        result = run_cli("figure1", "--steps", "2", "--n-list", "1,2,3")
        _, rows = data_rows(result.stdout)
        assert len(rows) == 2 * 3

    def test_units_metadata_comment(self):
        result = run_cli("figure1", "--steps", "2")
        assert "# units=a0=1 (natural units)" in result.stdout
        assert "# branch=nr" in result.stdout

    def test_bad_range_rejected(self):
        assert run_cli("figure1", "--xi-min", "5", "--xi-max", "1").returncode == 64
        assert run_cli("figure1", "--steps", "1").returncode == 64


class TestStateCommand:
    def test_odd_state_is_odd_rowwise(self):
        result = run_cli("state", "--eta", "1", "--branch", "nr", "--n", "1",
                         "--samples", "21")
        assert result.returncode == 0
        _, rows = data_rows(result.stdout)
        assert len(rows) == 21
        phi = [float(r[2]) for r in rows]
        for i in range(len(phi)):
            assert phi[i] == -phi[len(phi) - 1 - i] or abs(phi[i] + phi[len(phi) - 1 - i]) < 1e-15

    def test_ground_center_value(self):
        result = run_cli("state", "--eta", "1", "--branch", "nr", "--n", "0",
                         "--samples", "3")
        _, rows = data_rows(result.stdout)
        center = rows[1]
        assert float(center[1]) == 0.0
        meta = dict(
            line[2:].split("=", 1) for line in result.stdout.splitlines()
            if line.startswith("# ") and "=" in line
        )
        expected = float(meta["norm"]) * 4.0 ** (-float(meta["v"]))
        assert float(center[2]) == expected  # same 17-digit round trip

    def test_endpoint_decay(self):
        result = run_cli("state", "--eta", "1", "--branch", "nr", "--n", "0",
                         "--samples", "5")
        _, rows = data_rows(result.stdout)
        phi = [abs(float(r[2])) for r in rows]
        assert phi[0] < phi[2] and phi[-1] < phi[2]

    def test_undeformed_exits_2(self):
        assert run_cli("state", "--eta", "0").returncode == 2


class TestVerifyCommand:
    def test_default_config_passes(self):
        result = run_cli("verify")
        assert result.returncode == 0, result.stdout + result.stderr
        _, rows = data_rows(result.stdout)
        assert all(r[3] == "pass" for r in rows)

    def test_literal_raise_fails_ladder_check(self):
        result = run_cli("verify", "--literal-raise")
        assert result.returncode == 1
        _, rows = data_rows(result.stdout)
        status = {r[0]: r[3] for r in rows}
        assert status["ladder_identity"] == "fail"
        assert "ladder_identity" in result.stderr

    def test_undeformed_config_passes(self):
        result = run_cli("verify", "--eta", "0")
        assert result.returncode == 0
        _, rows = data_rows(result.stdout)
        names = [r[0] for r in rows]
        assert "undeformed_closed_form" in names
        assert "orthonormality" not in names  # deformed-only checks skipped


class TestFmCommand:
    def test_exponents_and_residual(self):
        result = run_cli("fm", "--k1", "0", "--k2", "0", "--k3", "1",
                         "--A", "0", "--B", "0", "--C", "0", "--n", "0")
        assert result.returncode == 0
        header, rows = data_rows(result.stdout)
        assert header == ["k4", "k5", "residual"]
        assert [float(v) for v in rows[0]] == [1.0, 1.0, 1.0]

    def test_no_bound_state_exits_2(self):
        result = run_cli("fm", "--k1", "0", "--k2", "0", "--k3", "1",
                         "--A", "0", "--B", "0", "--C", "10")
        assert result.returncode == 2

    def test_missing_coefficient_exits_64(self):
        result = run_cli("fm", "--k1", "0")
        assert result.returncode == 64


class TestOutputDiscipline:
    def test_byte_identical_runs(self):
        a = run_cli("spectrum", "--eta", "0.1", "--nmax", "5")
        b = run_cli("spectrum", "--eta", "0.1", "--nmax", "5")
        assert a.stdout == b.stdout
        assert a.stdout.endswith("\n")

    def test_out_file_matches_stdout(self, tmp_path):
        out = tmp_path / "table.csv"
        direct = run_cli("spectrum", "--eta", "0.1", "--nmax", "3")
        written = run_cli("spectrum", "--eta", "0.1", "--nmax", "3", "--out", str(out))
        assert written.returncode == 0
        assert written.stdout == ""
        assert out.read_text() == direct.stdout

    def test_config_file_and_flag_precedence(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("eta = 0\nbranch = nr\nnmax = 2  # comment\n")
        base = run_cli("spectrum", "--config", str(cfg))
        _, rows = data_rows(base.stdout)
        assert [float(r[1]) for r in rows] == [0.5, 1.5, 2.5]
        # flags override the file
        override = run_cli("spectrum", "--config", str(cfg), "--nmax", "1")
        _, rows = data_rows(override.stdout)
        assert len(rows) == 2

    def test_unknown_config_key_exits_64(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("tau = 3\n")
        assert run_cli("spectrum", "--config", str(cfg)).returncode == 64

    def test_quad_order_env_override(self):
        import os

        env = dict(os.environ)
        env["GUP_QUAD_ORDER"] = "64"
        result = run_cli("state", "--eta", "1", "--branch", "nr", "--n", "0",
                         "--samples", "3", env=env)
        assert result.returncode == 0
        env["GUP_QUAD_ORDER"] = "not-an-int"
        assert run_cli("state", "--eta", "1", env=env).returncode == 64
