import json

import numpy as np
import pytest
from click.testing import CliRunner

from halfcavity.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, tmp_path, args, **kwargs):
    return runner.invoke(main, ["--outdir", str(tmp_path)] + args,
                         catch_exceptions=False, **kwargs)


class TestStationaryCommand:
    def test_writes_csv_and_manifest(self, runner, tmp_path):
        result = invoke(runner, tmp_path, [
            "stationary", "-R", "0.5", "--delta-phi", repr(np.pi), "-P", "300"])
        assert result.exit_code == 0
        csv = (tmp_path / "stationary.csv").read_text()
        assert csv.startswith("# schema=halfcavity/stationary/1\n")
        assert csv.splitlines()[1] == "delta,re_c,im_c"
        manifest = json.loads((tmp_path / "stationary_manifest.json").read_text())
        assert manifest["resolved_config"]["R"] == 0.5
        assert manifest["diagnostics"]["residual"] < 1e-10
        assert "wall_time_s" in manifest

    def test_byte_deterministic(self, runner, tmp_path):
        args = ["stationary", "-R", "0.3", "-P", "200"]
        invoke(runner, tmp_path, args)
        first = (tmp_path / "stationary.csv").read_bytes()
        invoke(runner, tmp_path, args)
        assert (tmp_path / "stationary.csv").read_bytes() == first


class TestEvolveCommand:
    def test_trajectory_output(self, runner, tmp_path):
        result = invoke(runner, tmp_path, [
            "evolve", "-R", "0.5", "-P", "150", "--t-end", "6.0",
            "--initial", "excited-emitter"])
        assert result.exit_code == 0
        lines = (tmp_path / "evolve.csv").read_text().splitlines()
        assert lines[0] == "# schema=halfcavity/trajectory/1"
        assert lines[1] == "t,p_e,p_c,p_bath"
        first = [float(x) for x in lines[2].split(",")]
        assert first == [0.0, 1.0, 0.0, 0.0]

    def test_domain_error_exit_code(self, runner, tmp_path):
        result = invoke(runner, tmp_path, [
            "evolve", "-R", "0.5", "-P", "150", "--t-end", "6.0", "--dt", "0.5"])
        assert result.exit_code == 1
        err = json.loads(result.output.splitlines()[-1]) if result.output else None
        # click's test runner merges stderr into output
        assert err["error"] == "step-size"


class TestJacobianCommand:
    def test_modes_output(self, runner, tmp_path):
        result = invoke(runner, tmp_path, [
            "jacobian", "-R", "0.2", "--delta-phi", repr(np.pi), "-P", "200"])
        assert result.exit_code == 0
        manifest = json.loads((tmp_path / "jacobian_manifest.json").read_text())
        assert manifest["diagnostics"]["skew_defect"] == 0.0
        assert manifest["diagnostics"]["completeness_defect"] < 1e-10
        data = np.loadtxt(tmp_path / "jacobian.csv", delimiter=",", skiprows=2)
        assert data.shape[1] == 3
        assert data.shape[0] == 402


class TestRootsCommand:
    def test_weak_damping_roots(self, runner, tmp_path):
        result = invoke(runner, tmp_path, ["roots", "-R", "0.05"])
        assert result.exit_code == 0
        data = np.loadtxt(tmp_path / "roots.csv", delimiter=",", skiprows=2)
        assert data.shape == (2, 2)
        assert abs(data[0, 0]) < 1e-9
        assert abs(data[1, 0] - 2.0) < 1e-9


class TestCriticalRCommand:
    def test_json_summary(self, runner, tmp_path):
        result = invoke(runner, tmp_path, ["critical-r", "-n", "1", "--tol", "1e-3"])
        assert result.exit_code == 0
        manifest = json.loads((tmp_path / "critical_r_manifest.json").read_text())
        assert manifest["diagnostics"]["critical_r"] == pytest.approx(0.0789, abs=2e-3)
        assert manifest["diagnostics"]["baseline_count"] == 2


class TestSweepCommand:
    def test_figure_preset(self, runner, tmp_path):
        result = invoke(runner, tmp_path, [
            "sweep", "--figure", "fig5a", "--log2r-step", "1.0"])
        assert result.exit_code == 0
        lines = (tmp_path / "fig5a.csv").read_text().splitlines()
        assert lines[0] == "# schema=halfcavity/sweep/1"
        assert lines[1] == "log2_R,omega_osc_over_omega_g,branch_id,marginal"
        data = np.loadtxt(tmp_path / "fig5a.csv", delimiter=",", skiprows=2)
        assert data[:, 0].min() == -6.0
        assert data[:, 0].max() == 6.0

    def test_worker_pool_matches_serial(self, runner, tmp_path):
        args = ["sweep", "-n", "1", "--delta-phi", "0.0", "--log2r-step", "2.0"]
        invoke(runner, tmp_path, args)
        serial = (tmp_path / "sweep.csv").read_bytes()
        invoke(runner, tmp_path, args + ["--workers", "2"])
        assert (tmp_path / "sweep.csv").read_bytes() == serial


class TestConfigResolution:
    def test_config_file_applies_and_flags_win(self, runner, tmp_path):
        conf = tmp_path / "run.conf"
        conf.write_text("R=0.25\nnum_pairs=200\n# comment\n")
        result = runner.invoke(main, [
            "--config", str(conf), "--outdir", str(tmp_path),
            "stationary", "-R", "0.5"], catch_exceptions=False)
        assert result.exit_code == 0
        manifest = json.loads((tmp_path / "stationary_manifest.json").read_text())
        assert manifest["resolved_config"]["R"] == 0.5  # flag beats config
        assert manifest["resolved_config"]["num_pairs"] == 200

    def test_outdir_env_var(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("HALFCAVITY_OUTDIR", str(tmp_path / "envout"))
        result = runner.invoke(main, ["roots", "-R", "0.05"], catch_exceptions=False)
        assert result.exit_code == 0
        assert (tmp_path / "envout" / "roots.csv").exists()


class TestErrors:
    def test_unknown_subcommand_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, ["frobnicate"])
        assert result.exit_code == 2

    def test_grid_error_category(self, runner, tmp_path):
        result = invoke(runner, tmp_path, ["stationary", "-R", "8.0", "-W", "12.0"])
        assert result.exit_code == 1
        err = json.loads(result.output.splitlines()[-1])
        assert err["error"] == "grid-resolution"


class TestCheck:
    def test_reports_known_product_law_deviation(self, runner, tmp_path):
        # every structural invariant passes; the quoted 1/(2 pi) emergence
        # law is measurably violated by the characteristic equation itself,
        # so that row fails honestly
        result = invoke(runner, tmp_path, ["check"])
        assert result.exit_code == 1
        lines = result.output.splitlines()
        failing = [ln for ln in lines if "FAIL" in ln]
        assert len(failing) == 1
        assert "product-law" in failing[0]
        assert "8/9 checks passed" in lines[-1]
