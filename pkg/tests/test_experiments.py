"""Config parsing, scenario runners, report formats, and the CLI surface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from cvbeams.experiments import (CSV_COLUMNS, ConfigError, emit_report,
                                 parse_config, render_report, run_scenario,
                                 run_split_scenario, run_xp_scenario)

MINIMAL_XP = """
{
  "scenario": "xp_entanglement",
  "squeezing": {"r1": 0.5, "r2": 0.5}
}
"""

SWEEP_XP = """
{
  "scenario": "xp_entanglement",
  "sweep": {"parameter": "r", "start": 0.0, "stop": 2.0, "steps": 21}
}
"""


class TestParseConfig:
    def test_minimal_with_defaults(self):
        cfg = parse_config(MINIMAL_XP)
        assert cfg.truncation == 8
        assert cfg.output_format == "json"
        assert cfg.r1 == 0.5 and cfg.r2 == 0.5
        assert cfg.waist == 1.0 and cfg.photons == 1e6 and cfg.lo_photons == 1e8

    def test_lo_regime_enforced(self):
        doc = {"scenario": "xp_entanglement", "photons": 1e6, "lo_photons": 1e6}
        with pytest.raises(ConfigError, match="local oscillator regime"):
            parse_config(json.dumps(doc))

    def test_sweep_schedule_length(self):
        cfg = parse_config(SWEEP_XP)
        assert cfg.sweep.steps == 21
        assert len(run_scenario(cfg).rows) == 21

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError, match="scenario"):
            parse_config('{"scenario": "teleportation"}')

    def test_bad_json(self):
        with pytest.raises(ConfigError, match="line"):
            parse_config("{nope}")

    def test_bad_steps(self):
        doc = {"scenario": "xp_entanglement",
               "sweep": {"parameter": "r", "start": 0, "stop": 1, "steps": 0}}
        with pytest.raises(ConfigError, match="steps"):
            parse_config(json.dumps(doc))

    def test_bad_format(self):
        doc = {"scenario": "xp_entanglement", "output": {"format": "xml"}}
        with pytest.raises(ConfigError, match="format"):
            parse_config(json.dumps(doc))

    def test_bad_truncation(self):
        with pytest.raises(ConfigError, match="truncation"):
            parse_config('{"scenario": "xp_entanglement", "truncation": 1}')


class TestScenarios:
    def test_xp_no_squeezing_separable(self):
        cfg = parse_config('{"scenario": "xp_entanglement"}')
        row = run_xp_scenario(cfg).rows[0]
        assert row["inseparability"] == pytest.approx(1.0, abs=1e-10)
        assert row["entangled"] is False

    def test_xp_symmetric_squeezing(self):
        cfg = parse_config(MINIMAL_XP)
        row = run_xp_scenario(cfg).rows[0]
        assert row["inseparability"] == pytest.approx(np.exp(-2), abs=1e-10)
        assert row["entangled"] is True

    def test_xp_sweep_closed_form_pointwise(self):
        report = run_scenario(parse_config(SWEEP_XP))
        for row in report.rows:
            assert row["inseparability"] == pytest.approx(
                np.exp(-4 * row["sweep_param"]), abs=1e-10)

    def test_split_values(self):
        r_half = -0.5 * np.log(0.5)
        doc = {"scenario": "split_entanglement",
               "squeezing": {"r1": r_half, "r2": r_half}}
        row = run_split_scenario(parse_config(json.dumps(doc))).rows[0]
        assert row["inseparability"] == pytest.approx(0.25, abs=1e-10)
        # plus readouts are squeezed below QNL, minus readouts above
        assert row["x_var_3"] < 1.0 < row["p_var_3"]

    def test_demo_scenario(self):
        doc = {"scenario": "position_readout_demo", "squeezing": {"r1": 0.5}}
        row = run_scenario(parse_config(json.dumps(doc))).rows[0]
        assert row["sum_var"] == pytest.approx(np.exp(-1) / (4 * 1e6), rel=1e-10)
        assert row["inseparability"] == pytest.approx(1.0, abs=1e-10)

    def test_scenario_runner_guards(self):
        cfg = parse_config('{"scenario": "split_entanglement"}')
        with pytest.raises(ConfigError):
            run_xp_scenario(cfg)


class TestReports:
    def test_csv_shape_and_literals(self):
        cfg = parse_config(MINIMAL_XP)
        text = render_report(run_scenario(cfg), "csv")
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        assert ",true," in lines[1]

    def test_json_top_level_keys(self):
        cfg = parse_config(MINIMAL_XP)
        doc = json.loads(render_report(run_scenario(cfg), "json"))
        assert set(doc) == {"config", "results", "provenance"}
        assert doc["provenance"]["library"] == "cvbeams"
        assert "config_sha256" in doc["provenance"]

    def test_byte_determinism(self, tmp_path):
        doc = {"scenario": "xp_entanglement",
               "squeezing": {"r1": 0.3, "r2": 0.3},
               "monte_carlo": {"shots": 500, "seed": 7}}
        cfg = parse_config(json.dumps(doc))
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        emit_report(run_scenario(cfg), p1, "json")
        emit_report(run_scenario(cfg), p2, "json")
        assert p1.read_bytes() == p2.read_bytes()

    def test_output_dir_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CVBEAMS_OUTPUT_DIR", str(tmp_path))
        cfg = parse_config(MINIMAL_XP)
        written = emit_report(run_scenario(cfg), "elsewhere/report.csv", "csv")
        assert written == str(tmp_path / "report.csv")
        assert (tmp_path / "report.csv").exists()


def run_cli(args, **kwargs):
    return subprocess.run([sys.executable, "-m", "cvbeams.cli", *args],
                          capture_output=True, text=True, **kwargs)


class TestCli:
    @pytest.fixture()
    def config_file(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(MINIMAL_XP)
        return path

    def test_validate_ok(self, config_file):
        proc = run_cli(["validate", str(config_file)])
        assert proc.returncode == 0
        assert "config ok" in proc.stdout

    def test_run_writes_output(self, config_file, tmp_path):
        out = tmp_path / "report.csv"
        proc = run_cli(["run", str(config_file), "--output", str(out),
                        "--format", "csv"])
        assert proc.returncode == 0
        assert out.read_text().startswith(",".join(CSV_COLUMNS))

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"scenario": "nope"}')
        proc = run_cli(["run", str(bad)])
        assert proc.returncode == 1
        assert "config error" in proc.stderr

    def test_missing_file_exit_code(self):
        proc = run_cli(["run", "/no/such/config.json"])
        assert proc.returncode == 1

    def test_sweep_requires_sweep_section(self, config_file):
        proc = run_cli(["sweep", str(config_file)])
        assert proc.returncode == 1
        assert "sweep" in proc.stderr

    def test_seed_override_changes_bytes(self, tmp_path):
        path = tmp_path / "mc.json"
        path.write_text(json.dumps({
            "scenario": "xp_entanglement",
            "squeezing": {"r1": 0.2, "r2": 0.2},
            "monte_carlo": {"shots": 200, "seed": 1},
        }))
        out1, out2, out3 = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
        assert run_cli(["run", str(path), "--output", str(out1)]).returncode == 0
        assert run_cli(["run", str(path), "--output", str(out2)]).returncode == 0
        assert run_cli(["run", str(path), "--output", str(out3),
                        "--seed", "2"]).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes() != out3.read_bytes()
