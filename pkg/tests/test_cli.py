"""Command-line runs: outputs, configuration echo and exit codes."""

import json

import pandas as pd

from rmt_lab import __version__
from rmt_lab.config.settings import Settings, set_settings


def read_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


class TestOutputs:
    def test_sample_writes_table_and_summary(self, tmp_path, test_helpers):
        out = str(tmp_path / "sample")
        code, _ = test_helpers.run_cli(
            ["sample", "--n", "4", "--trials", "2", "--seed", "5", "--out", out, "--threads", "1"]
        )
        assert code == 0

        header = test_helpers.read_csv_header(out + ".csv")
        assert header[0] == f'# version: "{__version__}"'
        config = json.loads(header[1][len("# config: "):])
        assert config["command"] == "sample"
        assert config["seed"] == 5
        assert config["params"] == {"ensemble": "gue", "n": 4, "m": None, "rescale": True}
        assert "threads" not in config

        table = pd.read_csv(out + ".csv", comment="#")
        assert list(table.columns) == ["trial", "index", "re", "im"]
        assert len(table) == 8
        assert (table["im"] == 0).all()
        assert read_json(out + ".json")["summary"]["eigenvalues"] == 8

    def test_thread_count_does_not_change_outputs(self, tmp_path, test_helpers):
        out = str(tmp_path / "esd")
        contents = []
        for threads in ("1", "3"):
            code, _ = test_helpers.run_cli(
                ["esd", "--n", "30", "--trials", "4", "--seed", "11", "--out", out, "--threads", threads]
            )
            assert code == 0
            with open(out + ".csv", "r", encoding="utf-8") as handle:
                contents.append(handle.read())
        assert contents[0] == contents[1]

    def test_json_format(self, tmp_path, test_helpers):
        out = str(tmp_path / "holes")
        code, _ = test_helpers.run_cli(["holeprob", "--r", "3", "--r", "4", "--format", "json", "--out", out])
        assert code == 0
        assert not (tmp_path / "holes.csv").exists()
        document = read_json(out + ".json")
        assert document["rows"]["r"] == [3.0, 4.0]
        rates = document["rows"]["log_prob_over_r4"]
        assert rates[0] < rates[1] < 0

    def test_esd_summary(self, tmp_path, test_helpers):
        out = str(tmp_path / "esd")
        code, _ = test_helpers.run_cli(["esd", "--n", "100", "--trials", "2", "--out", out, "--threads", "1"])
        assert code == 0
        summary = read_json(out + ".json")["summary"]
        assert summary["bl_distance"] < 0.2
        assert summary["bl_mode"] == ["exact-lp"]
        table = pd.read_csv(out + ".csv", comment="#")
        assert list(table.columns) == ["bin_left", "bin_right", "density", "reference_density"]

    def test_kernel(self, tmp_path, test_helpers):
        out = str(tmp_path / "kernel")
        code, _ = test_helpers.run_cli(["kernel", "--n", "3", "--point", "0", "--point", "0.5", "--out", out])
        assert code == 0
        assert len(pd.read_csv(out + ".csv", comment="#")) == 4
        assert abs(read_json(out + ".json")["summary"]["trace"] - 3.0) < 1e-6

    def test_dyson(self, tmp_path, test_helpers):
        out = str(tmp_path / "dyson")
        code, _ = test_helpers.run_cli(
            ["dyson", "--n", "4", "--t-end", "0.01", "--records", "2", "--out", out, "--threads", "1"]
        )
        assert code == 0
        table = pd.read_csv(out + ".csv", comment="#")
        assert list(table.columns) == ["trial", "t", "i", "position"]
        assert len(read_json(out + ".json")["summary"]["stieltjes"]) == 3

    def test_dyson_record_flag(self, tmp_path, test_helpers):
        out = str(tmp_path / "dyson")
        code, _ = test_helpers.run_cli(
            ["dyson", "--n", "4", "--t-end", "0.01", "--record", "3", "--out", out, "--threads", "1"]
        )
        assert code == 0
        assert read_json(out + ".json")["config"]["params"]["records"] == 3
        assert len(pd.read_csv(out + ".csv", comment="#")) == 12

    def test_default_output_directory(self, tmp_path, monkeypatch, test_helpers):
        monkeypatch.setenv("RMT_LAB_OUTPUT_DIR", str(tmp_path / "runs"))
        set_settings(None)
        code, _ = test_helpers.run_cli(["holeprob", "--r", "3"])
        assert code == 0
        run_path = tmp_path / "runs" / "rmt_lab_run"
        assert (tmp_path / "runs" / "rmt_lab_run.csv").exists()
        assert read_json(str(run_path) + ".json")["config"]["out"] == str(run_path)

    def test_burgers(self, tmp_path, test_helpers):
        out = str(tmp_path / "burgers")
        code, _ = test_helpers.run_cli(["burgers", "--out", out])
        assert code == 0
        summary = read_json(out + ".json")["summary"]
        assert summary["max_residual"] < 1e-6
        assert summary["max_scaling_gap"] < 1e-9

    def test_yaml_defaults_and_flag_override(self, tmp_path, test_helpers):
        config_file = tmp_path / "run.yaml"
        config_file.write_text("seed: 9\nn: 3\nensemble: goe\n", encoding="utf-8")
        out = str(tmp_path / "yaml")
        code, _ = test_helpers.run_cli(["sample", "--config", str(config_file), "--n", "5", "--out", out])
        assert code == 0
        config = read_json(out + ".json")["config"]
        assert config["seed"] == 9
        assert config["params"]["n"] == 5
        assert config["params"]["ensemble"] == "goe"


class TestExitCodes:
    def test_schema_violation(self, tmp_path, test_helpers):
        code, stderr = test_helpers.run_cli(["sample", "--n", "0", "--out", str(tmp_path / "x")])
        assert code == 2
        assert test_helpers.read_error(stderr)["error"] == "ValidationError"

    def test_mismatched_reference(self, tmp_path, test_helpers):
        code, _ = test_helpers.run_cli(["esd", "--ensemble", "gue", "--ref", "circular", "--out", str(tmp_path / "x")])
        assert code == 2

    def test_config_file_must_be_mapping(self, tmp_path, test_helpers):
        config_file = tmp_path / "bad.yaml"
        config_file.write_text("- 1\n- 2\n", encoding="utf-8")
        code, stderr = test_helpers.run_cli(["sample", "--config", str(config_file)])
        assert code == 2
        assert test_helpers.read_error(stderr)["error"] == "InvalidArgumentError"

    def test_library_validation_error(self, tmp_path, test_helpers):
        code, stderr = test_helpers.run_cli(["gumbel", "--n", "100", "--out", str(tmp_path / "g")])
        assert code == 2
        error = test_helpers.read_error(stderr)
        assert error == {"error": "KappaUndefinedError", "message": error["message"], "exit_code": 2}
        assert not (tmp_path / "g.json").exists()

    def test_truncation_error(self, tmp_path, test_helpers):
        code, stderr = test_helpers.run_cli(
            ["holeprob", "--r", "3", "--truncation", "10", "--out", str(tmp_path / "h")]
        )
        assert code == 2
        assert test_helpers.read_error(stderr)["error"] == "TruncationError"

    def test_invalid_settings(self, tmp_path, test_helpers):
        settings = Settings()
        settings.simulation.step_safety = 2.0
        set_settings(settings)
        code, stderr = test_helpers.run_cli(["holeprob", "--r", "3", "--out", str(tmp_path / "h")])
        assert code == 2
        error = test_helpers.read_error(stderr)
        assert error["error"] == "InvalidArgumentError"
        assert "Step safety" in error["message"]
        assert not (tmp_path / "h.json").exists()

    def test_numerical_failure(self, tmp_path, test_helpers):
        settings = Settings()
        settings.solver.equilibrium_step = 1e6
        settings.solver.equilibrium_step_floor = 1e5
        set_settings(settings)
        code, stderr = test_helpers.run_cli(["ldp", "--grid-cells", "64", "--out", str(tmp_path / "l")])
        assert code == 3
        error = test_helpers.read_error(stderr)
        assert error["error"] == "SolverFailureError"
        assert "trace_tail" in error
