import json

import pytest

from contextual_reduction.main import EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, build_parser, run_cli

RUN_ARGS = ["run", "--suite", "example1", "--algo", "known-dist", "--dim", "1", "--T", "50", "--seeds", "2"]


class TestParser:
    def test_verb_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_unknown_algorithm(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "--algo", "ucb"])


class TestRun:
    def test_prints_one_line_per_seed(self, capsys):
        assert run_cli(RUN_ARGS) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("known-dist\tseed=0\tT=50")

    def test_writes_traces(self, tmp_path):
        assert run_cli([*RUN_ARGS, "--out", str(tmp_path), "--format", "json-lines"]) == EXIT_OK
        rows = (tmp_path / "traces.jsonl").read_text().splitlines()
        assert len(rows) == 100

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"suite": "example1", "dim": 1, "algorithm": "random-baseline", "horizon": 500}))
        assert run_cli(["run", "--config", str(config), "--T", "20"]) == EXIT_OK
        assert "random-baseline\tseed=0\tT=20" in capsys.readouterr().out

    def test_invalid_config(self, capsys):
        assert run_cli(["run", "--dim", "0", "--T", "0"]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "dim" in err and "horizon" in err

    def test_failed_seeds(self, capsys):
        assert run_cli(["run", "--algo", "product", "--dim", "2", "--T", "10", "--seeds", "2"]) == EXIT_RUNTIME
        assert "NOT_PRODUCT" in capsys.readouterr().err

    def test_unknown_suite(self):
        assert run_cli(["run", "--suite", "nowhere", "--T", "10"]) == EXIT_RUNTIME


class TestScale:
    def test_fit_over_horizons(self, tmp_path, capsys):
        args = ["scale", "--suite", "example1", "--algo", "random-baseline", "--dim", "1"]
        assert run_cli([*args, "--horizons", "64,128,256,512", "--seeds", "3", "--out", str(tmp_path)]) == EXIT_OK
        assert "alpha=" in capsys.readouterr().out
        assert (tmp_path / "scaling.csv").exists()

    def test_too_few_horizons(self):
        args = ["scale", "--suite", "example1", "--algo", "random-baseline", "--dim", "1"]
        assert run_cli([*args, "--horizons", "64,128", "--seeds", "3"]) == EXIT_RUNTIME


class TestVerify:
    def test_unknown_check(self, capsys):
        assert run_cli(["verify", "--only", "99"]) == EXIT_CONFIG
        assert "only" in capsys.readouterr().err

    def test_selected_check(self, capsys):
        assert run_cli(["verify", "--quick", "--only", "4"]) == EXIT_OK
        assert "[PASS]" in capsys.readouterr().out


class TestEmit:
    def test_converts_saved_traces(self, tmp_path):
        assert run_cli([*RUN_ARGS, "--out", str(tmp_path)]) == EXIT_OK
        out = tmp_path / "plots"
        assert run_cli(["emit", str(tmp_path / "traces.csv"), "--format", "plotdata", "--out", str(out)]) == EXIT_OK
        assert (out / "plotdata.csv").exists()

    def test_missing_traces(self, tmp_path):
        assert run_cli(["emit", str(tmp_path / "absent.csv")]) == EXIT_RUNTIME
