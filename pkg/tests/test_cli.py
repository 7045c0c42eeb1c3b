"""End-to-end tests of the command-line interface."""

import json

import pytest
import yaml

from bessrl.cli import build_parser, main


@pytest.fixture
def tiny_yaml(tmp_path):
    """A config file small enough for sub-second training runs."""
    path = tmp_path / "tiny.yaml"
    path.write_text(
        yaml.safe_dump(
            {
                "agent": {
                    "algo": "dqn",
                    "hidden": [8, 8],
                    "batch_size": 32,
                    "fqi_iterations": 2,
                    "fqi_buffer_size": 2048,
                },
                "run": {"episodes": 2, "eval_every": 2},
            }
        )
    )
    return str(path)


def run_cli(args):
    return main(list(args))


def train_tiny(tmp_path, tiny_yaml, subdir="run", seed="3"):
    out = tmp_path / subdir
    rc = run_cli(
        ["train", "--desk-scale", "--config", tiny_yaml, "--seed", seed, "--out", str(out)]
    )
    assert rc == 0
    return out


class TestParser:
    def test_all_subcommands_are_registered(self):
        parser = build_parser()
        text = parser.format_help()
        for name in ("train", "evaluate", "heatmap", "oracle", "compare", "grad-check"):
            assert name in text

    def test_global_flags_on_every_subcommand(self):
        parser = build_parser()
        for command in ("train", "evaluate", "heatmap", "oracle", "compare", "grad-check"):
            extra = {
                "evaluate": ["c.npz"],
                "heatmap": ["c.npz"],
                "compare": ["dqn", "fqi"],
            }.get(command, [])
            args = parser.parse_args(
                [command, *extra, "--seed", "7", "--out", "somewhere", "--desk-scale"]
            )
            assert args.seed == 7
            assert args.out == "somewhere"
            assert args.desk_scale is True
            assert args.config is None


class TestTrainCommand:
    def test_writes_artifacts_and_reports(self, tmp_path, tiny_yaml, capsys):
        out = train_tiny(tmp_path, tiny_yaml)
        stdout = capsys.readouterr().out
        assert "best val profit" in stdout
        for name in (
            "config.yaml",
            "learning_curve.csv",
            "train_log.jsonl",
            "checkpoint_best.npz",
            "checkpoint_final.npz",
        ):
            assert (out / name).exists()

    def test_bad_config_key_exits_nonzero(self, tmp_path, capsys):
        path = tmp_path / "bad.yaml"
        path.write_text("agent:\n  learning_rate_typo: 1\n")
        rc = run_cli(["train", "--config", str(path)])
        assert rc == 2
        assert "learning_rate_typo" in capsys.readouterr().err


class TestEvaluateCommand:
    def test_prints_report_and_writes_json(self, tmp_path, tiny_yaml, capsys):
        out = train_tiny(tmp_path, tiny_yaml)
        capsys.readouterr()
        rc = run_cli(
            ["evaluate", str(out / "checkpoint_final.npz"), "--split", "val", "--out", str(out)]
        )
        assert rc == 0
        stdout = capsys.readouterr().out
        assert "avg daily profit" in stdout
        report = json.loads((out / "eval_report.json").read_text())
        assert isinstance(report["avg_daily_profit"], float)
        assert len(report["days"]) == report["n_days"]
        assert sum(report["histogram"]["counts"]) == report["n_hours"]

    def test_report_file_is_reproducible(self, tmp_path, tiny_yaml, capsys):
        out = train_tiny(tmp_path, tiny_yaml)
        checkpoint = str(out / "checkpoint_final.npz")
        rc = run_cli(["evaluate", checkpoint, "--out", str(out)])
        assert rc == 0
        first = (out / "eval_report.json").read_bytes()
        rc = run_cli(["evaluate", checkpoint, "--out", str(out)])
        assert rc == 0
        assert (out / "eval_report.json").read_bytes() == first

    def test_missing_checkpoint_exits_nonzero(self, tmp_path, capsys):
        rc = run_cli(["evaluate", str(tmp_path / "missing.npz")])
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestHeatmapCommand:
    def test_writes_matrix_and_sidecar(self, tmp_path, tiny_yaml, capsys):
        out = train_tiny(tmp_path, tiny_yaml)
        rc = run_cli(
            [
                "heatmap",
                str(out / "checkpoint_best.npz"),
                "--price-points", "9",
                "--soc-points", "5",
                "--cycles-used", "0.25",
                "--out", str(out),
            ]
        )
        assert rc == 0
        lines = (out / "heatmap.csv").read_text().splitlines()
        assert len(lines) == 9
        assert all(len(line.split(",")) == 5 for line in lines)
        sidecar = json.loads((out / "heatmap.meta.json").read_text())
        assert len(sidecar["price_axis"]) == 9
        assert len(sidecar["soc_axis"]) == 5
        assert sidecar["fixed"]["cycles_used"] == 0.25
        assert "backup" in sidecar["note"]


class TestOracleCommand:
    def test_square_wave_optimum_and_files(self, tmp_path, capsys):
        out = tmp_path / "oracle"
        rc = run_cli(["oracle", "--desk-scale", "--out", str(out)])
        assert rc == 0
        stdout = capsys.readouterr().out
        assert "3600.00" in stdout
        lines = (out / "oracle_actions.csv").read_text().splitlines()
        assert lines[0] == "minute,action"
        assert len(lines) == 1441
        summary = json.loads((out / "oracle.json").read_text())
        assert summary["profit"] == pytest.approx(3600.0, rel=1e-9)

    def test_day_index_out_of_range(self, tmp_path, capsys):
        rc = run_cli(["oracle", "--desk-scale", "--day", "99"])
        assert rc == 2
        assert "out of range" in capsys.readouterr().err


class TestCompareCommand:
    def test_table_and_json_output(self, tmp_path, tiny_yaml, capsys):
        out = tmp_path / "cmp"
        rc = run_cli(
            [
                "compare", "dqn", "fqi",
                "--desk-scale",
                "--config", tiny_yaml,
                "--seed", "1",
                "--out", str(out),
            ]
        )
        assert rc == 0
        stdout = capsys.readouterr().out
        assert "ratio" in stdout and "EUR/cycle" in stdout
        payload = json.loads((out / "compare.json").read_text())
        assert [row["algo"] for row in payload["rows"]] == ["dqn", "fqi"]
        assert payload["rows"][0]["runtime_ratio"] == pytest.approx(1.0)

    def test_single_entry_exits_nonzero(self, capsys):
        rc = run_cli(["compare", "dqn", "--desk-scale"])
        assert rc == 2
        assert "at least two" in capsys.readouterr().err


class TestGradCheckCommand:
    def test_random_networks_pass(self, capsys):
        rc = run_cli(["grad-check", "--trials", "9"])
        assert rc == 0
        stdout = capsys.readouterr().out
        assert stdout.count("PASS") == 3
        assert "FAIL" not in stdout
