import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from kgaug.cli import cli
from kgaug.stub import StubServer, load_fixture_responses

from .conftest import FIXTURES, write_tinykg

FIXTURE_DIR = (FIXTURES / "pipeline50").resolve()


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def stub():
    with StubServer(responses=load_fixture_responses(FIXTURE_DIR / "stub_responses.json")) as server:
        yield server


def invoke(runner, args):
    result = runner.invoke(cli, args, catch_exceptions=False)
    return result


def test_stats_emits_json(runner, tinykg_dir):
    result = invoke(runner, ["stats", "--data", str(tinykg_dir), "--adapter", "wn18rr"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["entities"] == 10
    assert payload["polysemy"]["entities_in_groups"] == 5


def test_stats_check_fails_on_mismatch(runner, tinykg_dir):
    result = runner.invoke(
        cli, ["stats", "--data", str(tinykg_dir), "--adapter", "wn18rr", "--check"]
    )
    assert result.exit_code != 0


def test_route_writes_decisions(runner, tmp_path):
    out = tmp_path / "decisions.jsonl"
    result = invoke(
        runner,
        ["route", "--data", str(FIXTURE_DIR), "--budget", "24", "--out", str(out)],
    )
    assert result.exit_code == 0
    assert json.loads(result.output) == {"compress": 30, "expand": 20, "keep": 1}
    lines = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
    assert len(lines) == 51


def test_augment_clean_export_chain(runner, tmp_path, stub):
    decisions = tmp_path / "decisions.jsonl"
    jobs = tmp_path / "jobs.jsonl"
    outcomes = tmp_path / "outcomes.jsonl"
    report = tmp_path / "clean_report.json"
    export_dir = tmp_path / "export"

    invoke(runner, ["route", "--data", str(FIXTURE_DIR), "--budget", "24", "--out", str(decisions)])
    result = invoke(
        runner,
        [
            "augment", "--data", str(FIXTURE_DIR), "--decisions", str(decisions),
            "--endpoint", stub.endpoint, "--expand-template", "expand_wordnet",
            "--cache-dir", str(tmp_path / "cache"), "--out", str(jobs),
        ],
    )
    assert "50/50 jobs completed" in result.output
    result = invoke(
        runner,
        [
            "clean", "--data", str(FIXTURE_DIR), "--jobs", str(jobs),
            "--out", str(outcomes), "--report", str(report),
        ],
    )
    assert json.loads(result.output) == {"effective": 47, "refusal": 1, "echo": 1, "empty": 1}
    assert json.loads(report.read_text(encoding="utf-8"))["effective_rate"] == pytest.approx(0.94)

    result = invoke(
        runner,
        [
            "export", "--data", str(FIXTURE_DIR), "--outcomes", str(outcomes),
            "--format", "tsv", "--out", str(export_dir),
        ],
    )
    assert result.exit_code == 0
    assert (export_dir / "entity2text.txt").exists()


def test_augment_temperature_sweep(runner, tmp_path, stub):
    decisions = tmp_path / "decisions.jsonl"
    invoke(runner, ["route", "--data", str(FIXTURE_DIR), "--budget", "24", "--out", str(decisions)])
    result = invoke(
        runner,
        [
            "augment", "--data", str(FIXTURE_DIR), "--decisions", str(decisions),
            "--endpoint", stub.endpoint, "--expand-template", "expand_wordnet",
            "--cache-dir", str(tmp_path / "cache"),
            "--temperature", "0.5,1.0,1.5", "--out", str(tmp_path / "jobs.jsonl"),
        ],
    )
    assert result.exit_code == 0
    for temp in ("0.5", "1", "1.5"):
        assert (tmp_path / f"jobs_t{temp}.jsonl").exists()


def test_train_eval_score_checkpoint_compare(runner, tmp_path):
    ckpt = tmp_path / "model.kgem"
    result = invoke(
        runner,
        [
            "train", "--data", str(FIXTURE_DIR), "--family", "transe",
            "--dim", "16", "--epochs", "30", "--batch-size", "64", "--lr", "0.2",
            "--negatives", "4", "--margin", "2.0", "--seed", "7", "--out", str(ckpt),
        ],
    )
    assert result.exit_code == 0 and ckpt.exists()

    info = invoke(runner, ["checkpoint", str(ckpt)])
    header = json.loads(info.output)
    assert header["family"] == "transe" and header["n_entities"] == 51

    report_path = tmp_path / "eval.json"
    result = invoke(
        runner,
        [
            "eval", "--data", str(FIXTURE_DIR), "--checkpoint", str(ckpt),
            "--split", "test", "--out", str(report_path),
        ],
    )
    assert result.exit_code == 0
    assert "overall" in result.output

    result = invoke(
        runner,
        [
            "score", "--checkpoint", str(ckpt), "--data", str(FIXTURE_DIR),
            "--head", "p01", "--relation", "r0", "--tail", "p02",
        ],
    )
    assert result.exit_code == 0
    float(result.output.strip())  # parses as a number

    result = invoke(runner, ["compare", str(report_path), str(report_path)])
    assert result.exit_code == 0
    assert "+0.0000" in result.output


def test_eval_perfect_scorer_hook(runner):
    result = invoke(
        runner,
        ["eval", "--data", str(FIXTURE_DIR), "--scorer", "perfect", "--split", "test"],
    )
    assert result.exit_code == 0
    lines = [line for line in result.output.splitlines() if line.startswith("overall")]
    assert "1.0000" in lines[0]


def test_run_subcommand_executes_pipeline(runner, tmp_path, stub):
    config = tmp_path / "run.toml"
    config.write_text(
        f"""
seed = 7

[dataset]
dir = "{FIXTURE_DIR}"
adapter = "generic"

[routing]
budget = 24

[augment]
cache_dir = "{tmp_path / 'cache'}"
expand_template = "expand_wordnet"

[train]
family = "transe"
dimension = 16
epochs = 20
batch_size = 64
learning_rate = 0.2
negatives = 4
margin = 2.0
""",
        encoding="utf-8",
    )
    result = invoke(
        runner,
        [
            "run", "--config", str(config), "--run-dir", str(tmp_path / "run"),
            "--endpoint", stub.endpoint,
        ],
    )
    assert result.exit_code == 0
    statuses = json.loads(result.output)
    assert set(statuses.values()) == {"ran"}


def test_exit_code_for_parse_errors(tmp_path):
    import subprocess
    import sys

    data = write_tinykg(tmp_path / "broken")
    with open(data / "train.txt", "a", encoding="utf-8") as fh:
        fh.write("only two\tfields\n")
    proc = subprocess.run(
        [sys.executable, "-m", "kgaug.cli", "stats", "--data", str(data), "--adapter", "wn18rr"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert "3 tab-separated" in proc.stderr


def test_exit_code_for_config_errors(tmp_path):
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "kgaug.cli", "stats", "--data", str(tmp_path / "missing")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
