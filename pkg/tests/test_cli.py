import json
import subprocess
import sys

import pytest

from retroplan.cli import main

CLI = [sys.executable, "-m", "retroplan.cli"]
FAST_TRAIN = ["--epochs", "6", "--width", "32", "--hidden-layers", "2",
              "--batch-size", "128", "--patience", "6"]


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert main(["synth", "--n", "400", "--seed", "3", "--out", str(d / "data.csv")]) == 0
    assert main([
        "train", "--data", str(d / "data.csv"), "--model", "mlp", "--seed", "1",
        "--out", str(d / "model.llem"), *FAST_TRAIN,
    ]) == 0
    return d


def test_synth_writes_loadable_dataset(workdir, schema):
    from retroplan.dataset import load_dataset

    data = load_dataset(workdir / "data.csv", schema)
    assert len(data) == 400


def test_train_then_evaluate(workdir, capsys):
    code = main(["evaluate", "--data", str(workdir / "data.csv"),
                 "--checkpoint", str(workdir / "model.llem")])
    assert code == 0
    out = capsys.readouterr().out
    metrics = json.loads(out.splitlines()[0])
    assert 0.0 <= metrics["accuracy"] <= 1.0
    assert metrics["n_test"] == 40


def test_tables_writes_four_files(workdir, capsys):
    out_dir = workdir / "tables"
    code = main([
        "tables", "--data", str(workdir / "data.csv"), "--models", "decision_tree,mlp",
        "--seeds", "2", "--out-dir", str(out_dir), *FAST_TRAIN,
    ])
    assert code == 0
    for name in ("table2.csv", "table2.txt", "table3.csv", "table3.txt"):
        assert (out_dir / name).exists()
    lines = (out_dir / "table2.csv").read_text().strip().splitlines()
    assert len(lines) == 3  # header + two model rows


def test_tables_config_file(workdir, capsys):
    cfg = workdir / "experiment.json"
    cfg.write_text(json.dumps({
        "data": str(workdir / "data.csv"),
        "models": ["decision_tree"],
        "seeds": [1],
        "epochs": 3, "width": 24, "hidden_layers": 2,
    }), encoding="utf-8")
    out_dir = workdir / "tables_cfg"
    assert main(["tables", "--config", str(cfg), "--out-dir", str(out_dir)]) == 0
    lines = (out_dir / "table2.csv").read_text().strip().splitlines()
    assert lines[1].startswith("decision_tree,")
    assert lines[1].endswith(",1")  # a single seed, from the config file


def test_plan_command(workdir, capsys, schema):
    from retroplan.synthetic import generate_synthetic

    profile = generate_synthetic(1, seed=5, schema=schema).rows[0].profile
    ppath = workdir / "profile.json"
    ppath.write_text(json.dumps(profile), encoding="utf-8")
    code = main(["plan", "--checkpoint", str(workdir / "model.llem"),
                 "--profile", str(ppath), "--budget", "5000",
                 "--categories", "door,solar_panels"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("base rating:")


def test_plan_empty_categories(workdir, capsys, schema):
    from retroplan.synthetic import generate_synthetic

    profile = generate_synthetic(1, seed=5, schema=schema).rows[0].profile
    ppath = workdir / "profile.json"
    ppath.write_text(json.dumps(profile), encoding="utf-8")
    code = main(["plan", "--checkpoint", str(workdir / "model.llem"),
                 "--profile", str(ppath), "--categories", ""])
    assert code == 0
    out = capsys.readouterr().out
    assert len([l for l in out.splitlines() if l and not l.startswith(("base", "rating"))]) == 1


def test_error_is_machine_readable(workdir, capsys):
    code = main(["evaluate", "--data", str(workdir / "data.csv"),
                 "--checkpoint", str(workdir / "nothere.llem")])
    assert code == 2
    err = capsys.readouterr().err
    payload = json.loads(err.strip().splitlines()[-1])
    assert "error" in payload and "message" in payload


def test_subprocess_entrypoint_help():
    out = subprocess.run(CLI + ["--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for cmd in ("synth", "train", "evaluate", "tables", "plan", "serve"):
        assert cmd in out.stdout


def test_missing_required_flag_exits_nonzero():
    out = subprocess.run(CLI + ["train"], capture_output=True, text=True)
    assert out.returncode != 0
