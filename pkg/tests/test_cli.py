import json
import subprocess
import sys

import pytest

from moodwear.cli import main

FAST = ["--c-exponents", "2", "--gamma-exponents", "-1", "--folds", "3"]


@pytest.fixture(scope="module")
def study_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("study") / "data"
    code = main([
        "synth", "--out", str(out), "--days", "2", "--seed", "7",
        "--day-hours", "0.75", "--prompts", "4",
    ])
    assert code == 0
    return out


def test_synth_requires_seed(tmp_path, capsys):
    code = main(["synth", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "seed" in capsys.readouterr().err


def test_synth_then_ingest_clean(study_dir, capsys):
    code = main(["ingest", "--data", str(study_dir)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["sessions"] == 2
    assert summary["warnings"] == 0
    assert summary["orphans"] == 0


def test_features_table_has_205_columns(study_dir, tmp_path, capsys):
    out = tmp_path / "features.csv"
    code = main([
        "features", "--data", str(study_dir), "-o", str(out),
        "--window", "60", "--overlap", "0.10",
    ])
    assert code == 0
    header = out.read_text().splitlines()[0].split(",")
    assert len(header) == 205
    assert header[:2] == ["window_start", "window_end"]


@pytest.fixture(scope="module")
def labeled_csv(study_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("label") / "labeled.csv"
    code = main([
        "label", "--data", str(study_dir), "-o", str(out), "--ema-window", "30",
    ])
    assert code == 0
    return out


def test_label_output(labeled_csv):
    header = labeled_csv.read_text().splitlines()[0].split(",")
    assert header[-4:] == ["mood", "happiness", "activeness", "ema_answered_at"]
    assert len(labeled_csv.read_text().splitlines()) > 10


def test_train_and_predict(labeled_csv, study_dir, tmp_path, capsys):
    model = tmp_path / "model.json"
    code = main(["train", "--labeled", str(labeled_csv), "-o", str(model),
                 "--seed", "3", *FAST])
    assert code == 0
    assert json.loads(model.read_text())["format"] == "moodwear-svm/1"

    feats = tmp_path / "f.csv"
    assert main(["features", "--data", str(study_dir), "-o", str(feats)]) == 0
    preds = tmp_path / "p.csv"
    code = main(["predict", "--model", str(model), "--features", str(feats),
                 "-o", str(preds)])
    assert code == 0
    lines = preds.read_text().splitlines()
    assert lines[0] == "window_start,window_end,prediction"
    assert len(lines) == len(feats.read_text().splitlines())


def test_eval_split_missing_seed_exits_1(labeled_csv, tmp_path, capsys):
    code = main(["eval-split", "--labeled", str(labeled_csv),
                 "-o", str(tmp_path / "r.json")])
    assert code == 1
    err = capsys.readouterr().err
    assert "--seed" in err and "Usage" in err


def test_eval_split_deterministic_bytes(labeled_csv, tmp_path):
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for path in (r1, r2):
        code = main(["eval-split", "--labeled", str(labeled_csv), "-o", str(path),
                     "--seed", "11", "--repeats", "3", *FAST])
        assert code == 0
    assert r1.read_bytes() == r2.read_bytes()
    doc = json.loads(r1.read_text())
    assert doc["protocol"] == "split"
    assert 0.0 <= doc["mean"] <= 1.0


def test_eval_lodo(labeled_csv, tmp_path, capsys):
    out = tmp_path / "lodo.json"
    code = main(["eval-lodo", "--labeled", str(labeled_csv), "-o", str(out),
                 "--seed", "5", *FAST])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["protocol"] == "lodo"
    assert len(doc["accuracies"]) >= 1


def test_compare_windows(study_dir, tmp_path):
    out = tmp_path / "cmp.json"
    code = main(["compare-windows", "--data", str(study_dir), "-o", str(out),
                 "--seed", "9", "--windows", "30,60", "--repeats", "3", *FAST])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc["reports"]) == {"30.0", "60.0"}
    assert doc["anova"] is not None
    assert len(doc["plot_data"]) == 2


def test_unknown_flag_is_validation_error(capsys):
    assert main(["ingest", "--data", "x", "--bogus"]) == 1


def test_missing_data_dir_is_io_error(tmp_path, capsys):
    assert main(["ingest", "--data", str(tmp_path / "nope")]) == 2


def test_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "moodwear.cli", "eval-split", "--labeled", "x",
         "-o", "y"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert "seed" in proc.stderr
