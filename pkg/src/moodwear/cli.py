"""Command-line entry points for every pipeline stage.

Exit codes: 0 success, 1 validation error (bad flags or bad data),
2 I/O error. Structured logs go to stderr; primary outputs go to the
paths given on the command line.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import sys
from pathlib import Path

import click
import numpy as np

from . import evaluate, features, groundtruth, pipeline, svm, synth
from ._kernels import BACKEND
from .config import RunConfig
from .groundtruth import MoodLabel

log = logging.getLogger("moodwear")


def _configure_logging(verbose: bool = False) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def _require_seed(seed: int | None) -> int:
    if seed is None:
        raise click.UsageError("--seed is required for randomized commands")
    return seed


def _parse_exponents(text: str | None, default: tuple[int, ...]) -> tuple[int, ...]:
    if not text:
        return default
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise click.UsageError(f"bad exponent list: {text!r}") from None


def _parse_states(text: str) -> list[MoodLabel]:
    try:
        return [MoodLabel(part.strip().lower()) for part in text.split(",")]
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _write_json(path: str | Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


@click.group()
@click.option("--verbose", is_flag=True, help="debug logging on stderr")
def cli(verbose: bool) -> None:
    """Wrist-sensor mood pipeline."""
    _configure_logging(verbose)
    log.info("kernel backend: %s", BACKEND)


@cli.command("synth")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--days", default=15, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--day-hours", default=8.0, show_default=True)
@click.option("--day-start-hour", default=9.0, show_default=True)
@click.option("--prompts", default=5, show_default=True)
@click.option("--separability", default=1.0, show_default=True)
@click.option("--states", default="pleasure,sleepiness,contentment", show_default=True)
@click.option("--start-date", default="2019-04-01", show_default=True)
def cmd_synth(out_dir, days, seed, day_hours, day_start_hour, prompts, separability,
              states, start_date):
    """Generate a synthetic study with known ground truth."""
    seed = _require_seed(seed)
    labels = _parse_states(states)
    profile = synth.default_profile(tuple(labels), separability=separability)
    results = synth.generate_study(
        out_dir,
        days=days,
        profile=profile,
        states=labels,
        seed=seed,
        start_date=dt.date.fromisoformat(start_date),
        day_start_hour=day_start_hour,
        day_seconds=day_hours * 3600.0,
        prompts_per_day=prompts,
    )
    click.echo(json.dumps({
        "days": len(results),
        "emas": sum(len(r.emas) for r in results),
        "out": str(out_dir),
    }))


@cli.command("ingest")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("--ema", "ema_log", type=click.Path(), default=None)
@click.option("--tz", default="UTC", show_default=True)
@click.option("-o", "out_path", type=click.Path(), default=None)
def cmd_ingest(data_dir, ema_log, tz, out_path):
    """Validate a study directory and report what it contains."""
    config = RunConfig(tz=tz)
    bundles, orphans = pipeline.load_study(data_dir, config, ema_log=ema_log)
    manifest = {
        "sessions": [
            {
                "day": str(b.day),
                "session_id": b.recording.session_id,
                "channels": {
                    kind.value: len(ch.samples) for kind, ch in b.recording.channels.items()
                },
                "emas": len(b.emas),
            }
            for b in bundles
        ],
        "orphan_emas": len(orphans),
        "warnings": 0,
    }
    if out_path:
        _write_json(out_path, manifest)
    click.echo(json.dumps({
        "sessions": len(bundles),
        "emas": sum(len(b.emas) for b in bundles),
        "orphans": len(orphans),
        "warnings": 0,
    }))


@cli.command("features")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
@click.option("--window", default=60.0, show_default=True)
@click.option("--overlap", default=0.10, show_default=True)
@click.option("--tz", default="UTC", show_default=True)
@click.option("--basal-seconds", default=600.0, show_default=True)
def cmd_features(data_dir, out_path, window, overlap, tz, basal_seconds):
    """Extract the 203-column feature table for every covered window."""
    config = RunConfig(tz=tz, window_seconds=window, overlap=overlap,
                       basal_seconds=basal_seconds)
    bundles, _ = pipeline.load_study(data_dir, config)
    day_data = pipeline.extract_study(bundles, config)
    windows = [w for day in day_data for w in day.windows]
    features.write_feature_table(out_path, windows)
    click.echo(json.dumps({"windows": len(windows), "out": str(out_path)}))


@cli.command("label")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
@click.option("--ema", "ema_log", type=click.Path(), default=None)
@click.option("--ema-window", default=60.0, show_default=True, help="extension window, minutes")
@click.option("--window", default=60.0, show_default=True)
@click.option("--overlap", default=0.10, show_default=True)
@click.option("--tz", default="UTC", show_default=True)
@click.option("--min-fraction", default=0.10, show_default=True)
def cmd_label(data_dir, out_path, ema_log, ema_window, window, overlap, tz, min_fraction):
    """Build the labeled dataset (windows joined to extended EMA intervals)."""
    config = RunConfig(tz=tz, window_seconds=window, overlap=overlap,
                       ema_window_minutes=ema_window, min_class_fraction=min_fraction)
    kept, dropped = pipeline.build_labeled_dataset(data_dir, config, ema_log=ema_log)
    groundtruth.write_labeled_table(out_path, kept)
    click.echo(json.dumps({
        "examples": len(kept),
        "dropped_classes": [d.value for d in dropped],
        "out": str(out_path),
    }))


@cli.command("train")
@click.option("--labeled", "labeled_path", required=True, type=click.Path())
@click.option("-o", "model_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--target", default="mood", show_default=True,
              type=click.Choice(["mood", "happiness", "activeness"]))
@click.option("--folds", default=5, show_default=True)
@click.option("--c-exponents", default=None, help="comma-separated powers of 2")
@click.option("--gamma-exponents", default=None, help="comma-separated powers of 2")
@click.option("--tol", default=1e-3, show_default=True)
def cmd_train(labeled_path, model_path, seed, target, folds, c_exponents,
              gamma_exponents, tol):
    """Grid-search and train the one-vs-one RBF model on a labeled table."""
    seed = _require_seed(seed)
    config = RunConfig(
        seed=seed,
        folds=folds,
        tol=tol,
        c_exponents=_parse_exponents(c_exponents, RunConfig().c_exponents),
        gamma_exponents=_parse_exponents(gamma_exponents, RunConfig().gamma_exponents),
    )
    examples = groundtruth.read_labeled_table(labeled_path)
    if not examples:
        raise click.UsageError("labeled table is empty")
    x = np.stack([ex.features.values for ex in examples])
    y = np.asarray(
        [ex.mood.value if target == "mood" else ex.target(target) for ex in examples],
        dtype=object,
    )
    model = svm.fit_svm(
        x, y,
        c_grid=config.c_grid, gamma_grid=config.gamma_grid,
        folds=folds, seed=seed, tol=tol, target=target,
    )
    svm.save_model(model, model_path)
    click.echo(json.dumps({
        "classes": [str(c) for c in model.classes],
        "c": model.c,
        "gamma": model.gamma,
        "cv_accuracy": model.cv_accuracy,
        "out": str(model_path),
    }))


@cli.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path())
@click.option("--features", "features_path", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
def cmd_predict(model_path, features_path, out_path):
    """Predict labels for every row of a feature table."""
    model = svm.load_model(model_path)
    windows = features.read_feature_table(features_path)
    if not windows:
        raise click.UsageError("feature table is empty")
    predictions = model.predict_many(np.stack([w.values for w in windows]))
    with open(out_path, "w") as fh:
        fh.write("window_start,window_end,prediction\n")
        for w, p in zip(windows, predictions):
            fh.write(f"{w.start!r},{w.end!r},{p}\n")
    click.echo(json.dumps({"predictions": len(predictions), "out": str(out_path)}))


def _eval_config(folds, c_exponents, gamma_exponents, tol) -> RunConfig:
    return RunConfig(
        folds=folds,
        tol=tol,
        c_exponents=_parse_exponents(c_exponents, RunConfig().c_exponents),
        gamma_exponents=_parse_exponents(gamma_exponents, RunConfig().gamma_exponents),
    )


@cli.command("eval-split")
@click.option("--labeled", "labeled_path", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--target", default="mood", show_default=True,
              type=click.Choice(["mood", "happiness", "activeness"]))
@click.option("--ratio", default=0.75, show_default=True)
@click.option("--repeats", default=5, show_default=True)
@click.option("--folds", default=5, show_default=True)
@click.option("--c-exponents", default=None)
@click.option("--gamma-exponents", default=None)
@click.option("--tol", default=1e-3, show_default=True)
def cmd_eval_split(labeled_path, out_path, seed, target, ratio, repeats, folds,
                   c_exponents, gamma_exponents, tol):
    """Random 75/25 evaluation repeated with per-repeat sub-seeds."""
    seed = _require_seed(seed)
    config = _eval_config(folds, c_exponents, gamma_exponents, tol)
    examples = groundtruth.read_labeled_table(labeled_path)
    report = evaluate.eval_split(
        examples, target=target, ratio=ratio, repeats=repeats, seed=seed,
        config=config.grid_config(),
    )
    _write_json(out_path, report.to_dict())
    click.echo(
        f"{target} split accuracy: mean={report.mean:.4f} std={report.std:.4f} "
        f"({repeats} repeats)"
    )


@cli.command("eval-lodo")
@click.option("--labeled", "labeled_path", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--target", default="mood", show_default=True,
              type=click.Choice(["mood", "happiness", "activeness"]))
@click.option("--folds", default=5, show_default=True)
@click.option("--c-exponents", default=None)
@click.option("--gamma-exponents", default=None)
@click.option("--tol", default=1e-3, show_default=True)
def cmd_eval_lodo(labeled_path, out_path, seed, target, folds, c_exponents,
                  gamma_exponents, tol):
    """Leave-one-day-out evaluation."""
    seed = _require_seed(seed)
    config = _eval_config(folds, c_exponents, gamma_exponents, tol)
    examples = groundtruth.read_labeled_table(labeled_path)
    report = evaluate.eval_lodo(examples, target=target, seed=seed,
                                config=config.grid_config())
    _write_json(out_path, report.to_dict())
    click.echo(
        f"{target} leave-one-day-out accuracy: mean={report.mean:.4f} "
        f"std={report.std:.4f} over {len(report.accuracies)} days"
        + (f" ({len(report.skipped_days)} skipped)" if report.skipped_days else "")
    )


@cli.command("compare-windows")
@click.option("--data", "data_dir", required=True, type=click.Path())
@click.option("-o", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.option("--windows", default="30,60,120", show_default=True, help="minutes")
@click.option("--target", default="mood", show_default=True,
              type=click.Choice(["mood", "happiness", "activeness"]))
@click.option("--tz", default="UTC", show_default=True)
@click.option("--repeats", default=5, show_default=True)
@click.option("--folds", default=5, show_default=True)
@click.option("--c-exponents", default=None)
@click.option("--gamma-exponents", default=None)
@click.option("--tol", default=1e-3, show_default=True)
def cmd_compare_windows(data_dir, out_path, seed, windows, target, tz, repeats,
                        folds, c_exponents, gamma_exponents, tol):
    """Evaluate several EMA extension windows and test the differences."""
    seed = _require_seed(seed)
    try:
        window_list = tuple(float(w) for w in windows.split(","))
    except ValueError:
        raise click.UsageError(f"bad window list: {windows!r}") from None
    config = _eval_config(folds, c_exponents, gamma_exponents, tol)
    run = RunConfig(tz=tz)
    bundles, _ = pipeline.load_study(data_dir, run)
    day_data = pipeline.extract_study(bundles, run)
    comparison = evaluate.compare_windows(
        day_data, windows_minutes=window_list, target=target, seed=seed,
        repeats=repeats, config=config.grid_config(),
    )
    _write_json(out_path, comparison.to_dict())
    for w in comparison.window_minutes:
        r = comparison.reports[w]
        click.echo(f"window {w:g} min: mean={r.mean:.4f} std={r.std:.4f}")
    if comparison.anova:
        click.echo(
            f"ANOVA: F={comparison.anova.f_stat:.4f} p={comparison.anova.p_value:.4g}"
        )


@cli.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ema-log", "ema_log", required=True, type=click.Path())
@click.option("--static-dir", type=click.Path(), default=None)
@click.option("--model", "model_path", type=click.Path(), default=None)
@click.option("--features-csv", "features_path", type=click.Path(), default=None)
def cmd_serve(port, host, ema_log, static_dir, model_path, features_path):
    """Serve the EMA collection endpoint and the web client."""
    import uvicorn

    from .service import create_app

    app = create_app(
        ema_log,
        static_dir=static_dir,
        model_path=model_path,
        features_path=features_path,
    )
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
