"""Evaluation protocols and the supporting statistics.

Random 75/25 splits repeated with sub-seeds, leave-one-day-out folds,
one-way ANOVA with the F-distribution tail via the regularized incomplete
beta function, Tukey(-Kramer) multiple comparison against the studentized
range quantile, and the cross-window comparison that ties them together.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc
from scipy.stats import studentized_range

from .groundtruth import LabeledExample, filter_rare_classes
from .svm import C_GRID, DEFAULT_FOLDS, DEFAULT_TOL, GAMMA_GRID, fit_svm

log = logging.getLogger(__name__)

TUKEY_ALPHAS = (0.05, 0.01, 0.001)


class EvalError(ValueError):
    pass


@dataclass
class EvalReport:
    target: str
    protocol: str  # "split" | "lodo"
    accuracies: list[float]
    mean: float
    std: float
    config: dict
    confusions: list[dict] = field(default_factory=list)
    skipped_days: list[str] = field(default_factory=list)
    redraws: int = 0

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "protocol": self.protocol,
            "accuracies": self.accuracies,
            "mean": self.mean,
            "std": self.std,
            "config": self.config,
            "confusions": self.confusions,
            "skipped_days": self.skipped_days,
            "redraws": self.redraws,
        }


def _mean_std(values: list[float]) -> tuple[float, float]:
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return mean, std


def _target_values(examples: list[LabeledExample], target: str) -> np.ndarray:
    if target == "mood":
        return np.asarray([ex.mood.value for ex in examples], dtype=object)
    return np.asarray([ex.target(target) for ex in examples], dtype=object)


def _feature_matrix(examples: list[LabeledExample]) -> np.ndarray:
    return np.stack([ex.features.values for ex in examples])


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, classes: list) -> dict:
    index = {label: i for i, label in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=int)
    for truth, pred in zip(y_true, y_pred):
        counts[index[truth], index[pred]] += 1
    return {"classes": list(classes), "counts": counts.tolist()}


def _grid_kwargs(config: dict) -> dict:
    return {
        "c_grid": config.get("c_grid", C_GRID),
        "gamma_grid": config.get("gamma_grid", GAMMA_GRID),
        "folds": config.get("folds", DEFAULT_FOLDS),
        "tol": config.get("tol", DEFAULT_TOL),
    }


def _sub_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def eval_split(
    examples: list[LabeledExample],
    target: str = "mood",
    ratio: float = 0.75,
    repeats: int = 5,
    seed: int = 0,
    config: dict | None = None,
    max_redraws: int = 100,
) -> EvalReport:
    """Repeated random train/test splits; full pipeline fit on each training part."""
    config = dict(config or {})
    y = _target_values(examples, target)
    x = _feature_matrix(examples)
    classes = sorted(set(y.tolist()), key=str)
    if len(classes) < 2:
        raise EvalError("need at least 2 classes after rare-class filtering")
    n = len(examples)
    n_train = int(round(ratio * n))
    if n_train < 1 or n - n_train < 1:
        raise EvalError(f"split ratio {ratio} leaves an empty part for n={n}")

    grid = _grid_kwargs(config)
    accuracies: list[float] = []
    confusions: list[dict] = []
    redraws = 0
    for r in range(repeats):
        train_idx = test_idx = None
        for attempt in range(max_redraws):
            rng = np.random.default_rng([seed, r, attempt])
            perm = rng.permutation(n)
            cand_train, cand_test = perm[:n_train], perm[n_train:]
            if set(y[cand_train].tolist()) == set(classes):
                train_idx, test_idx = cand_train, cand_test
                break
            redraws += 1
            log.info("repeat %d: redraw %d (class missing from training part)", r, attempt)
        if train_idx is None:
            raise EvalError(f"no split kept all classes in training after {max_redraws} redraws")

        model = fit_svm(
            x[train_idx], y[train_idx], seed=_sub_seed(seed, r), target=target, **grid
        )
        predictions = np.asarray(model.predict_many(x[test_idx]), dtype=object)
        accuracies.append(float(np.mean(predictions == y[test_idx])))
        confusions.append(confusion_matrix(y[test_idx], predictions, model.classes))

    mean, std = _mean_std(accuracies)
    config_echo = {"ratio": ratio, "repeats": repeats, "seed": seed, **config}
    return EvalReport(
        target=target,
        protocol="split",
        accuracies=accuracies,
        mean=mean,
        std=std,
        config=config_echo,
        confusions=confusions,
        redraws=redraws,
    )


def eval_lodo(
    examples: list[LabeledExample],
    target: str = "mood",
    seed: int = 0,
    config: dict | None = None,
) -> EvalReport:
    """Leave-one-day-out: each day is tested on a model trained on the others.

    A test day whose labels were never seen in the training days is skipped
    and reported, not scored zero.
    """
    config = dict(config or {})
    days = sorted({ex.day for ex in examples}, key=str)
    if len(days) < 2:
        raise EvalError("leave-one-day-out needs at least 2 days")
    y = _target_values(examples, target)
    x = _feature_matrix(examples)
    day_of = np.asarray([str(ex.day) for ex in examples], dtype=object)

    grid = _grid_kwargs(config)
    accuracies: list[float] = []
    confusions: list[dict] = []
    skipped: list[str] = []
    for k, day in enumerate(str(d) for d in days):
        test_mask = day_of == day
        train_idx = np.flatnonzero(~test_mask)
        test_idx = np.flatnonzero(test_mask)
        test_labels = set(y[test_idx].tolist())
        train_labels = set(y[train_idx].tolist())
        if not test_labels <= train_labels:
            skipped.append(day)
            log.info("day %s skipped: labels %s unseen in training", day, test_labels - train_labels)
            continue
        model = fit_svm(
            x[train_idx], y[train_idx], seed=_sub_seed(seed, k), target=target, **grid
        )
        predictions = np.asarray(model.predict_many(x[test_idx]), dtype=object)
        accuracies.append(float(np.mean(predictions == y[test_idx])))
        confusions.append(confusion_matrix(y[test_idx], predictions, model.classes))

    if not accuracies:
        raise EvalError("every day was skipped; no usable leave-one-day-out fold")
    mean, std = _mean_std(accuracies)
    return EvalReport(
        target=target,
        protocol="lodo",
        accuracies=accuracies,
        mean=mean,
        std=std,
        config={"seed": seed, **config},
        confusions=confusions,
        skipped_days=skipped,
    )


@dataclass(frozen=True)
class AnovaResult:
    f_stat: float
    p_value: float
    degenerate: bool = False


def one_way_anova(groups: list[list[float]]) -> AnovaResult:
    """Fixed-effects one-way ANOVA with the exact F-distribution tail."""
    if len(groups) < 2:
        raise EvalError("ANOVA needs at least 2 groups")
    if any(len(g) < 2 for g in groups):
        raise EvalError("every group needs at least 2 values")
    sizes = [len(g) for g in groups]
    total_n = sum(sizes)
    if total_n < len(groups) + 1:
        raise EvalError("too few observations for ANOVA")

    arrays = [np.asarray(g, dtype=float) for g in groups]
    grand = float(np.concatenate(arrays).mean())
    ss_between = sum(len(g) * (g.mean() - grand) ** 2 for g in arrays)
    ss_within = sum(float(np.sum((g - g.mean()) ** 2)) for g in arrays)
    df_between = len(groups) - 1
    df_within = total_n - len(groups)
    ms_between = ss_between / df_between
    ms_within = ss_within / df_within

    if ms_within == 0:
        if ms_between > 0:
            return AnovaResult(f_stat=math.inf, p_value=0.0, degenerate=True)
        return AnovaResult(f_stat=0.0, p_value=1.0, degenerate=True)
    f_stat = ms_between / ms_within
    p = float(betainc(df_within / 2.0, df_between / 2.0, df_within / (df_within + df_between * f_stat)))
    return AnovaResult(f_stat=float(f_stat), p_value=p)


@dataclass(frozen=True)
class PairDecision:
    i: int
    j: int
    q_stat: float
    significant: bool


@dataclass(frozen=True)
class TukeyResult:
    alpha: float
    q_critical: float
    pairs: tuple[PairDecision, ...]
    degenerate: bool = False


def tukey_hsd(groups: list[list[float]], alpha: float) -> TukeyResult:
    """Tukey(-Kramer) pairwise comparison at the given significance level."""
    if len(groups) < 2:
        raise EvalError("Tukey needs at least 2 groups")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    sizes = [len(g) for g in arrays]
    total_n = sum(sizes)
    k = len(arrays)
    df_within = total_n - k
    ss_within = sum(float(np.sum((g - g.mean()) ** 2)) for g in arrays)
    ms_within = ss_within / df_within
    means = [float(g.mean()) for g in arrays]

    if ms_within == 0:
        pairs = tuple(
            PairDecision(i, j, math.inf if means[i] != means[j] else 0.0, means[i] != means[j])
            for i in range(k)
            for j in range(i + 1, k)
        )
        return TukeyResult(alpha=alpha, q_critical=math.nan, pairs=pairs, degenerate=True)

    q_critical = float(studentized_range.ppf(1.0 - alpha, k, df_within))
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            q = abs(means[i] - means[j]) / math.sqrt(
                ms_within / 2.0 * (1.0 / sizes[i] + 1.0 / sizes[j])
            )
            pairs.append(PairDecision(i, j, q, q > q_critical))
    return TukeyResult(alpha=alpha, q_critical=q_critical, pairs=tuple(pairs))


@dataclass
class WindowComparison:
    target: str
    window_minutes: list[float]
    reports: dict[float, EvalReport]
    anova: AnovaResult | None
    tukey: dict[float, TukeyResult]
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "window_minutes": self.window_minutes,
            "reports": {str(w): r.to_dict() for w, r in self.reports.items()},
            "anova": None
            if self.anova is None
            else {
                "f_stat": self.anova.f_stat,
                "p_value": self.anova.p_value,
                "degenerate": self.anova.degenerate,
            },
            "tukey": {
                str(alpha): {
                    "q_critical": res.q_critical,
                    "degenerate": res.degenerate,
                    "pairs": [
                        {
                            "windows": [self.window_minutes[p.i], self.window_minutes[p.j]],
                            "q_stat": p.q_stat,
                            "significant": p.significant,
                        }
                        for p in res.pairs
                    ],
                }
                for alpha, res in self.tukey.items()
            },
            "flags": self.flags,
            "plot_data": [
                {
                    "window_minutes": w,
                    "mean": self.reports[w].mean,
                    "std": self.reports[w].std,
                }
                for w in self.window_minutes
            ],
        }


def compare_windows(
    day_data: list,
    windows_minutes: tuple[float, ...] = (30.0, 60.0, 120.0),
    target: str = "mood",
    seed: int = 0,
    min_fraction: float = 0.10,
    ratio: float = 0.75,
    repeats: int = 5,
    config: dict | None = None,
) -> WindowComparison:
    """Re-label and re-evaluate per extension window, then test the differences.

    ``day_data`` items carry per-day feature windows, EMAs and span (see
    ``pipeline.DayData``); the 60-second feature extraction is reused across
    extension windows.
    """
    from .groundtruth import extend_emas, label_windows  # local import avoids cycle noise

    reports: dict[float, EvalReport] = {}
    flags: list[str] = []
    for w in windows_minutes:
        labeled: list[LabeledExample] = []
        for day in day_data:
            intervals = extend_emas(day.emas, w, day.span)
            labeled.extend(label_windows(day.windows, intervals, day=day.day))
        kept, dropped = filter_rare_classes(labeled, min_fraction)
        if dropped:
            flags.append(f"window {w}: dropped rare classes {[d.value for d in dropped]}")
        reports[w] = eval_split(
            kept, target=target, ratio=ratio, repeats=repeats, seed=seed, config=config
        )

    anova = None
    tukey: dict[float, TukeyResult] = {}
    if len(windows_minutes) >= 2:
        groups = [reports[w].accuracies for w in windows_minutes]
        anova = one_way_anova(groups)
        tukey = {alpha: tukey_hsd(groups, alpha) for alpha in TUKEY_ALPHAS}
    else:
        flags.append("single window setting: no comparison statistics")
    return WindowComparison(
        target=target,
        window_minutes=list(windows_minutes),
        reports=reports,
        anova=anova,
        tukey=tukey,
        flags=flags,
    )
