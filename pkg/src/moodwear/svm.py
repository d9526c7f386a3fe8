"""RBF-kernel SVM: scaling, dual training, one-vs-one multiclass, grid search.

The binary solver runs two-variable working-set descent (maximal violating
pair) on the soft-margin dual over a precomputed kernel matrix; the hot loop
lives in ``moodwear._kernels``. Multiclass is one-vs-one with majority
voting; hyperparameters come from stratified cross-validated grid search.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._kernels import smo_solve

log = logging.getLogger(__name__)

MODEL_FORMAT = "moodwear-svm/1"

C_GRID = tuple(2.0**e for e in range(-5, 16, 2))
GAMMA_GRID = tuple(2.0**e for e in range(-15, 4, 2))
DEFAULT_TOL = 1e-3
DEFAULT_FOLDS = 5


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class Scaler:
    """Per-feature min/max mapping of the training data onto [-1, 1]."""

    mins: np.ndarray
    maxs: np.ndarray

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.mins.size:
            raise ValueError(f"expected {self.mins.size} features, got {x.shape[-1]}")
        span = self.maxs - self.mins
        with np.errstate(invalid="ignore", divide="ignore"):
            scaled = 2.0 * (x - self.mins) / span - 1.0
        return np.where(span == 0, 0.0, scaled)


def fit_scaler(features: np.ndarray) -> Scaler:
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[0] == 0:
        raise TrainingError("scaler needs a non-empty 2-D training matrix")
    return Scaler(mins=features.min(axis=0), maxs=features.max(axis=0))


def apply_scaler(scaler: Scaler, x: np.ndarray) -> np.ndarray:
    return scaler.transform(x)


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """K(x, z) = exp(−γ‖x−z‖²) for all row pairs."""
    return np.exp(-gamma * squared_distances(a, b))


def squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d2 = (
        np.sum(a**2, axis=1)[:, None]
        + np.sum(b**2, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


@dataclass(frozen=True)
class BinarySvm:
    """One trained pairwise machine; f(x) = Σ coef_i K(sv_i, x) − rho."""

    support_vectors: np.ndarray
    coef: np.ndarray  # alpha_i * y_i for the stored vectors
    rho: float
    gamma: float
    c: float
    pos_label: object
    neg_label: object

    def decision_values(self, x_scaled: np.ndarray) -> np.ndarray:
        x_scaled = np.atleast_2d(np.asarray(x_scaled, dtype=float))
        k = rbf_kernel(x_scaled, self.support_vectors, self.gamma)
        return k @ self.coef - self.rho

    @property
    def alpha(self) -> np.ndarray:
        return np.abs(self.coef)

    @property
    def sv_labels(self) -> np.ndarray:
        return np.sign(self.coef)


def _solve_on_kernel(
    kernel: np.ndarray, y: np.ndarray, c: float, tol: float
) -> tuple[np.ndarray, float]:
    n = y.size
    max_iter = max(200_000, 200 * n)
    alpha, rho, iterations, converged = smo_solve(kernel, y, c, tol, max_iter)
    if not converged:
        log.warning("solver hit the iteration cap (%d) before tolerance", iterations)
    return alpha, rho


def train_binary(
    features: np.ndarray,
    y: np.ndarray,
    c: float,
    gamma: float,
    tol: float = DEFAULT_TOL,
    pos_label: object = 1,
    neg_label: object = -1,
) -> BinarySvm:
    """Train one soft-margin machine on scaled features with labels ±1."""
    features = np.asarray(features, dtype=float)
    y = np.asarray(y, dtype=float)
    if c <= 0 or gamma <= 0:
        raise TrainingError("C and gamma must be positive")
    if not np.isfinite(features).all():
        raise TrainingError("non-finite feature value in training data")
    if not ((y == 1) | (y == -1)).all():
        raise TrainingError("labels must be ±1")
    if (y == 1).sum() == 0 or (y == -1).sum() == 0:
        raise TrainingError("both classes must be present")

    kernel = rbf_kernel(features, features, gamma)
    alpha, rho = _solve_on_kernel(kernel, y, c, tol)
    sv = alpha > 0
    return BinarySvm(
        support_vectors=features[sv].copy(),
        coef=(alpha * y)[sv],
        rho=rho,
        gamma=gamma,
        c=c,
        pos_label=pos_label,
        neg_label=neg_label,
    )


@dataclass
class SvmModel:
    """Scaler plus the one-vs-one machine set and chosen hyperparameters."""

    scaler: Scaler
    classes: list
    machines: list[BinarySvm]
    c: float
    gamma: float
    target: str = "mood"
    seed: int | None = None
    cv_accuracy: float | None = None

    def predict(self, x_raw: np.ndarray):
        return self.predict_many(np.atleast_2d(np.asarray(x_raw, dtype=float)))[0]

    def predict_many(self, x_raw: np.ndarray) -> list:
        x = self.scaler.transform(np.atleast_2d(np.asarray(x_raw, dtype=float)))
        votes = np.zeros((x.shape[0], len(self.classes)), dtype=int)
        index = {label: i for i, label in enumerate(self.classes)}
        for machine in self.machines:
            decisions = machine.decision_values(x)
            pos = index[machine.pos_label]
            neg = index[machine.neg_label]
            votes[:, pos] += decisions > 0
            votes[:, neg] += decisions <= 0
        # argmax keeps the first (earliest-listed) class on ties
        winners = np.argmax(votes, axis=1)
        return [self.classes[w] for w in winners]


def predict(model: SvmModel, x_raw: np.ndarray):
    return model.predict(x_raw)


def _pair_machines_on_kernel(
    kernel: np.ndarray,
    labels: np.ndarray,
    classes: list,
    c: float,
    tol: float,
) -> list[tuple[object, object, np.ndarray, np.ndarray, float]]:
    """Train every class pair on a precomputed kernel; returns sparse pieces.

    Each element is (pos, neg, support_row_indices, coef, rho) with row
    indices into the kernel's training set.
    """
    out = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            pos, neg = classes[i], classes[j]
            mask = (labels == pos) | (labels == neg)
            idx = np.flatnonzero(mask)
            y = np.where(labels[idx] == pos, 1.0, -1.0)
            if (y == 1).sum() == 0 or (y == -1).sum() == 0:
                continue
            sub = kernel[np.ix_(idx, idx)]
            alpha, rho = _solve_on_kernel(sub, y, c, tol)
            sv = alpha > 0
            out.append((pos, neg, idx[sv], (alpha * y)[sv], rho))
    return out


def assign_folds(labels: np.ndarray, folds: int, seed: int, classes: list) -> np.ndarray:
    """Stratified fold index per example; deterministic in (seed, indices)."""
    rng = np.random.default_rng([int(seed), len(labels), folds])
    fold = np.empty(len(labels), dtype=int)
    for class_idx, label in enumerate(classes):
        idx = np.flatnonzero(labels == label)
        if idx.size < folds:
            log.info(
                "class %r has %d members for %d folds; stratification is best effort",
                label,
                idx.size,
                folds,
            )
        perm = rng.permutation(idx)
        fold[perm] = np.arange(perm.size) % folds
    return fold


def grid_search(
    features: np.ndarray,
    labels: np.ndarray,
    c_grid: tuple[float, ...] = C_GRID,
    gamma_grid: tuple[float, ...] = GAMMA_GRID,
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> tuple[float, float, float]:
    """Cross-validated accuracy over the (C, γ) grid; ties prefer small C then small γ.

    ``features`` are expected already scaled. Returns (C, γ, cv_accuracy).
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels)
    n = len(labels)
    if n < folds:
        raise TrainingError(f"{n} examples cannot fill {folds} folds")
    classes = ordered_classes(labels)
    if len(classes) < 2:
        raise TrainingError("grid search needs at least 2 classes")

    fold_of = assign_folds(labels, folds, seed, classes)
    distances = squared_distances(features, features)
    correct = np.zeros((len(c_grid), len(gamma_grid)), dtype=int)

    for fold in range(folds):
        val = np.flatnonzero(fold_of == fold)
        train = np.flatnonzero(fold_of != fold)
        if val.size == 0 or train.size == 0:
            continue
        y_train = labels[train]
        y_val = labels[val]
        for gi, gamma in enumerate(gamma_grid):
            k_train = np.exp(-gamma * distances[np.ix_(train, train)])
            k_val = np.exp(-gamma * distances[np.ix_(val, train)])
            for ci, c in enumerate(c_grid):
                machines = _pair_machines_on_kernel(k_train, y_train, classes, c, tol)
                predictions = _vote_on_kernel(k_val, machines, classes, y_train)
                correct[ci, gi] += int(np.sum(predictions == y_val))

    best = (-1.0, 0, 0)
    for ci in range(len(c_grid)):
        for gi in range(len(gamma_grid)):
            acc = correct[ci, gi] / n
            if acc > best[0]:
                best = (acc, ci, gi)
    accuracy, ci, gi = best
    return c_grid[ci], gamma_grid[gi], accuracy


def _vote_on_kernel(
    k_eval: np.ndarray,
    machines: list[tuple[object, object, np.ndarray, np.ndarray, float]],
    classes: list,
    train_labels: np.ndarray,
) -> np.ndarray:
    index = {label: i for i, label in enumerate(classes)}
    votes = np.zeros((k_eval.shape[0], len(classes)), dtype=int)
    if not machines:
        # nothing trainable: fall back to the training majority class
        counts = [int(np.sum(train_labels == label)) for label in classes]
        majority = int(np.argmax(counts))
        return np.asarray([classes[majority]] * k_eval.shape[0])
    for pos, neg, sv_idx, coef, rho in machines:
        decisions = k_eval[:, sv_idx] @ coef - rho
        votes[:, index[pos]] += decisions > 0
        votes[:, index[neg]] += decisions <= 0
    winners = np.argmax(votes, axis=1)
    return np.asarray([classes[w] for w in winners])


def ordered_classes(labels: np.ndarray) -> list:
    """Unique labels in a deterministic order (sorted by string form for
    enums/strings, numerically for numbers)."""
    unique = list(dict.fromkeys(labels.tolist()))
    try:
        return sorted(unique)
    except TypeError:
        return sorted(unique, key=str)


def fit_svm(
    features: np.ndarray,
    labels,
    c_grid: tuple[float, ...] = C_GRID,
    gamma_grid: tuple[float, ...] = GAMMA_GRID,
    folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    target: str = "mood",
) -> SvmModel:
    """Full training pipeline: fit scaler, grid-search (C, γ), train one-vs-one."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels)
    scaler = fit_scaler(features)
    scaled = scaler.transform(features)
    c, gamma, cv_accuracy = grid_search(
        scaled, labels, c_grid=c_grid, gamma_grid=gamma_grid, folds=folds, seed=seed, tol=tol
    )
    classes = ordered_classes(labels)
    kernel = rbf_kernel(scaled, scaled, gamma)
    machines = [
        BinarySvm(
            support_vectors=scaled[sv_idx].copy(),
            coef=coef,
            rho=rho,
            gamma=gamma,
            c=c,
            pos_label=pos,
            neg_label=neg,
        )
        for pos, neg, sv_idx, coef, rho in _pair_machines_on_kernel(
            kernel, labels, classes, c, tol
        )
    ]
    return SvmModel(
        scaler=scaler,
        classes=classes,
        machines=machines,
        c=c,
        gamma=gamma,
        target=target,
        seed=seed,
        cv_accuracy=cv_accuracy,
    )


def save_model(model: SvmModel, path: str | Path) -> None:
    doc = {
        "format": MODEL_FORMAT,
        "target": model.target,
        "classes": model.classes,
        "c": model.c,
        "gamma": model.gamma,
        "seed": model.seed,
        "cv_accuracy": model.cv_accuracy,
        "scaler": {"min": model.scaler.mins.tolist(), "max": model.scaler.maxs.tolist()},
        "machines": [
            {
                "pos": m.pos_label,
                "neg": m.neg_label,
                "rho": m.rho,
                "coef": m.coef.tolist(),
                "support_vectors": m.support_vectors.tolist(),
            }
            for m in model.machines
        ],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def load_model(path: str | Path) -> SvmModel:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format: {doc.get('format')!r}")
    scaler = Scaler(
        mins=np.asarray(doc["scaler"]["min"], dtype=float),
        maxs=np.asarray(doc["scaler"]["max"], dtype=float),
    )
    machines = [
        BinarySvm(
            support_vectors=np.asarray(m["support_vectors"], dtype=float),
            coef=np.asarray(m["coef"], dtype=float),
            rho=float(m["rho"]),
            gamma=float(doc["gamma"]),
            c=float(doc["c"]),
            pos_label=m["pos"],
            neg_label=m["neg"],
        )
        for m in doc["machines"]
    ]
    return SvmModel(
        scaler=scaler,
        classes=doc["classes"],
        machines=machines,
        c=float(doc["c"]),
        gamma=float(doc["gamma"]),
        target=doc["target"],
        seed=doc["seed"],
        cv_accuracy=doc["cv_accuracy"],
    )
