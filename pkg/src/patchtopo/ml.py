"""Classification harness: stratified 5-fold CV, z-score standardization,
logistic regression and k-NN, the five reported metrics, and the
two-stage grid-search driver over patch size and stat combinations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DataError, NumericalError
from .patches import PATCH_SIZES, STAT_NAMES, PatchConfig

METRIC_NAMES = ("accuracy", "auc", "sensitivity", "specificity", "f1")

LR_GRID = (0.01, 0.1, 1.0)
KNN_GRID = (3, 5, 7)
SHALLOW_LR_GRID = (0.1,)
SHALLOW_KNN_GRID = (5,)


def stratified_kfold(labels: Sequence[int], k: int = 5, seed: int = 0) -> np.ndarray:
    """Deterministic stratified fold assignment, one fold id per sample.

    Within each class, samples are shuffled and dealt round-robin from a
    seeded random starting fold, so per-fold class counts differ from the
    proportional share by at most one sample.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0:
        raise DataError("labels must be a non-empty 1D sequence")
    rng = np.random.default_rng(seed)
    folds = np.full(labels.size, -1, dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.size < k:
            raise DataError(f"class {cls!r} has {idx.size} samples; needs >= {k}")
        rng.shuffle(idx)
        start = int(rng.integers(k))
        folds[idx] = (start + np.arange(idx.size)) % k
    return folds


def zscore_fit(train: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature mean and population std of the training matrix."""
    train = np.asarray(train, dtype=np.float64)
    if train.size == 0:
        raise DataError("empty training matrix")
    return train.mean(axis=0), train.std(axis=0)


def zscore_apply(x: np.ndarray, stats: tuple[np.ndarray, np.ndarray]) -> np.ndarray:
    """Standardize with train statistics; zero-variance features map to 0."""
    mean, std = stats
    safe = np.where(std == 0, 1.0, std)
    out = (np.asarray(x, dtype=np.float64) - mean) / safe
    out[:, std == 0] = 0.0
    return out


class LogisticRegressionGD:
    """Multinomial logistic regression fit by full-batch gradient descent.

    L2 penalty applies to weights only; zero initialization makes the fit
    deterministic. Binary problems are handled as 2-class multinomial.
    """

    def __init__(self, l2: float = 0.1, lr: float = 0.5, n_iter: int = 300):
        self.l2 = float(l2)
        self.lr = float(lr)
        self.n_iter = int(n_iter)
        self.weights: np.ndarray | None = None
        self.bias: np.ndarray | None = None

    def fit(self, x: np.ndarray, y: np.ndarray, n_classes: int) -> "LogisticRegressionGD":
        n, p = x.shape
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y] = 1.0
        w = np.zeros((p, n_classes))
        b = np.zeros(n_classes)
        for _ in range(self.n_iter):
            probs = _softmax(x @ w + b)
            grad_logits = (probs - onehot) / n
            w -= self.lr * (x.T @ grad_logits + self.l2 * w)
            b -= self.lr * grad_logits.sum(axis=0)
        self.weights, self.bias = w, b
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _softmax(x @ self.weights + self.bias)


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _knn_proba(train_x: np.ndarray, train_y: np.ndarray, test_x: np.ndarray,
               k: int, n_classes: int) -> np.ndarray:
    d2 = ((test_x[:, None, :] - train_x[None, :, :]) ** 2).sum(axis=2)
    # stable order: ties by training index
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
    probs = np.zeros((test_x.shape[0], n_classes))
    for c in range(n_classes):
        probs[:, c] = (train_y[nearest] == c).mean(axis=1)
    return probs


def train_predict(classifier: str, train_x: np.ndarray, train_y: np.ndarray,
                  test_x: np.ndarray, n_classes: int, seed: int = 0,
                  grid: Sequence | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Fit on the training fold and score the test fold.

    Returns (scores, predictions); scores are per-class probabilities.
    When the hyperparameter grid has more than one value, the value is
    chosen by stratified 3-fold CV on the training fold (mean AUC).
    """
    if np.unique(train_y).size < 2:
        raise NumericalError("training fold contains a single class")
    if classifier == "lr":
        grid = tuple(grid) if grid is not None else LR_GRID

        def build(val):
            return lambda xtr, ytr, xte: LogisticRegressionGD(l2=val).fit(
                xtr, ytr, n_classes).predict_proba(xte)
    elif classifier == "knn":
        grid = tuple(grid) if grid is not None else KNN_GRID

        def build(val):
            return lambda xtr, ytr, xte: _knn_proba(xtr, ytr, xte, min(val, len(xtr)), n_classes)
    else:
        raise DataError(f"unknown classifier '{classifier}' (expected lr or knn)")

    if len(grid) > 1:
        best_val, best_auc = grid[0], -1.0
        inner = stratified_kfold(train_y, k=3, seed=seed)
        for val in grid:
            run = build(val)
            aucs = []
            for f in range(3):
                tr, te = inner != f, inner == f
                if np.unique(train_y[tr]).size < 2 or np.unique(train_y[te]).size < 2:
                    continue
                probs = run(train_x[tr], train_y[tr], train_x[te])
                aucs.append(_auc_from_probs(train_y[te], probs, n_classes))
            score = float(np.mean(aucs)) if aucs else -1.0
            if score > best_auc:
                best_val, best_auc = val, score
        chosen = best_val
    else:
        chosen = grid[0]
    probs = build(chosen)(train_x, train_y, test_x)
    return probs, probs.argmax(axis=1)


def _rank_auc(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Mann-Whitney AUC with half credit for ties."""
    pos = scores[y_true == 1]
    neg = scores[y_true == 0]
    if pos.size == 0 or neg.size == 0:
        raise NumericalError("AUC undefined: only one class present")
    allv = np.concatenate([pos, neg])
    order = np.argsort(allv, kind="stable")
    ranks = np.empty(allv.size, dtype=np.float64)
    ranks[order] = np.arange(1, allv.size + 1)
    # average ranks over ties
    sorted_v = allv[order]
    i = 0
    while i < allv.size:
        j = i
        while j + 1 < allv.size and sorted_v[j + 1] == sorted_v[i]:
            j += 1
        if j > i:
            ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    r_pos = ranks[: pos.size].sum()
    return (r_pos - pos.size * (pos.size + 1) / 2) / (pos.size * neg.size)


def _auc_from_probs(y_true: np.ndarray, probs: np.ndarray, n_classes: int) -> float:
    if n_classes == 2:
        return _rank_auc((y_true == 1).astype(int), probs[:, 1])
    vals = []
    for c in range(n_classes):
        if (y_true == c).any() and (y_true != c).any():
            vals.append(_rank_auc((y_true == c).astype(int), probs[:, c]))
    if not vals:
        raise NumericalError("AUC undefined: only one class present")
    return float(np.mean(vals))


def compute_metrics(y_true: np.ndarray, probs: np.ndarray, y_pred: np.ndarray,
                    n_classes: int) -> dict[str, float]:
    """Accuracy, AUC, sensitivity, specificity, and F1 as percentages.

    Binary metrics treat class 1 as positive; multiclass sensitivity,
    specificity, F1, and AUC are macro-averaged one-vs-rest while
    accuracy stays the plain fraction correct.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if np.unique(y_true).size < 2:
        raise NumericalError("metrics undefined: y_true has a single class")
    acc = float((y_true == y_pred).mean())
    auc = _auc_from_probs(y_true, probs, n_classes)
    sens, spec, f1 = [], [], []
    classes = [1] if n_classes == 2 else list(range(n_classes))
    for c in classes:
        tp = float(((y_pred == c) & (y_true == c)).sum())
        fn = float(((y_pred != c) & (y_true == c)).sum())
        fp = float(((y_pred == c) & (y_true != c)).sum())
        tn = float(((y_pred != c) & (y_true != c)).sum())
        sens.append(tp / (tp + fn) if tp + fn else 0.0)
        spec.append(tn / (tn + fp) if tn + fp else 0.0)
        f1.append(2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0)
    return {
        "accuracy": 100.0 * acc,
        "auc": 100.0 * auc,
        "sensitivity": 100.0 * float(np.mean(sens)),
        "specificity": 100.0 * float(np.mean(spec)),
        "f1": 100.0 * float(np.mean(f1)),
    }


@dataclass
class CVReport:
    """Per-fold metrics with mean and std, plus provenance."""

    classifier: str
    config: str
    fold_metrics: np.ndarray  # (k, 5) in METRIC_NAMES order
    fold_assignments: np.ndarray
    seed: int

    @property
    def mean(self) -> np.ndarray:
        return self.fold_metrics.mean(axis=0)

    @property
    def std(self) -> np.ndarray:
        return self.fold_metrics.std(axis=0)

    def metric_mean(self, name: str) -> float:
        return float(self.mean[METRIC_NAMES.index(name)])

    def to_csv(self) -> str:
        lines = ["classifier,config,seed,fold," + ",".join(METRIC_NAMES) + ",test_indices"]
        for f in range(self.fold_metrics.shape[0]):
            test = ";".join(str(i) for i in np.flatnonzero(self.fold_assignments == f))
            vals = ",".join(repr(float(x)) for x in self.fold_metrics[f])
            lines.append(f"{self.classifier},{self.config},{self.seed},{f},{vals},{test}")
        for tag, row in (("mean", self.mean), ("std", self.std)):
            vals = ",".join(repr(float(x)) for x in row)
            lines.append(f"{self.classifier},{self.config},{self.seed},{tag},{vals},")
        return "\n".join(lines) + "\n"


def cross_validate(x: np.ndarray, y: np.ndarray, classifier: str, seed: int = 0,
                   shallow: bool = False, config: str = "", k: int = 5) -> CVReport:
    """Stratified k-fold CV with per-fold z-scoring fit on the train split."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n_classes = int(y.max()) + 1
    folds = stratified_kfold(y, k=k, seed=seed)
    if shallow:
        grid = SHALLOW_LR_GRID if classifier == "lr" else SHALLOW_KNN_GRID
    else:
        grid = None
    rows = []
    for f in range(k):
        tr, te = folds != f, folds == f
        stats = zscore_fit(x[tr])
        xtr, xte = zscore_apply(x[tr], stats), zscore_apply(x[te], stats)
        probs, preds = train_predict(classifier, xtr, y[tr], xte, n_classes,
                                     seed=seed + f, grid=grid)
        m = compute_metrics(y[te], probs, preds, n_classes)
        rows.append([m[name] for name in METRIC_NAMES])
    return CVReport(classifier=classifier, config=config,
                    fold_metrics=np.array(rows), fold_assignments=folds, seed=seed)


def enumerate_stats_trials() -> list[tuple[int, tuple[str, ...]]]:
    """The stage-1 grid: 8 patch sizes x 120 stat combinations = 960 trials."""
    combos = [c for r in (2, 3) for c in itertools.combinations(STAT_NAMES, r)]
    return [(n, c) for n in PATCH_SIZES for c in combos]


def enumerate_pca_trials() -> list[tuple[int, str]]:
    """The PCA track: one trial per patch size, d fixed to 4."""
    return [(n, "pca3") for n in PATCH_SIZES]


def top_fraction(scores: Sequence[float], fraction: float = 0.05) -> np.ndarray:
    """Indices of the top ``fraction`` of trials by score, ties by index."""
    scores = np.asarray(scores, dtype=np.float64)
    n_keep = max(1, int(round(len(scores) * fraction)))
    order = np.lexsort((np.arange(scores.size), -scores))
    return np.sort(order[:n_keep])


@dataclass
class TrialResult:
    trial_id: int
    patch_size: int
    encoder: str
    rank_score: float
    per_classifier: dict[str, CVReport] = field(default_factory=dict)
    error: str = ""


def run_trials(feature_builder: Callable[[PatchConfig], np.ndarray],
               labels: np.ndarray,
               trials: Sequence[tuple[int, object]],
               classifiers: Sequence[str] = ("lr", "knn"),
               seed: int = 0, shallow: bool = True,
               rank_metric: str = "auc") -> list[TrialResult]:
    """Run CV for each (patch size, encoder) trial; failures are recorded.

    ``feature_builder`` maps a PatchConfig to the dataset's feature
    matrix. The rank score is the mean of ``rank_metric`` across
    classifiers, -inf for failed trials.
    """
    labels = np.asarray(labels, dtype=np.int64)
    results = []
    for t, (n, enc) in enumerate(trials):
        if enc == "pca3":
            cfg = PatchConfig(patch_size=n, encoder=("pca", 3))
        else:
            cfg = PatchConfig(patch_size=n, encoder=("stats", tuple(enc)))
        res = TrialResult(trial_id=t, patch_size=n, encoder=cfg.describe(),
                          rank_score=-np.inf)
        try:
            x = feature_builder(cfg)
            scores = []
            for clf in classifiers:
                rep = cross_validate(x, labels, clf, seed=seed, shallow=shallow,
                                     config=cfg.describe())
                res.per_classifier[clf] = rep
                scores.append(rep.metric_mean(rank_metric))
            res.rank_score = float(np.mean(scores))
        except Exception as e:  # per-trial failures must not kill the sweep
            res.error = f"{type(e).__name__}: {e}"
        results.append(res)
    return results


def trials_to_csv(results: Sequence[TrialResult],
                  classifiers: Sequence[str] = ("lr", "knn")) -> str:
    """One row per trial: rank score, best classifier, per-classifier metrics."""
    cols = ["trial", "patch_size", "encoder", "rank_score", "best_classifier"]
    for clf in classifiers:
        for m in METRIC_NAMES:
            cols += [f"{clf}_{m}_mean", f"{clf}_{m}_std"]
    cols.append("error")
    lines = [",".join(cols)]
    for r in results:
        if r.per_classifier:
            best = max(r.per_classifier, key=lambda c: r.per_classifier[c].metric_mean("auc"))
        else:
            best = ""
        row = [str(r.trial_id), str(r.patch_size), f"\"{r.encoder}\"",
               repr(r.rank_score) if np.isfinite(r.rank_score) else "nan", best]
        for clf in classifiers:
            rep = r.per_classifier.get(clf)
            for i in range(len(METRIC_NAMES)):
                if rep is None:
                    row += ["nan", "nan"]
                else:
                    row += [repr(float(rep.mean[i])), repr(float(rep.std[i]))]
        row.append(f"\"{r.error}\"")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"
