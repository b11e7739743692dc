"""Binary classifiers over 78-slot feature vectors.

Three model families are trained from scratch on top of numpy: L2
logistic regression (full-batch gradient descent), a bagged random forest
with Gini splits, and Gaussian naive Bayes. All trainers canonically sort
their input records first, so a model depends only on the multiset of
records and the seed, never on input order.

Models serialize to canonical JSON (sorted keys, shortest round-trip
floats); a load checks the format and feature-catalog versions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .metrics import CATALOG_VERSION, N_FEATURES

FORMAT_VERSION = 1

KIND_LOGISTIC = "logistic"
KIND_FOREST = "forest"
KIND_BAYES = "bayes"


class ModelError(ValueError):
    pass


@dataclass
class Scaler:
    mean: np.ndarray
    std: np.ndarray  # zero stds are stored as 1 so constant slots pass through centered

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) / self.std


@dataclass
class Model:
    kind: str
    scaler: Scaler
    params: dict
    hyper: dict
    catalog_version: str = CATALOG_VERSION


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    pr_auc: float
    tp: int
    fp: int
    tn: int
    fn: int
    undefined: tuple[str, ...] = ()

    @property
    def n_test(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass
class BootstrapReport:
    iterations: list[EvalReport]
    mean: dict[str, float]
    std: dict[str, float]
    seed: int

    def as_dict(self) -> dict:
        return {
            "iterations": [
                {
                    "precision": r.precision, "recall": r.recall, "f1": r.f1,
                    "pr_auc": r.pr_auc, "tp": r.tp, "fp": r.fp, "tn": r.tn, "fn": r.fn,
                    "undefined": list(r.undefined),
                }
                for r in self.iterations
            ],
            "mean": self.mean,
            "std": self.std,
            "seed": self.seed,
        }


def _as_arrays(records: Sequence) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray([r.features for r in records], dtype=np.float64)
    y = np.asarray([r.label for r in records], dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != N_FEATURES:
        raise ValueError(f"expected {N_FEATURES}-slot feature vectors")
    return X, y


def _canonical_order(records: Sequence) -> list:
    return sorted(records, key=lambda r: (tuple(r.features), r.label))


def fit_scaler(records: Sequence) -> Scaler:
    """Per-slot sample mean and standard deviation (n-1 denominator)."""
    if len(records) < 2:
        raise ValueError("need at least 2 records to fit a scaler")
    X, _ = _as_arrays(_canonical_order(records))
    mean = X.mean(axis=0)
    std = X.std(axis=0, ddof=1)
    std[std == 0.0] = 1.0
    return Scaler(mean=mean, std=std)


def _require_both_classes(y: np.ndarray) -> None:
    if not ((y == 0).any() and (y == 1).any()):
        raise ValueError("training data must contain both classes")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def logistic_loss_and_grad(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                           l2: float) -> tuple[float, np.ndarray, float]:
    """Mean log-loss with L2 penalty on the weights (bias unregularized)."""
    n = X.shape[0]
    p = _sigmoid(X @ w + b)
    eps = 1e-12
    loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
                 + 0.5 * l2 * float(w @ w))
    grad_w = X.T @ (p - y) / n + l2 * w
    grad_b = float(np.mean(p - y))
    return loss, grad_w, grad_b


DEFAULT_LOGISTIC_HYPER = {"lr": 0.01, "l2": 1e-4, "epochs": 200, "seed": 0}


def train_logistic(records: Sequence, hyper: dict | None = None) -> Model:
    h = {**DEFAULT_LOGISTIC_HYPER, **(hyper or {})}
    ordered = _canonical_order(records)
    X, y = _as_arrays(ordered)
    _require_both_classes(y)
    scaler = fit_scaler(ordered)
    Xs = scaler.transform(X)
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(int(h["epochs"])):
        _, gw, gb = logistic_loss_and_grad(w, b, Xs, y, float(h["l2"]))
        w -= h["lr"] * gw
        b -= h["lr"] * gb
    params = {"weights": [float(v) for v in w], "bias": float(b)}
    return Model(KIND_LOGISTIC, scaler, params, h)


DEFAULT_FOREST_HYPER = {"trees": 100, "max_depth": 8, "min_leaf": 2,
                        "features_per_split": 9, "seed": 0}


def _gini_best_split(X: np.ndarray, y: np.ndarray, feats: np.ndarray,
                     min_leaf: int) -> tuple[int, float] | None:
    n = len(y)
    total_pos = float(y.sum())
    best = None  # (impurity, feat, threshold)
    for f in feats:
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        ys = y[order]
        cum_pos = np.cumsum(ys)[:-1]
        left_n = np.arange(1, n)
        right_n = n - left_n
        valid = (xs[:-1] != xs[1:]) & (left_n >= min_leaf) & (right_n >= min_leaf)
        if not valid.any():
            continue
        lp = cum_pos / left_n
        rp = (total_pos - cum_pos) / right_n
        impurity = (left_n * 2 * lp * (1 - lp) + right_n * 2 * rp * (1 - rp)) / n
        impurity = np.where(valid, impurity, np.inf)
        k = int(np.argmin(impurity))
        if math.isinf(impurity[k]):
            continue
        cand = (float(impurity[k]), int(f), float((xs[k] + xs[k + 1]) / 2.0))
        if best is None or cand[0] < best[0]:
            best = cand
    if best is None:
        return None
    return best[1], best[2]


def _grow_tree(X: np.ndarray, y: np.ndarray, rng: np.random.Generator,
               depth: int, h: dict) -> dict:
    n = len(y)
    pos = float(y.mean()) if n else 0.0
    if depth >= h["max_depth"] or n < 2 * h["min_leaf"] or pos in (0.0, 1.0):
        return {"leaf": pos}
    m = min(int(h["features_per_split"]), X.shape[1])
    feats = np.sort(rng.choice(X.shape[1], size=m, replace=False))
    split = _gini_best_split(X, y, feats, int(h["min_leaf"]))
    if split is None:
        return {"leaf": pos}
    f, thr = split
    mask = X[:, f] < thr
    return {
        "slot": f,
        "threshold": thr,
        "left": _grow_tree(X[mask], y[mask], rng, depth + 1, h),
        "right": _grow_tree(X[~mask], y[~mask], rng, depth + 1, h),
    }


def train_forest(records: Sequence, hyper: dict | None = None) -> Model:
    h = {**DEFAULT_FOREST_HYPER, **(hyper or {})}
    ordered = _canonical_order(records)
    X, y = _as_arrays(ordered)
    _require_both_classes(y)
    scaler = fit_scaler(ordered)
    Xs = scaler.transform(X)
    n = X.shape[0]
    trees = []
    for t in range(int(h["trees"])):
        rng = np.random.default_rng(np.random.SeedSequence([int(h["seed"]), t]))
        idx = rng.integers(0, n, n)
        trees.append(_grow_tree(Xs[idx], y[idx], rng, 0, h))
    return Model(KIND_FOREST, scaler, {"trees": trees}, h)


BAYES_VAR_FLOOR = 1e-9


def train_bayes(records: Sequence, hyper: dict | None = None) -> Model:
    ordered = _canonical_order(records)
    X, y = _as_arrays(ordered)
    _require_both_classes(y)
    scaler = fit_scaler(ordered)
    Xs = scaler.transform(X)
    params: dict = {"priors": [], "means": [], "variances": []}
    for cls in (0, 1):
        rows = Xs[y == cls]
        params["priors"].append(float(len(rows) / len(Xs)))
        params["means"].append([float(v) for v in rows.mean(axis=0)])
        var = np.maximum(rows.var(axis=0), BAYES_VAR_FLOOR)
        params["variances"].append([float(v) for v in var])
    return Model(KIND_BAYES, scaler, params, dict(hyper or {}))


def _tree_predict(tree: dict, X: np.ndarray) -> np.ndarray:
    if "leaf" in tree:
        return np.full(X.shape[0], float(tree["leaf"]))
    out = np.empty(X.shape[0])
    mask = X[:, tree["slot"]] < tree["threshold"]
    out[mask] = _tree_predict(tree["left"], X[mask])
    out[~mask] = _tree_predict(tree["right"], X[~mask])
    return out


def predict_proba_many(model: Model, X: np.ndarray) -> np.ndarray:
    if model.catalog_version != CATALOG_VERSION:
        raise ModelError(
            f"model catalog {model.catalog_version!r} does not match extractor {CATALOG_VERSION!r}"
        )
    Xs = model.scaler.transform(np.asarray(X, dtype=np.float64))
    if model.kind == KIND_LOGISTIC:
        w = np.asarray(model.params["weights"])
        return _sigmoid(Xs @ w + model.params["bias"])
    if model.kind == KIND_FOREST:
        per_tree = np.stack([_tree_predict(t, Xs) for t in model.params["trees"]])
        return np.mean(per_tree, axis=0)
    if model.kind == KIND_BAYES:
        logs = []
        for cls in (0, 1):
            mean = np.asarray(model.params["means"][cls])
            var = np.asarray(model.params["variances"][cls])
            ll = -0.5 * (np.log(2 * np.pi * var) + (Xs - mean) ** 2 / var).sum(axis=1)
            logs.append(ll + math.log(model.params["priors"][cls]))
        stacked = np.stack(logs)
        top = stacked.max(axis=0)
        norm = top + np.log(np.exp(stacked - top).sum(axis=0))
        return np.exp(stacked[1] - norm)
    raise ModelError(f"unknown model kind {model.kind!r}")


def predict_proba(model: Model, features: Sequence[float]) -> float:
    return float(predict_proba_many(model, np.asarray([features]))[0])


def pr_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Average precision with step interpolation; ties keep input order."""
    labels = list(labels)
    n_pos = sum(1 for v in labels if v == 1)
    if n_pos == 0:
        raise ValueError("pr_auc needs at least one positive label")
    order = sorted(range(len(labels)), key=lambda i: -float(scores[i]))
    tp = 0
    ap = 0.0
    for rank, i in enumerate(order, start=1):
        if labels[i] == 1:
            tp += 1
            ap += (1.0 / n_pos) * (tp / rank)
    return ap


def evaluate_scores(scores: Sequence[float], labels: Sequence[int],
                    threshold: float = 0.5) -> EvalReport:
    tp = fp = tn = fn = 0
    for s, label in zip(scores, labels):
        predicted = s >= threshold
        if predicted and label == 1:
            tp += 1
        elif predicted and label == 0:
            fp += 1
        elif not predicted and label == 1:
            fn += 1
        else:
            tn += 1
    undefined: list[str] = []
    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision, undefined = 0.0, undefined + ["precision"]
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall, undefined = 0.0, undefined + ["recall"]
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    try:
        auc = pr_auc(scores, labels)
    except ValueError:
        auc, undefined = 0.0, undefined + ["pr_auc"]
    return EvalReport(precision, recall, f1, auc, tp, fp, tn, fn, tuple(undefined))


def evaluate(model: Model, records: Sequence, threshold: float = 0.5) -> EvalReport:
    if not records:
        raise ValueError("cannot evaluate on an empty record set")
    X, y = _as_arrays(records)
    scores = predict_proba_many(model, X)
    return evaluate_scores([float(s) for s in scores], [int(v) for v in y], threshold)


Trainer = Callable[[Sequence], Model]


def bootstrap_eval(trainer: Trainer, records: Sequence, iterations: int = 100,
                   seed: int = 0) -> BootstrapReport:
    """Out-of-sample bootstrap: train on n draws with replacement, evaluate
    on the records never drawn. Iterations whose train set is single-class
    (or whose out-of-bag set is empty) are redrawn, at most 10 times each."""
    if len(records) < 20:
        raise ValueError("bootstrap_eval needs at least 20 records")
    labels = [r.label for r in records]
    if not (0 in labels and 1 in labels):
        raise ValueError("bootstrap_eval needs both classes present")
    rng = np.random.default_rng(seed)
    n = len(records)
    reports: list[EvalReport] = []
    for _ in range(int(iterations)):
        for attempt in range(10):
            idx = rng.integers(0, n, n)
            drawn = set(idx.tolist())
            train = [records[i] for i in idx]
            oob = [records[i] for i in range(n) if i not in drawn]
            train_labels = {r.label for r in train}
            if len(train_labels) == 2 and oob:
                break
        else:
            raise ValueError("could not form a two-class bootstrap sample in 10 tries")
        model = trainer(train)
        reports.append(evaluate(model, oob))
    metrics = {
        "precision": [r.precision for r in reports],
        "recall": [r.recall for r in reports],
        "f1": [r.f1 for r in reports],
        "pr_auc": [r.pr_auc for r in reports],
        "n_test": [float(r.n_test) for r in reports],
    }
    mean = {k: float(np.mean(v)) for k, v in metrics.items()}
    std = {k: float(np.std(v)) for k, v in metrics.items()}
    return BootstrapReport(reports, mean, std, seed)


def model_to_json(model: Model) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "catalog_version": model.catalog_version,
        "kind": model.kind,
        "hyper": model.hyper,
        "scaler": {
            "mean": [float(v) for v in model.scaler.mean],
            "std": [float(v) for v in model.scaler.std],
        },
        "params": model.params,
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def save_model(model: Model, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model) + "\n")


def load_model(path: str) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ModelError(f"cannot read model file: {e}") from e
    except json.JSONDecodeError as e:
        raise ModelError(f"corrupt model file: {e}") from e
    if not isinstance(doc, dict):
        raise ModelError("corrupt model file: not an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelError(
            f"model format version {doc.get('format_version')!r} unsupported "
            f"(this build reads {FORMAT_VERSION})"
        )
    if doc.get("catalog_version") != CATALOG_VERSION:
        raise ModelError(
            f"model catalog {doc.get('catalog_version')!r} does not match "
            f"extractor catalog {CATALOG_VERSION!r}"
        )
    scaler = Scaler(
        mean=np.asarray(doc["scaler"]["mean"], dtype=np.float64),
        std=np.asarray(doc["scaler"]["std"], dtype=np.float64),
    )
    return Model(doc["kind"], scaler, doc["params"], doc.get("hyper", {}), doc["catalog_version"])


TRAINERS: dict[str, Trainer] = {
    KIND_LOGISTIC: train_logistic,
    KIND_FOREST: train_forest,
    KIND_BAYES: train_bayes,
}


def trainer_for(kind: str, seed: int | None = None) -> Trainer:
    if kind not in TRAINERS:
        raise ModelError(f"unknown model kind {kind!r}")
    if kind == KIND_BAYES:
        return train_bayes

    def train(records: Sequence) -> Model:
        hyper = {"seed": seed} if seed is not None else None
        return TRAINERS[kind](records, hyper)

    return train
