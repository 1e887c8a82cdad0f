"""Multiclass gradient-boosted decision trees (softmax objective).

Each boosting round fits one regression tree per class to the second-order
expansion of the softmax cross-entropy: gradient ``p - y`` and hessian
``p (1 - p)``. Leaf weight is ``-G / (H + lambda)`` and splits are chosen by
exact greedy search over midpoints between consecutive distinct values.
Samples with ``x[feature] < threshold`` go left.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

HESS_FLOOR = 1e-16


class ConfigError(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class DegenerateDataset(UserWarning):
    """Only one class present; a constant model is returned instead of boosting."""


@dataclass(frozen=True)
class TrainConfig:
    n_estimators: int = 100
    learning_rate: float = 0.1
    early_stopping_rounds: int | None = 10
    train_fraction: float = 0.7
    max_depth: int = 3
    reg_lambda: float = 1.0
    min_child_weight: float = 1.0
    objective: str = "multi:softprob"
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie strictly between 0 and 1")
        if self.n_estimators < 1 or self.max_depth < 0:
            raise ConfigError("n_estimators must be positive and max_depth non-negative")
        if self.learning_rate <= 0 or self.reg_lambda < 0 or self.min_child_weight < 0:
            raise ConfigError("learning_rate must be positive; reg_lambda and min_child_weight non-negative")
        if self.early_stopping_rounds is not None and self.early_stopping_rounds < 1:
            raise ConfigError("early_stopping_rounds must be positive or None")
        if self.objective != "multi:softprob":
            raise ConfigError(f"unsupported objective {self.objective!r}")


@dataclass
class DecisionTree:
    """Array-encoded binary tree; ``feature[i] == -1`` marks a leaf.

    ``value`` has shape (n_nodes, n_classes); only leaf rows are used.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def is_leaf(self, node: int) -> bool:
        return self.feature[node] < 0

    def used_features(self) -> list[int]:
        return sorted({int(f) for f in self.feature if f >= 0})

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of X."""
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        rows = np.arange(len(X))
        while active.any():
            idx = rows[active]
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] < self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self) -> dict[str, Any]:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "DecisionTree":
        return cls(
            np.asarray(doc["feature"], dtype=np.int64),
            np.asarray(doc["threshold"], dtype=float),
            np.asarray(doc["left"], dtype=np.int64),
            np.asarray(doc["right"], dtype=np.int64),
            np.asarray(doc["value"], dtype=float).reshape(len(doc["feature"]), -1),
        )

    @classmethod
    def leaf(cls, value: Sequence[float]) -> "DecisionTree":
        return cls(
            np.array([-1]), np.array([0.0]), np.array([-1]), np.array([-1]), np.asarray([value], dtype=float)
        )

    def check(self, n_features: int, n_classes: int) -> None:
        if self.value.shape != (self.n_nodes, n_classes):
            raise ValueError("leaf vectors must have one entry per class")
        seen = set()
        stack = [0]
        while stack:
            node = stack.pop()
            if node in seen or not 0 <= node < self.n_nodes:
                raise ValueError("tree children are not a well-formed tree")
            seen.add(node)
            if self.feature[node] >= 0:
                if self.feature[node] >= n_features:
                    raise ValueError("split feature index out of range")
                stack.extend([int(self.left[node]), int(self.right[node])])
        if len(seen) != self.n_nodes:
            raise ValueError("tree has unreachable nodes")


@dataclass
class TreeEnsemble:
    trees: list[DecisionTree]
    learning_rate: float
    n_classes: int
    base_scores: np.ndarray
    feature_names: list[str]
    classes: list[int] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.base_scores = np.asarray(self.base_scores, dtype=float)
        if not self.classes:
            self.classes = list(range(self.n_classes))

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def degenerate(self) -> bool:
        return bool(self.metadata.get("degenerate", False))

    def _matrix(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        return X

    def raw_scores(self, X) -> np.ndarray:
        X = self._matrix(X)
        total = np.zeros((len(X), self.n_classes))
        for tree in self.trees:
            total += tree.predict(X)
        return self.base_scores + self.learning_rate * total

    def predict_proba(self, X) -> np.ndarray:
        return softmax(self.raw_scores(X))

    def predict_index(self, X) -> np.ndarray:
        return np.argmax(self.raw_scores(X), axis=1)

    def predict(self, X) -> np.ndarray:
        return np.asarray(self.classes)[self.predict_index(X)]

    def class_index(self, label: int) -> int:
        return self.classes.index(label)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": "windkg-gbdt",
            "version": 1,
            "learning_rate": self.learning_rate,
            "n_classes": self.n_classes,
            "base_scores": self.base_scores.tolist(),
            "feature_names": list(self.feature_names),
            "classes": [int(c) for c in self.classes],
            "metadata": self.metadata,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "TreeEnsemble":
        ens = cls(
            [DecisionTree.from_dict(t) for t in doc["trees"]],
            float(doc["learning_rate"]),
            int(doc["n_classes"]),
            np.asarray(doc["base_scores"], dtype=float),
            list(doc["feature_names"]),
            [int(c) for c in doc.get("classes") or []],
            dict(doc.get("metadata") or {}),
        )
        for tree in ens.trees:
            tree.check(ens.n_features, ens.n_classes)
        return ens

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TreeEnsemble":
        return cls.from_dict(json.loads(text))


def softmax(raw: np.ndarray) -> np.ndarray:
    z = raw - raw.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def predict_proba(ensemble: TreeEnsemble, sample) -> np.ndarray:
    """Class probabilities for one sample (1-D) or a matrix of samples."""
    probs = ensemble.predict_proba(sample)
    return probs[0] if np.ndim(sample) == 1 else probs


def log_loss(probs: np.ndarray, y_index: np.ndarray) -> float:
    picked = probs[np.arange(len(y_index)), y_index]
    return float(-np.mean(np.log(np.clip(picked, 1e-300, None))))


# -- tree growing -------------------------------------------------------------


def _best_split(X: np.ndarray, g: np.ndarray, h: np.ndarray, cfg: TrainConfig):
    G, H = g.sum(), h.sum()
    lam = cfg.reg_lambda
    parent = G * G / (H + lam)
    best = (0.0, -1, 0.0)
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        gl = np.cumsum(g[order])[:-1]
        hl = np.cumsum(h[order])[:-1]
        distinct = xs[1:] > xs[:-1]
        ok = distinct & (hl >= cfg.min_child_weight) & (H - hl >= cfg.min_child_weight)
        if not ok.any():
            continue
        gain = gl**2 / (hl + lam) + (G - gl) ** 2 / (H - hl + lam) - parent
        gain = np.where(ok, gain, -np.inf)
        i = int(np.argmax(gain))
        if gain[i] > best[0] + 1e-12:
            lo, hi = xs[i], xs[i + 1]
            thr = (lo + hi) / 2.0
            if not lo < thr <= hi:
                thr = hi
            best = (float(gain[i]), f, float(thr))
    return best


def fit_tree(X: np.ndarray, g: np.ndarray, h: np.ndarray, cfg: TrainConfig, n_classes: int, k: int) -> DecisionTree:
    """Fit one regression tree whose leaves only carry class ``k``'s score."""
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(np.zeros(n_classes))
        return len(feature) - 1

    def grow(idx: np.ndarray, depth: int) -> int:
        node = new_node()
        gs, hs = g[idx], h[idx]
        if depth < cfg.max_depth and len(idx) >= 2:
            gain, f, thr = _best_split(X[idx], gs, hs, cfg)
            if f >= 0:
                mask = X[idx, f] < thr
                feature[node] = f
                threshold[node] = thr
                left[node] = grow(idx[mask], depth + 1)
                right[node] = grow(idx[~mask], depth + 1)
                return node
        value[node][k] = -gs.sum() / (hs.sum() + cfg.reg_lambda)
        return node

    grow(np.arange(len(X)), 0)
    return DecisionTree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=float),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=float),
    )


@dataclass
class TrainResult:
    ensemble: TreeEnsemble
    metrics: dict[str, Any]
    train_index: np.ndarray
    test_index: np.ndarray
    train_loss: list[float]
    test_loss: list[float]


def split_indices(n: int, train_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle split; both sides keep at least one row."""
    perm = np.random.default_rng(seed).permutation(n)
    n_train = min(max(int(round(train_fraction * n)), 1), n - 1)
    return np.sort(perm[:n_train]), np.sort(perm[n_train:])


def macro_f1(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    scores = []
    for c in np.unique(np.concatenate([y_true, y_pred])):
        tp = np.sum((y_pred == c) & (y_true == c))
        fp = np.sum((y_pred == c) & (y_true != c))
        fn = np.sum((y_pred != c) & (y_true == c))
        denom = 2 * tp + fp + fn
        scores.append(2 * tp / denom if denom else 0.0)
    return float(np.mean(scores))


def train(X, y, config: TrainConfig | None = None, feature_names: list[str] | None = None) -> TrainResult:
    config = config or TrainConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise DimensionMismatch("X must be 2-D with one label per row")
    if len(X) < 10:
        raise ConfigError("need at least 10 samples")
    if not np.all(np.isfinite(X)):
        raise ConfigError("feature values must be finite")
    names = list(feature_names) if feature_names is not None else [f"f{i}" for i in range(X.shape[1])]
    if len(names) != X.shape[1]:
        raise DimensionMismatch("one feature name per column required")

    train_idx, test_idx = split_indices(len(X), config.train_fraction, config.rng_seed)
    classes = sorted(int(c) for c in np.unique(y))
    meta = {"rng_seed": config.rng_seed, "train_fraction": config.train_fraction, "degenerate": False}

    if len(classes) == 1:
        warnings.warn(f"only class {classes[0]} present; returning a constant model", DegenerateDataset, stacklevel=2)
        meta["degenerate"] = True
        ens = TreeEnsemble([], config.learning_rate, 1, np.zeros(1), names, classes, meta)
        metrics = {"accuracy": 1.0, "macro_f1": 1.0, "rounds": 0, "best_round": 0,
                   "n_train": len(train_idx), "n_test": len(test_idx)}
        return TrainResult(ens, metrics, train_idx, test_idx, [0.0], [0.0])

    K = len(classes)
    yi = np.searchsorted(classes, y)
    Xtr, Xte = X[train_idx], X[test_idx]
    ytr, yte = yi[train_idx], yi[test_idx]
    Y = np.eye(K)[ytr]
    base = np.zeros(K)
    Ftr = np.tile(base, (len(Xtr), 1))
    Fte = np.tile(base, (len(Xte), 1))
    trees: list[DecisionTree] = []
    train_loss = [log_loss(softmax(Ftr), ytr)]
    test_loss = [log_loss(softmax(Fte), yte)]
    best_round, best_loss = 0, test_loss[0]

    for rnd in range(1, config.n_estimators + 1):
        P = softmax(Ftr)
        round_trees = []
        for k in range(K):
            g = P[:, k] - Y[:, k]
            h = np.maximum(P[:, k] * (1.0 - P[:, k]), HESS_FLOOR)
            round_trees.append(fit_tree(Xtr, g, h, config, K, k))
        for tree in round_trees:
            Ftr += config.learning_rate * tree.predict(Xtr)
            Fte += config.learning_rate * tree.predict(Xte)
        trees.extend(round_trees)
        train_loss.append(log_loss(softmax(Ftr), ytr))
        test_loss.append(log_loss(softmax(Fte), yte))
        if test_loss[-1] < best_loss:
            best_loss, best_round = test_loss[-1], rnd
        elif config.early_stopping_rounds is not None and rnd - best_round >= config.early_stopping_rounds:
            break

    rounds_run = len(train_loss) - 1
    if config.early_stopping_rounds is not None:
        trees = trees[: best_round * K]
    meta["rounds_run"] = rounds_run
    meta["best_round"] = best_round
    ens = TreeEnsemble(trees, config.learning_rate, K, base, names, classes, meta)
    pred = ens.predict_index(Xte)
    metrics = {
        "accuracy": float(np.mean(pred == yte)),
        "macro_f1": macro_f1(yte, pred),
        "rounds": rounds_run,
        "best_round": best_round,
        "n_train": len(train_idx),
        "n_test": len(test_idx),
    }
    return TrainResult(ens, metrics, train_idx, test_idx, train_loss, test_loss)
