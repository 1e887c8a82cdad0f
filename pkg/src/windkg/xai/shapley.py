"""Exact interventional Shapley values for tree ensembles.

The value of a coalition S is the mean, over background rows b, of the target
class's raw score at the hybrid input that takes the sample's values on S and
b's values elsewhere. All 2^M coalitions are evaluated, so M is capped at 20.

Evaluation is done per tree rather than per hybrid input: a tree only reads
the features it splits on (U), so its contribution to v(S) depends only on
S & U, and background rows only matter through the branch they take at each
split. Rows with identical branch patterns are merged and weighted by count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .boosting import DecisionTree, DimensionMismatch, TreeEnsemble

MAX_FEATURES = 20


class TooManyFeatures(ValueError):
    pass


class EmptyBackground(ValueError):
    pass


@dataclass
class Attribution:
    phi: np.ndarray
    base_value: float
    prediction_value: float
    target_class: int
    feature_names: list[str]
    sample: np.ndarray
    sample_id: str | None = None
    class_probability: float | None = None

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.sample = np.asarray(self.sample, dtype=float)


@dataclass
class _TreePlan:
    tree: DecisionTree
    internal: np.ndarray  # internal node ids
    used: list[int]  # split features, ascending
    patterns: np.ndarray  # (P, n_nodes) bool: branch-left decision of each distinct background pattern
    counts: np.ndarray  # (P,)
    leaf_values: np.ndarray  # (n_nodes, n_classes)


def _popcounts(n_bits: int) -> np.ndarray:
    masks = np.arange(1 << n_bits, dtype=np.int64)
    counts = np.zeros(len(masks), dtype=np.int64)
    for j in range(n_bits):
        counts += (masks >> j) & 1
    return counts


class ShapleyExplainer:
    """Caches background branch patterns so repeated explanations are cheap."""

    def __init__(self, ensemble: TreeEnsemble, background):
        background = np.asarray(background, dtype=float)
        if background.ndim == 1:
            background = background[None, :]
        if len(background) == 0:
            raise EmptyBackground("background must contain at least one row")
        M = ensemble.n_features
        if M > MAX_FEATURES:
            raise TooManyFeatures(f"exact enumeration supports at most {MAX_FEATURES} features, model has {M}")
        if background.shape[1] != M:
            raise DimensionMismatch(f"background rows need {M} features")
        self.ensemble = ensemble
        self.background = background
        self.n_features = M
        self._plans = [self._plan(tree) for tree in ensemble.trees]
        self._masks = np.arange(1 << M, dtype=np.int64)
        size = _popcounts(M)
        # weight of a coalition of size s not containing i: s! (M - s - 1)! / M!
        w = np.array([factorial(s) * factorial(M - s - 1) / factorial(M) for s in range(M)] + [0.0])
        self._weights = w[size]
        self._proj_cache: dict[tuple[int, ...], np.ndarray] = {}

    def _plan(self, tree: DecisionTree) -> _TreePlan:
        internal = np.flatnonzero(tree.feature >= 0)
        decisions = np.zeros((len(self.background), tree.n_nodes), dtype=bool)
        if len(internal):
            decisions[:, internal] = (
                self.background[:, tree.feature[internal]] < tree.threshold[internal]
            )
        patterns, counts = np.unique(decisions, axis=0, return_counts=True)
        return _TreePlan(tree, internal, tree.used_features(), patterns, counts, tree.value)

    def _projection(self, used: tuple[int, ...]) -> np.ndarray:
        """Map every global coalition mask to its index among subsets of ``used``."""
        proj = self._proj_cache.get(used)
        if proj is None:
            proj = np.zeros(len(self._masks), dtype=np.int64)
            for j, f in enumerate(used):
                proj |= ((self._masks >> f) & 1) << j
            self._proj_cache[used] = proj
        return proj

    def coalition_values(self, x, target_index: int) -> np.ndarray:
        """v(S) for every coalition mask S (bit i set = feature i from the sample)."""
        x = np.asarray(x, dtype=float)
        ens = self.ensemble
        n_bg = len(self.background)
        values = np.full(len(self._masks), float(ens.base_scores[target_index]))
        for plan in self._plans:
            tree = plan.tree
            leaf = plan.leaf_values[:, target_index]
            if not np.any(leaf):
                continue
            if len(plan.internal) == 0:
                values += ens.learning_rate * leaf[0]
                continue
            used = plan.used
            u = len(used)
            sub = np.arange(1 << u, dtype=np.int64)
            # for each internal node: does the sample's own value go left?
            x_left = np.zeros(tree.n_nodes, dtype=bool)
            x_left[plan.internal] = x[tree.feature[plan.internal]] < tree.threshold[plan.internal]
            # position of each node's split feature within ``used``
            slot = np.zeros(tree.n_nodes, dtype=np.int64)
            slot[plan.internal] = np.searchsorted(used, tree.feature[plan.internal])
            local = np.zeros(len(sub))
            for pattern, count in zip(plan.patterns, plan.counts):
                node = np.zeros(len(sub), dtype=np.int64)
                active = tree.feature[node] >= 0
                while active.any():
                    cur = node[active]
                    from_sample = ((sub[active] >> slot[cur]) & 1).astype(bool)
                    go_left = np.where(from_sample, x_left[cur], pattern[cur])
                    node[active] = np.where(go_left, tree.left[cur], tree.right[cur])
                    active = tree.feature[node] >= 0
                local += count * leaf[node]
            values += ens.learning_rate * (local / n_bg)[self._projection(tuple(used))]
        return values

    def explain(self, x, target_class: int | None = None) -> Attribution:
        """Attribution for one sample; target defaults to the predicted class label."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatch(f"sample needs {self.n_features} values")
        ens = self.ensemble
        if target_class is None:
            target_index = int(ens.predict_index(x)[0])
        else:
            target_index = ens.class_index(target_class)
        v = self.coalition_values(x, target_index)
        phi = np.zeros(self.n_features)
        for i in range(self.n_features):
            bit = 1 << i
            without = self._masks[(self._masks & bit) == 0]
            phi[i] = float(np.sum(self._weights[without] * (v[without | bit] - v[without])))
        full = len(self._masks) - 1
        prob = float(ens.predict_proba(x)[0, target_index])
        return Attribution(
            phi, float(v[0]), float(v[full]), int(ens.classes[target_index]), list(ens.feature_names), x,
            class_probability=prob,
        )


def shapley(ensemble: TreeEnsemble, sample, background, target_class: int | None = None) -> Attribution:
    return ShapleyExplainer(ensemble, background).explain(sample, target_class)
