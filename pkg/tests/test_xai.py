import json
import random
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_shapley, random_ensemble, raw_loops, tree_walk
from windkg.xai import (
    Attribution,
    DecisionTree,
    DegenerateDataset,
    DimensionMismatch,
    EmptyBackground,
    ShapleyExplainer,
    TooManyFeatures,
    TrainConfig,
    TreeEnsemble,
    attribution_from_force_plot,
    export_force_plot_data,
    top_k_features,
    train,
)
from windkg.xai.synth import scenario_sample


def _stump(feature, threshold, left, right, n_classes=2, k=0):
    lv = np.zeros((3, n_classes))
    lv[1, k], lv[2, k] = left, right
    return DecisionTree(np.array([feature, -1, -1]), np.array([threshold, 0.0, 0.0]),
                        np.array([1, -1, -1]), np.array([2, -1, -1]), lv)


def _additive_model():
    trees = [_stump(0, 0.5, 0.0, 1.0), _stump(1, 0.5, 0.0, 2.0)]
    return TreeEnsemble(trees, 1.0, 2, np.zeros(2), ["x1", "x2", "unused"])


def _attr(phi):
    names = [f"f{i}" for i in range(len(phi))]
    return Attribution(np.array(phi, dtype=float), 0.0, float(sum(phi)), 0, names, np.zeros(len(phi)))


# -- boosting ----------------------------------------------------------------

def test_single_class_gives_constant_model():
    X = np.random.default_rng(0).normal(size=(40, 3))
    with pytest.warns(DegenerateDataset):
        result = train(X, np.full(40, 8))
    ens = result.ensemble
    assert ens.degenerate and ens.classes == [8]
    assert np.all(ens.predict(X) == 8)
    assert np.allclose(ens.predict_proba(X), 1.0)


def test_xor_is_learned():
    rng = np.random.default_rng(3)
    X = rng.uniform(-1, 1, size=(600, 2))
    y = ((X[:, 0] > 0) ^ (X[:, 1] > 0)).astype(int)
    result = train(X, y, TrainConfig(max_depth=2, n_estimators=200))
    assert result.metrics["accuracy"] > 0.95


def test_constant_ensemble_is_uniform():
    ens = TreeEnsemble([], 0.1, 4, np.zeros(4), ["a", "b"])
    assert np.allclose(ens.predict_proba(np.zeros((3, 2))), 0.25)


def test_predictions_match_tree_walk():
    rng = random.Random(9)
    for _ in range(10):
        ens = random_ensemble(rng, 5, n_classes=3)
        X = np.array([[rng.uniform(-1.5, 1.5) for _ in range(5)] for _ in range(20)])
        raw = ens.raw_scores(X)
        for row, x in zip(raw, X):
            assert np.allclose(row, raw_loops(ens, list(x)), atol=1e-12)
        for tree in ens.trees:
            assert np.allclose(tree.predict(X[:1])[0], tree_walk(tree, X[0]))
        probs = ens.predict_proba(X)
        assert np.allclose(probs.sum(axis=1), 1.0) and np.all((probs >= 0) & (probs <= 1))
        assert np.array_equal(ens.predict_index(X), raw.argmax(axis=1))


def test_dimension_mismatch(trained):
    with pytest.raises(DimensionMismatch):
        trained.ensemble.predict_proba(np.zeros(3))
    with pytest.raises(DimensionMismatch):
        train(np.zeros((20, 2)), np.zeros(19))


def test_training_loss_non_increasing(trained):
    losses = trained.train_loss
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_training_is_deterministic(dataset, trained):
    again = train(dataset.X, dataset.y, TrainConfig(), dataset.feature_names)
    assert again.ensemble.dumps() == trained.ensemble.dumps()


def test_model_document_round_trip(trained, dataset):
    text = trained.ensemble.dumps()
    back = TreeEnsemble.loads(text)
    assert back.dumps() == text
    assert np.array_equal(back.raw_scores(dataset.X[:50]), trained.ensemble.raw_scores(dataset.X[:50]))


def test_early_stopping_keeps_best_round(trained):
    meta = trained.ensemble.metadata
    assert len(trained.ensemble.trees) == meta["best_round"] * trained.ensemble.n_classes
    assert meta["rounds_run"] >= meta["best_round"]


# -- shapley -----------------------------------------------------------------

def test_additive_model_closed_form():
    attr = ShapleyExplainer(_additive_model(), np.zeros((1, 3))).explain(np.array([1.0, 1.0, 7.0]), target_class=0)
    assert np.allclose(attr.phi, [1.0, 2.0, 0.0], atol=1e-12)
    assert attr.base_value == 0.0 and attr.prediction_value == 3.0


def test_constant_model_has_zero_phi():
    ens = TreeEnsemble([DecisionTree.leaf([0.3, -0.3])], 0.1, 2, np.zeros(2), ["a", "b", "c"])
    attr = ShapleyExplainer(ens, np.random.default_rng(1).normal(size=(5, 3))).explain(np.ones(3))
    assert np.all(attr.phi == 0.0)


def test_symmetric_features_share_credit():
    trees = [_stump(0, 0.0, 0.0, 1.0), _stump(1, 0.0, 0.0, 1.0)]
    ens = TreeEnsemble(trees, 1.0, 2, np.zeros(2), ["a", "b"])
    attr = ShapleyExplainer(ens, np.array([[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])).explain(np.ones(2), 0)
    assert attr.phi[0] == pytest.approx(attr.phi[1], abs=1e-12)


def test_explainer_guards():
    ens = TreeEnsemble([], 0.1, 2, np.zeros(2), [f"f{i}" for i in range(21)])
    with pytest.raises(TooManyFeatures):
        ShapleyExplainer(ens, np.zeros((1, 21)))
    with pytest.raises(EmptyBackground):
        ShapleyExplainer(_additive_model(), np.zeros((0, 3)))
    with pytest.raises(DimensionMismatch):
        ShapleyExplainer(_additive_model(), np.zeros((1, 3))).explain(np.zeros(2))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_exact_shapley_matches_permutation_oracle(seed, m):
    rng = random.Random(seed)
    unused = rng.randrange(m)
    ens = random_ensemble(rng, m, n_classes=2, n_trees=3, usable=[j for j in range(m) if j != unused])
    background = [[rng.uniform(-1, 1) for _ in range(m)] for _ in range(rng.randint(1, 4))]
    x = [rng.uniform(-1, 1) for _ in range(m)]
    attr = ShapleyExplainer(ens, np.array(background)).explain(np.array(x), target_class=1)
    assert np.allclose(attr.phi, brute_force_shapley(ens, x, background, 1), atol=1e-9)
    assert attr.phi[unused] == 0.0
    assert attr.phi.sum() + attr.base_value == pytest.approx(attr.prediction_value, abs=1e-9)


def test_attributions_are_deterministic(explainer):
    x = scenario_sample(8)
    a, b = explainer.explain(x), explainer.explain(x)
    assert np.array_equal(a.phi, b.phi) and a.target_class == b.target_class == 8


# -- ranking and export ------------------------------------------------------

def test_top_k_shares():
    top = top_k_features(_attr([4, 3, 2, 1]), k=2)
    assert [(i.name, i.phi) for i in top] == [("f0", 4.0), ("f1", 3.0)]
    assert [i.percent for i in top] == pytest.approx([57.142857142857, 42.857142857143])
    assert not top.degenerate


def test_top_k_ties_sign_and_clamp():
    top = top_k_features(_attr([-2, 2, 0.5]), k=10)
    assert top.names() == ["f0", "f1", "f2"]
    assert sum(i.percent for i in top) == pytest.approx(100.0)


def test_top_k_all_zero_is_degenerate():
    top = top_k_features(_attr([0, 0, 0]), k=2)
    assert top.degenerate and [i.percent for i in top] == [0.0, 0.0]


def test_zero_attribution_force_plot():
    doc = export_force_plot_data(_attr([0, 0]))
    assert doc["contributions"] == []


def test_gearbox_force_plot(explainer):
    attr = explainer.explain(scenario_sample(8))
    doc = json.loads(json.dumps(export_force_plot_data(attr)))
    positive = {c["feature"] for c in doc["contributions"] if c["sign"] == "positive"}
    assert "GearBoxTemperature_DegC_Mean" in positive
    back = attribution_from_force_plot(doc)
    assert np.array_equal(back.phi, attr.phi) and np.array_equal(back.sample, attr.sample)
    assert (back.base_value, back.prediction_value, back.target_class) == \
        (attr.base_value, attr.prediction_value, attr.target_class)
    assert back.feature_names == attr.feature_names


def test_no_warnings_on_normal_training(dataset):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        train(dataset.X[:200], dataset.y[:200], TrainConfig(n_estimators=3), dataset.feature_names)
