from .boosting import (
    ConfigError,
    DecisionTree,
    DegenerateDataset,
    DimensionMismatch,
    TrainConfig,
    TrainResult,
    TreeEnsemble,
    predict_proba,
    softmax,
    train,
)
from .explain import (
    FeatureShare,
    TopFeatures,
    attribution_from_force_plot,
    export_force_plot_data,
    pie_document,
    rank_features,
    top_k_features,
)
from .shapley import Attribution, EmptyBackground, ShapleyExplainer, TooManyFeatures, shapley

__all__ = [
    "Attribution",
    "ConfigError",
    "DecisionTree",
    "DegenerateDataset",
    "DimensionMismatch",
    "EmptyBackground",
    "FeatureShare",
    "ShapleyExplainer",
    "TooManyFeatures",
    "TopFeatures",
    "TrainConfig",
    "TrainResult",
    "TreeEnsemble",
    "attribution_from_force_plot",
    "export_force_plot_data",
    "pie_document",
    "predict_proba",
    "rank_features",
    "shapley",
    "softmax",
    "top_k_features",
    "train",
]
