"""Ranking and export helpers for attributions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .shapley import Attribution


@dataclass(frozen=True)
class FeatureShare:
    name: str
    index: int
    phi: float
    percent: float


@dataclass
class TopFeatures:
    items: list[FeatureShare]
    degenerate: bool = False

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def names(self) -> list[str]:
        return [item.name for item in self.items]


def rank_features(phi, names: list[str]) -> list[int]:
    """Feature indices by descending |phi|, ties by ascending index."""
    phi = np.asarray(phi, dtype=float)
    return sorted(range(len(phi)), key=lambda i: (-abs(phi[i]), i))


def top_k_features(attribution: Attribution, k: int = 10) -> TopFeatures:
    """Largest-|phi| features with their share of the top-k total, in percent.

    When every selected phi is zero the shares are all 0 and ``degenerate`` is set.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    order = rank_features(attribution.phi, attribution.feature_names)[:k]
    mags = [abs(float(attribution.phi[i])) for i in order]
    total = sum(mags)
    degenerate = total == 0.0
    items = [
        FeatureShare(
            attribution.feature_names[i],
            i,
            float(attribution.phi[i]),
            0.0 if degenerate else 100.0 * mag / total,
        )
        for i, mag in zip(order, mags)
    ]
    return TopFeatures(items, degenerate)


def pie_document(top: TopFeatures) -> dict:
    return {
        "kind": "feature_importance_pie",
        "degenerate": top.degenerate,
        "slices": [{"feature": item.name, "percent": item.percent, "phi": item.phi} for item in top],
    }


def export_force_plot_data(attribution: Attribution) -> dict:
    """Everything an external force-plot renderer needs.

    Only features with a non-zero phi are listed as contributions; the full
    sample and feature list are kept so the attribution can be rebuilt.
    """
    contributions = [
        {
            "feature": name,
            "index": i,
            "value": float(attribution.sample[i]),
            "phi": float(attribution.phi[i]),
            "sign": "positive" if attribution.phi[i] > 0 else "negative",
        }
        for i, name in enumerate(attribution.feature_names)
        if attribution.phi[i] != 0.0
    ]
    return {
        "kind": "force_plot",
        "target_class": attribution.target_class,
        "base_value": attribution.base_value,
        "prediction_value": attribution.prediction_value,
        "class_probability": attribution.class_probability,
        "feature_names": list(attribution.feature_names),
        "sample_values": [float(v) for v in attribution.sample],
        "contributions": contributions,
    }


def attribution_from_force_plot(doc: dict) -> Attribution:
    names = list(doc["feature_names"])
    phi = np.zeros(len(names))
    for item in doc["contributions"]:
        phi[item["index"]] = item["phi"]
    return Attribution(
        phi,
        float(doc["base_value"]),
        float(doc["prediction_value"]),
        int(doc["target_class"]),
        names,
        np.asarray(doc["sample_values"], dtype=float),
        class_probability=doc.get("class_probability"),
    )
