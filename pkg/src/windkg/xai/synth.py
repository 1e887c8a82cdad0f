"""Synthetic SCADA-like dataset with planted per-class signatures.

This is invented test plumbing, not turbine data. Every feature is Gaussian
noise around a typical operating value; each anomaly class shifts the mean of
its signature features by ``shift`` standard deviations. Feature names match
Feature nodes in the bundled ontology so predictions can be joined to it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

# name -> (mean, standard deviation)
FEATURES: dict[str, tuple[float, float]] = {
    "WindSpeed_mps_Mean": (8.0, 2.0),
    "Power_kW_Stdev": (150.0, 40.0),
    "Pitch_Deg_Max": (4.0, 1.5),
    "Pitch_Deg_Mean": (2.0, 1.0),
    "GearBoxTemperature_DegC_Mean": (55.0, 3.0),
    "GearBoxTemperature_DegC_Max": (60.0, 3.0),
    "GBoxOpShaftBearingTemp1_Stdev": (1.0, 0.3),
    "WindDirRel_Deg_Mean": (0.0, 4.0),
    "NacellePos_Deg_Stdev": (2.0, 0.6),
    "ReactivePower_kVAr_Max": (300.0, 60.0),
    "GenBearingtemp2_Mean": (45.0, 3.0),
    "NacInsidetemp_Min": (20.0, 2.5),
}
FEATURE_NAMES = list(FEATURES)

# class label (functional group fno) -> planted features
SIGNATURES: dict[int, list[str]] = {
    0: [],
    8: ["GearBoxTemperature_DegC_Mean", "GearBoxTemperature_DegC_Max", "GBoxOpShaftBearingTemp1_Stdev"],
    2: ["Pitch_Deg_Max", "Pitch_Deg_Mean"],
    6: ["WindDirRel_Deg_Mean", "NacellePos_Deg_Stdev"],
}
CLASS_WEIGHTS = {0: 0.4, 8: 0.2, 2: 0.2, 6: 0.2}
CLASS_NAMES = {0: "NoFault", 8: "Gearbox", 2: "PitchInterfaceAlarm", 6: "Yaw"}

DEFAULT_SEED = 20220722
DEFAULT_SAMPLES = 2000
DEFAULT_SHIFT = 3.0


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]

    def __len__(self) -> int:
        return len(self.y)


def generate(n_samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, shift: float = DEFAULT_SHIFT) -> Dataset:
    rng = np.random.default_rng(seed)
    labels = np.array(list(CLASS_WEIGHTS))
    y = rng.choice(labels, size=n_samples, p=np.array(list(CLASS_WEIGHTS.values())))
    means = np.array([m for m, _ in FEATURES.values()])
    sds = np.array([s for _, s in FEATURES.values()])
    X = means + sds * rng.standard_normal((n_samples, len(FEATURES)))
    for label, names in SIGNATURES.items():
        rows = y == label
        for name in names:
            j = FEATURE_NAMES.index(name)
            X[rows, j] += shift * sds[j]
    return Dataset(np.round(X, 6), y.astype(np.int64), list(FEATURE_NAMES))


def write_csv(dataset: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*dataset.feature_names, "label"])
        for row, label in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])


def _parse(lines) -> Dataset:
    reader = csv.reader(lines)
    header = next(reader)
    names = header[:-1]
    X, y = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} columns, found {len(row)}")
        X.append([float(v) for v in row[:-1]])
        y.append(int(row[-1]))
    X_arr = np.asarray(X, dtype=float).reshape(len(X), len(names))
    if not np.all(np.isfinite(X_arr)):
        raise ValueError("dataset contains non-finite values")
    return Dataset(X_arr, np.asarray(y, dtype=np.int64), names)


def read_csv(path) -> Dataset:
    with open(path, newline="", encoding="utf-8") as fh:
        return _parse(fh)


def bundled_dataset() -> Dataset:
    text = resources.files("windkg.data").joinpath("scada_synthetic.csv").read_text(encoding="utf-8")
    return _parse(text.splitlines())


def scenario_sample(label: int, shift: float = DEFAULT_SHIFT) -> np.ndarray:
    """A noise-free sample: every feature at its mean, signature features shifted."""
    x = np.array([m for m, _ in FEATURES.values()], dtype=float)
    for name in SIGNATURES[label]:
        j = FEATURE_NAMES.index(name)
        x[j] += shift * FEATURES[name][1]
    return x
