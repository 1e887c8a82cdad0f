import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS as ACCEPTANCE_RESULTS  # noqa: E402
from windkg.ontology import build_bundled  # noqa: E402
from windkg.xai import ShapleyExplainer, TrainConfig, train  # noqa: E402
from windkg.xai.synth import bundled_dataset  # noqa: E402



@pytest.fixture(scope="session")
def kg():
    return build_bundled()


@pytest.fixture(scope="session")
def dataset():
    return bundled_dataset()


@pytest.fixture(scope="session")
def trained(dataset):
    return train(dataset.X, dataset.y, TrainConfig(), dataset.feature_names)


@pytest.fixture(scope="session")
def explainer(trained, dataset):
    return ShapleyExplainer(trained.ensemble, dataset.X[trained.train_index])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})")
