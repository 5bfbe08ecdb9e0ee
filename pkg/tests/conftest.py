import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from sketchshift.pipeline import PipelineConfig, fit_model
from sketchshift.ingest import write_ndjson
from sketchshift.synth import make_corpus


@pytest.fixture(scope="session")
def small_fit(tmp_path_factory):
    """A fast 4-category model shared by engine/service/cli tests."""
    tmp = tmp_path_factory.mktemp("smallfit")
    corpus = make_corpus(per_category=60, seed=11,
                         categories=("balloon", "mountain", "star", "window"))
    path = tmp / "small.ndjson"
    write_ndjson(corpus, path)
    config = PipelineConfig(data_paths=[path], cap=60, k_min=2, k_max=4, seed=3)
    return fit_model(config)
