from pathlib import Path

import pytest

# original lib
import common as com

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def presets():
    return com.load_presets(ROOT / com.MAPS_YAML)


@pytest.fixture
def in_repo(monkeypatch):
    """
    run from the repository root so that baseline.yaml, maps.yaml and the
    palette resolve the way they do for run.py.
    """
    monkeypatch.chdir(ROOT)
    return ROOT
