import json
from pathlib import Path

import pytest

from bilocal.correlations import canonical_strategy
from bilocal.experiments import reported_strategy


@pytest.fixture
def canonical_file(tmp_path) -> Path:
    path = tmp_path / "canonical.json"
    path.write_text(json.dumps(canonical_strategy().to_json()))
    return path


@pytest.fixture
def reported_file(tmp_path) -> Path:
    path = tmp_path / "reported.json"
    path.write_text(json.dumps(reported_strategy().to_json()))
    return path
