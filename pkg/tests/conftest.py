from __future__ import annotations

import pytest

from actrsim.experiment import builtin_model_text
from actrsim.model import parse_model


@pytest.fixture(scope="session")
def rps_model():
    return parse_model(builtin_model_text())
