import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from siskit.fixtures import load_fixture


@pytest.fixture(scope="session")
def deployment_model():
    return load_fixture("deployment")


@pytest.fixture(scope="session")
def case_study_model():
    return load_fixture("case_study")


@pytest.fixture(scope="session")
def normalization_model():
    return load_fixture("normalization_reference")
