import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import golden_A, golden_instance, golden_V  # noqa: E402


@pytest.fixture(scope="session")
def paper_instance():
    return golden_instance()


@pytest.fixture(scope="session")
def paper_V():
    return golden_V()


@pytest.fixture(scope="session")
def paper_A():
    return golden_A()
