from pathlib import Path

import pytest

from potionlab.content import DistortionSpec, default_pack
from potionlab.engine import Difficulty, SessionConfig

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def pack():
    return default_pack()


@pytest.fixture
def easy_config():
    return SessionConfig()


@pytest.fixture
def hard_config():
    return SessionConfig(difficulty=Difficulty.HARD)


@pytest.fixture
def spec():
    return DistortionSpec(severity=1.0, seed=7)
