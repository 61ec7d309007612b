"""
Test configuration and fixtures.
"""
from pathlib import Path

import numpy as np
import pytest

from minimaxkit.config import Settings
from minimaxkit.services.benchmarks import binary_test_game, pick_smaller_game
from minimaxkit.services.discretization_service import DiscretizationService
from minimaxkit.services.game_service import GameService
from minimaxkit.services.lp_service import LPService
from minimaxkit.services.risk_service import RiskService
from minimaxkit.services.transport_service import TransportService
from minimaxkit.services.witness_service import WitnessService

SAMPLES_DIR = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(scope="session")
def settings() -> Settings:
    """Settings pinned to the defaults, independent of any local .env."""
    return Settings(_env_file=None)


@pytest.fixture
def rng() -> np.random.Generator:
    """Fresh seeded generator for each test."""
    return np.random.default_rng(12345)


@pytest.fixture
def risk_service(settings) -> RiskService:
    return RiskService(settings)


@pytest.fixture
def lp_service(settings) -> LPService:
    return LPService(settings)


@pytest.fixture
def game_service(settings) -> GameService:
    return GameService(settings)


@pytest.fixture
def discretization_service(settings) -> DiscretizationService:
    return DiscretizationService(settings)


@pytest.fixture
def transport_service(settings) -> TransportService:
    return TransportService(settings)


@pytest.fixture
def witness_service(settings) -> WitnessService:
    return WitnessService(settings)


@pytest.fixture
def binary_test():
    """Two-point test with value 1/4 and uniform least favorable prior."""
    return binary_test_game()


@pytest.fixture
def pick_smaller_4():
    return pick_smaller_game(4)


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES_DIR
