from pathlib import Path

import pytest

from colprob import parse_model

REPO = Path(__file__).resolve().parent.parent
MODELS = REPO / "models"


@pytest.fixture(scope="session")
def examples_model():
    return parse_model((MODELS / "examples.colp").read_text())


@pytest.fixture(scope="session")
def channel_model():
    return parse_model((MODELS / "channel.colp").read_text())


@pytest.fixture(scope="session")
def two_coins_cd():
    # Two coin-shaped experiments named c and d, for cross-support queries.
    return parse_model("experiment c : H, T\nexperiment d : H, T\n")
