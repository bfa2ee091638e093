import random
from pathlib import Path

import pytest

from ramsplit.gfq import GF
from ramsplit.ffield import function_field

MODELS = Path(__file__).resolve().parent.parent / "models"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def F7():
    return GF(3, 7)


@pytest.fixture
def F13():
    return GF(3, 13)


@pytest.fixture
def K7(F7):
    return function_field(F7)


@pytest.fixture
def rng():
    return random.Random(0xA5A5)


def model_path(name: str) -> Path:
    return MODELS / f"{name}.model"


def load_model(name: str):
    from ramsplit.modelfile import parse_model

    model = parse_model(model_path(name).read_text(), name)
    model.validate()
    return model
