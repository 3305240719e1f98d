import os

import numpy as np
import pytest

from eac.bundle import builtin_toy_model
from eac.masking import BaselineFill
from eac.synth import three_rects

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


@pytest.fixture(scope="session")
def fixtures_dir() -> str:
    return FIXTURES


@pytest.fixture(scope="session")
def toy_bundle():
    return builtin_toy_model(7, 4, 5)


@pytest.fixture(scope="session")
def rects_case():
    image, cs = three_rects()
    return image, cs


@pytest.fixture()
def fill() -> BaselineFill:
    return BaselineFill()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(0)
