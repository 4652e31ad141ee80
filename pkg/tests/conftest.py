import os
import random

import pytest

SEED = int(os.environ.get("STEINER_LADDER_SEED", "20260808"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)
