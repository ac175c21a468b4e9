import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from udgsearch.canonical import ZobristTable


@pytest.fixture(scope="session")
def table():
    return ZobristTable.from_seed(42)


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)
