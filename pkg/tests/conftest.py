import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psdbounds import ExactMatrix


def random_rational_matrix(
    rng: random.Random, max_rows: int = 6, max_cols: int = 6, zero_density: float = 1 / 3
) -> ExactMatrix:
    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max_cols)
    entries = []
    for _ in range(rows * cols):
        if rng.random() < zero_density:
            entries.append(Fraction(0))
        else:
            value = Fraction(rng.randint(1, 9), rng.randint(1, 4))
            entries.append(value if rng.random() < 0.5 else -value)
    return ExactMatrix(rows, cols, entries)


@pytest.fixture(scope="session")
def roundtrip_corpus():
    """The 200 seeded random matrices shared by the roundtrip suites."""
    rng = random.Random(1729)
    return [random_rational_matrix(rng) for _ in range(200)]
