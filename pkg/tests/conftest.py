import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from dilates import PointSet  # noqa: E402


def point_lists(max_dim=3, max_size=8, lo=-3, hi=3):
    return st.integers(1, max_dim).flatmap(
        lambda d: st.lists(
            st.tuples(*[st.integers(lo, hi)] * d), min_size=1, max_size=max_size
        )
    )


def point_sets(**kw):
    return point_lists(**kw).map(PointSet)


def random_raw_set(rng: random.Random, n_max=12, d_max=3, lo=-3, hi=3, d=None):
    d = d or rng.randint(1, d_max)
    n = rng.randint(1, n_max)
    return PointSet([tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(n)])


@pytest.fixture
def rng():
    return random.Random(20261015)
