"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

from qkato.linalg import QArray
from qkato.quaternion import Quaternion

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)
nonzero_quaternions = quaternions.filter(lambda q: abs(q) > 1e-3)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_of(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@st.composite
def small_matrices(draw, lo: int = 1, hi: int = 5):
    n = draw(st.integers(lo, hi))
    rng = rng_of(draw(seeds))
    return QArray.from_components(rng.standard_normal((n, n, 4)) / np.sqrt(4 * n))
