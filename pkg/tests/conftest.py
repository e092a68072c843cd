import cmath

import numpy as np
import pytest

from epsilon_interp import NodeMultiset, from_catalog


@pytest.fixture
def two_pole():
    return from_catalog("two_pole")


@pytest.fixture
def single_pole():
    return from_catalog("single_pole")


def circle_nodes(rng, count):
    """Randomly rotated roots of unity; keeps the tableau well conditioned."""
    theta = rng.uniform(0.0, 2.0 * np.pi)
    return NodeMultiset(
        [cmath.exp(1j * (theta + 2.0 * np.pi * i / count)) for i in range(count)]
    )


def rel_err(got, want):
    got = np.asarray(got, dtype=complex)
    want = np.asarray(want, dtype=complex)
    scale = max(float(np.max(np.abs(want))), 1e-300)
    return float(np.max(np.abs(got - want))) / scale
