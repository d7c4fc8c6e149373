from itertools import combinations

import pytest

from hypercolor.generators import XYZConstruction, build_xyz
from hypercolor.hypergraph import Hypergraph

FANO = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


@pytest.fixture
def small_xyz():
    """k=3 with X={0,1}, Y={2,3}, Z={4,5,6}."""
    spec = XYZConstruction(7, 3, 0.0, part_scale=2 / 7)
    assert (spec.x, spec.y, spec.z) == (range(0, 2), range(2, 4), range(4, 7))
    return spec


@pytest.fixture
def small_hl(small_xyz):
    return build_xyz(small_xyz)


@pytest.fixture
def fano():
    return Hypergraph(7, FANO)


@pytest.fixture
def k4_triples():
    return Hypergraph(4, combinations(range(4), 3))
