import numpy as np
import pytest

from cyclestop.graphs import (
    complete,
    complete_bipartite,
    connected_graphs,
    cycle,
    path,
    star,
    two_triangles,
)
from cyclestop.matroids import linear_gf

CORPUS_SEED = 20260817


@pytest.fixture(scope="session")
def small_connected():
    """Every connected labeled graph on 2..5 vertices (1 + 4 + 38 + 728)."""
    graphs = []
    for n in range(2, 6):
        graphs.extend(connected_graphs(n))
    return graphs


@pytest.fixture(scope="session")
def family_members():
    """The builtin families up to 7 vertices."""
    members = [two_triangles()]
    members += [complete(n) for n in range(2, 8)]
    members += [cycle(n) for n in range(3, 8)]
    members += [path(n) for n in range(2, 8)]
    members += [star(n) for n in range(2, 8)]
    members += [complete_bipartite(a, b)
                for a in range(1, 4) for b in range(a, 8 - a)]
    return members


def make_gf2_matroids(count=20, seed=CORPUS_SEED):
    """Seeded random GF(2) matroids with 3..7 columns, none of them zero."""
    rng = np.random.default_rng(seed)
    mats = []
    while len(mats) < count:
        r = int(rng.integers(2, 5))
        m = int(rng.integers(max(3, r), 8))
        matrix = rng.integers(0, 2, size=(r, m))
        for j in range(m):
            if not matrix[:, j].any():
                matrix[int(rng.integers(0, r)), j] = 1
        mats.append(linear_gf(2, matrix.tolist()))
    return mats


@pytest.fixture(scope="session")
def gf2_matroids():
    return make_gf2_matroids()
