import random
from fractions import Fraction as F

import pytest

from walkmult import Graph, VertexPair, graph_from_edges


@pytest.fixture
def p3():
    """Path 1-2-3 with unit weights; pair {1,3}, even singlet {2}."""
    return graph_from_edges(3, [(1, 2, F(1)), (2, 3, F(1))])


@pytest.fixture
def p3_pair():
    return VertexPair(1, 3)


@pytest.fixture
def signed_star():
    """Hub 3 with H13 = 1, H23 = -1; pair {1,2}, odd singlet {3}."""
    return graph_from_edges(3, [(1, 3, F(1)), (2, 3, F(-1))])


@pytest.fixture
def ladder():
    """2x3 ladder: legs 1-2-3 and 4-5-6, rungs (1,4),(2,5),(3,6).

    Central pair {2,5}; automorphism group of order 4."""
    edges = [(1, 2, F(1)), (2, 3, F(1)), (4, 5, F(1)), (5, 6, F(1)),
             (1, 4, F(1)), (2, 5, F(1)), (3, 6, F(1))]
    return graph_from_edges(6, edges)


@pytest.fixture
def ladder_pair():
    return VertexPair(2, 5)


@pytest.fixture
def cycle4():
    """Unit 4-cycle; eigenvalue 0 is doubly degenerate."""
    edges = [(1, 2, F(1)), (2, 3, F(1)), (3, 4, F(1)), (1, 4, F(1))]
    return graph_from_edges(4, edges)


@pytest.fixture
def prism():
    """Two unit triangles 1-2-3 and 4-5-6 joined by three rungs."""
    edges = [(1, 2, F(1)), (2, 3, F(1)), (1, 3, F(1)),
             (4, 5, F(1)), (5, 6, F(1)), (4, 6, F(1)),
             (1, 4, F(1)), (2, 5, F(1)), (3, 6, F(1))]
    return graph_from_edges(6, edges)


def random_rational(rng, allow_zero=False):
    num = rng.randint(-9, 9)
    while num == 0 and not allow_zero:
        num = rng.randint(-9, 9)
    return F(num, rng.randint(1, 4))


def mirror_graph(n_half, seed, extra_fixed=0, density=0.7, integer=False):
    """Random graph on 2*n_half + extra_fixed vertices with the planted
    involution i <-> i + n_half (fixed vertices at the end), so
    (1, 1 + n_half) is a cospectral pair by symmetry."""
    rng = random.Random(seed)
    n = 2 * n_half + extra_fixed
    sigma = {}
    for i in range(1, n_half + 1):
        sigma[i] = i + n_half
        sigma[i + n_half] = i
    for i in range(2 * n_half + 1, n + 1):
        sigma[i] = i

    def draw():
        if integer:
            w = 0
            while w == 0:
                w = rng.randint(-2, 3)
            return F(w)
        return random_rational(rng)

    weights = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            key = (i, j)
            mi, mj = sorted((sigma[i], sigma[j]))
            mirror = (mi, mj)
            if mirror in weights:
                weights[key] = weights[mirror]
            elif mirror < key:
                continue  # the mirror orbit was already decided: no edge
            elif rng.random() < density:
                weights[key] = draw()
    edges = [(i, j, w) for (i, j), w in weights.items()]
    return graph_from_edges(n, edges), VertexPair(1, 1 + n_half)
