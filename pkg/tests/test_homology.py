import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from rearrange.homology import ComplexTooLarge, FlagComplex, betti, density, is_grounded, is_k_ground
from oracles import clique_counts, euler_characteristic


def cycle(n):
    return FlagComplex.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return FlagComplex.from_edges(n, itertools.combinations(range(n), 2))


def bipartite_plus_isolated(a, b, extra):
    return FlagComplex.from_edges(a + b + extra, [(i, a + j) for i in range(a) for j in range(b)])


def test_betti_examples():
    assert betti(cycle(4), 2) == [1, 1, 0]
    assert betti(bipartite_plus_isolated(6, 6, 4), 1) == [5, 25]
    assert betti(complete(5), 3) == [1, 0, 0, 0]
    assert betti(FlagComplex.from_edges(0, []), 1) == [0, 0]
    # octahedron boundary: a 2-sphere
    octa = FlagComplex.from_edges(6, [(i, j) for i in range(6) for j in range(i + 1, 6) if j != i + 3 or i >= 3])
    assert betti(octa, 2) == [1, 0, 1]


def test_density_examples():
    assert density(complete(4)) == 0
    assert density(cycle(4)) == 1
    assert density(bipartite_plus_isolated(6, 6, 4)) == 15
    with pytest.raises(ValueError):
        density(FlagComplex.from_edges(0, []))


def test_grounded_examples():
    assert is_grounded(cycle(4), 1, 1)
    assert not is_grounded(cycle(5), 1, 1)
    for n in range(1, 4):
        assert is_grounded(complete(n + 1), n, 1)
    three = FlagComplex.from_edges(3, [])
    # every vertex misses itself or the others, so a lone vertex is a 1-ground
    assert is_grounded(three, 0, 1)
    assert not is_grounded(three, 1, 1)
    assert not is_k_ground(three, (0,), 0)


def test_size_cap():
    with pytest.raises(ComplexTooLarge):
        complete(20).cliques(20)


@st.composite
def random_complexes(draw):
    n = draw(st.integers(0, 9))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return FlagComplex.from_edges(n, chosen)


@settings(max_examples=200, deadline=None)
@given(random_complexes())
def test_euler_characteristic(x):
    b = betti(x, 9)
    assert sum((-1) ** k * v for k, v in enumerate(b)) == euler_characteristic(x.n, x.edges)
    assert b[0] == len(x.components())
    assert all(v >= 0 for v in b)


@settings(max_examples=100, deadline=None)
@given(random_complexes())
def test_clique_counts(x):
    levels = x.cliques(x.n or 1)
    got = [len(l) for l in levels if l]
    assert got == clique_counts(x.n, x.edges)


def test_random_dense_complexes_are_connected():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 12)
        x = FlagComplex.from_edges(n, [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.8])
        k = density(x)
        if n >= k * (k + 1) + 1:
            assert betti(x, 0)[0] == 1
