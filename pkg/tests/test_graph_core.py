import random

import pytest
from hypothesis import given, settings, strategies as st

from rearrange.catalog import catalog
from rearrange.graph_core import (Edge, Graph, GraphError, GraphMap, automorphisms, canonical_form, certificate,
                                  connected_components, is_graph_map, is_isomorphic, isomorphisms,
                                  random_isomorphism, relabel)
from oracles import brute_automorphism_count, brute_isomorphic


@st.composite
def small_graphs(draw, max_vertices=5, max_edges=7, colors=("black", "red")):
    n = draw(st.integers(1, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    m = draw(st.integers(0, max_edges))
    edges = []
    for k in range(m):
        s = draw(st.sampled_from(vs))
        t = draw(st.sampled_from(vs))
        c = draw(st.sampled_from(colors))
        edges.append((f"e{k}", s, t, c))
    return Graph.build(vs, edges)


def shuffled(g: Graph, seed: int) -> Graph:
    rng = random.Random(seed)
    vs = list(g.vertices)
    new = vs[:]
    rng.shuffle(new)
    vmap = {v: "x" + w for v, w in zip(vs, new)}
    emap = {e: "y" + e for e in g.edge_ids}
    return relabel(g, vmap, emap)


def test_graph_validation():
    with pytest.raises(GraphError):
        Graph.build(["a"], [("e", "a", "b")])
    with pytest.raises(GraphError):
        Graph.build(["a", "b"], [("e", "a", "b"), ("e", "b", "a")])


def test_degrees_count_loops_twice():
    g = Graph.from_edges([("L", "a", "a"), ("E", "a", "b")])
    assert g.in_degree("a") == 1 and g.out_degree("a") == 2
    assert g.degree("a") == 3
    assert g.isolated_vertices() == []


def test_basilica_base_automorphisms():
    assert len(automorphisms(catalog("basilica").base)) == 2


def test_star_automorphisms():
    assert len(automorphisms(catalog("vicsek(4)").base)) == 24


def test_parallel_edges_are_permuted():
    g = Graph.from_edges([("A", "a", "b"), ("B", "a", "b"), ("C", "a", "b")])
    assert len(automorphisms(g)) == 6


def test_colors_are_respected():
    g = Graph.from_edges([("A", "a", "b", "red"), ("B", "b", "c", "blue")])
    h = Graph.from_edges([("A", "a", "b", "blue"), ("B", "b", "c", "red")])
    assert not is_isomorphic(g, h)
    assert isomorphisms(g, h) == []


def test_pinned_isomorphisms():
    g = catalog("basilica").base
    maps = isomorphisms(g, g, pinned={"l": "r"})
    assert len(maps) == 1 and maps[0].vertex == {"l": "r", "r": "l"}


def test_graph_map_composition_and_inverse():
    g = catalog("basilica").base
    (ident, swap) = sorted(automorphisms(g), key=lambda m: m.vertex["l"])
    assert swap.then(swap).vertex == ident.vertex
    assert swap.inverse().edge == swap.edge
    assert is_graph_map(g, g, swap)
    bad = GraphMap.make({"l": "l", "r": "r"}, {"T": "B", "B": "T", "L": "L", "R": "R"})
    assert not is_graph_map(g, g, bad)


def test_connected_components():
    g = Graph.build(["a", "b", "c"], [("e", "a", "b")])
    assert connected_components(g) == [frozenset({"a", "b"}), frozenset({"c"})]


def test_canonical_form_names():
    c = canonical_form(catalog("basilica").base)
    assert c.vertices == ("v0", "v1")
    assert [e.id for e in c.edges] == ["e0", "e1", "e2", "e3"]


@settings(max_examples=150, deadline=None)
@given(small_graphs(), st.integers(0, 10**6))
def test_canonical_form_is_invariant(g, seed):
    h = shuffled(g, seed)
    assert canonical_form(g) == canonical_form(h)
    assert certificate(g) == certificate(h)


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_vertices=4, max_edges=5), small_graphs(max_vertices=4, max_edges=5))
def test_isomorphism_agrees_with_brute_force(g, h):
    expected = brute_isomorphic(g, h)
    assert is_isomorphic(g, h) == expected
    assert (certificate(g) == certificate(h)) == expected


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_vertices=4, max_edges=5))
def test_automorphism_count_matches_brute_force(g):
    assert len(automorphisms(g)) == brute_automorphism_count(g)


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(0, 10**6))
def test_random_isomorphism_is_valid(g, seed):
    h = shuffled(g, seed)
    m = random_isomorphism(g, h, random.Random(seed))
    assert m is not None and is_graph_map(g, h, m)
    assert len(set(m.edge.values())) == len(g.edges)


def test_isomorphisms_are_sorted_and_distinct():
    g = Graph.from_edges([("A", "a", "b"), ("B", "a", "b")])
    maps = isomorphisms(g, g)
    keys = [tuple(m.edge[e] for e in g.edge_ids) for m in maps]
    assert keys == sorted(set(keys))


def test_edge_is_ordered():
    assert Edge("a", "x", "y") < Edge("b", "x", "y")
