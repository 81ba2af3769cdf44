import random

import pytest
from hypothesis import given, settings, strategies as st

from rearrange.catalog import catalog, gluing_identities
from rearrange.limit_space import (PeriodicAddress, cell_boundary, cell_contains, format_periodic, glue_equivalent,
                                   parse_address, parse_periodic, periodic, represented_vertex)
from rearrange.replacement import ReplacementError
from oracles import share_vertex_glued
from samples import random_address, random_point

SYSTEMS = ["thompson_f", "thompson_t", "thompson_v", "basilica", "vicsek(4)", "airplane", "rabbit(2)"]


def P(sys, text):
    return parse_periodic(sys, text)


def test_basilica_vertices():
    b = catalog("basilica")
    assert represented_vertex(b, P(b, "L(0)")) == ("l",)
    assert represented_vertex(b, P(b, "T/0(2)")) == ("T", "v")
    assert represented_vertex(b, P(b, "L(1)")) is None


def test_basilica_gluing():
    b = catalog("basilica")
    assert glue_equivalent(b, P(b, "L(0)"), P(b, "B(0)"))
    assert not glue_equivalent(b, P(b, "T(0)"), P(b, "B(0)"))


def test_thompson_gluing():
    f = catalog("thompson_f")
    assert glue_equivalent(f, P(f, "E/0(1)"), P(f, "E/1(0)"))
    assert not glue_equivalent(f, P(f, "E(0)"), P(f, "E(1)"))


def test_nonexpanding_systems_are_refused():
    s = catalog("nonexpanding_fig14")
    with pytest.raises(ReplacementError):
        glue_equivalent(s, P(s, "E(0)"), P(s, "E/1(0)"))


def test_share_vertex_relation_is_not_transitive_without_expansion():
    s = catalog("nonexpanding_fig14")
    a, b, c = P(s, "E(0)"), P(s, "E/1(0)"), P(s, "E/1/1(0)")
    assert share_vertex_glued(s, a, b)
    assert share_vertex_glued(s, b, c)
    assert not share_vertex_glued(s, a, c)


def test_cell_boundary():
    b = catalog("basilica")
    assert cell_boundary(b, ("T", "1")) == {("T", "v")}
    assert cell_boundary(b, ("T",)) == {("r",), ("l",)}
    f = catalog("thompson_f")
    assert cell_boundary(f, ("E", "0")) == {("a",), ("E", "v")}


def test_normal_form():
    b = catalog("basilica")
    assert P(b, "L/0/0(0/0)") == PeriodicAddress(("L",), ("0",))
    assert P(b, "T/2(1/2/1/2)") == PeriodicAddress(("T",), ("2", "1"))
    assert format_periodic(P(b, "T/0(2)")) == "T/0(2)"
    with pytest.raises(ValueError):
        parse_periodic(b, "T/0")
    with pytest.raises(ReplacementError):
        parse_periodic(b, "X(0)")
    assert parse_address("T/0/2") == ("T", "0", "2")


def test_colored_period_is_closed_up():
    s = catalog("airplane")
    # blue edge 1 is red and red edge 1 is red, so the color settles after one step
    p = periodic(s, ("E",), ("1",))
    assert p == PeriodicAddress(("E", "1"), ("1",))
    q = periodic(s, ("E",), ("1", "2"))
    assert q == PeriodicAddress(("E",), ("1", "2"))


@pytest.mark.parametrize("name", ["basilica", "thompson_f", "thompson_t", "thompson_v", "vicsek(4)"])
def test_catalog_gluing_identities(name):
    s = catalog(name)
    rng = random.Random(7)
    for kind, group in gluing_identities(name):
        for _ in range(10 if any("@" in t for t in group) else 1):
            prefix = "/".join(random_address(s, rng, rng.randint(1, 4)))
            pts = [P(s, t.replace("@", prefix)) for t in group]
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    assert glue_equivalent(s, pts[i], pts[j]) == (kind == "equal"), (group, prefix)
                    assert share_vertex_glued(s, pts[i], pts[j]) == (kind == "equal")


def short_points(s, depth: int, period_len: int):
    """Every point with preperiod of length <= depth and period of length <= period_len."""
    words = [((e,), s.base.edge(e).color) for e in s.base.edge_ids]
    addrs = list(words)
    for _ in range(depth - 1):
        words = [(a + (z.id,), z.color) for a, c in words for z in s.rule(c).graph.edges]
        addrs += words
    out = set()
    for a, c in addrs:
        pers = [((), c)]
        for _ in range(period_len):
            pers = [(w + (z.id,), z.color) for w, cc in pers for z in s.rule(cc).graph.edges]
            for w, _ in pers:
                try:
                    out.add(periodic(s, a, w))
                except ReplacementError:
                    pass
    return sorted(out)


@pytest.mark.parametrize("name", SYSTEMS)
def test_gluing_matches_share_vertex_oracle(name):
    s = catalog(name)
    pts = short_points(s, 2, 1)
    glued = 0
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            expected = share_vertex_glued(s, p, q)
            assert glue_equivalent(s, p, q) == expected, (p, q)
            glued += expected
    # the Thompson V space is a Cantor set: nothing is glued
    assert (glued == 0) == (name == "thompson_v")


@pytest.mark.parametrize("name", ["basilica", "thompson_f", "vicsek(4)", "airplane"])
def test_gluing_is_an_equivalence(name):
    s = catalog(name)
    rng = random.Random(5)
    # points that represent vertices, grouped through the vertex they represent
    pts = [random_point(s, rng, max_pre=3, max_per=2) for _ in range(400)]
    for _ in range(2000):
        p, q, r = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        assert glue_equivalent(s, p, p)
        assert glue_equivalent(s, p, q) == glue_equivalent(s, q, p)
        if glue_equivalent(s, p, q) and glue_equivalent(s, q, r):
            assert glue_equivalent(s, p, r)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_regular_points_stay_in_their_cell(seed):
    s = catalog("basilica")
    rng = random.Random(seed)
    p = random_point(s, rng)
    q = random_point(s, rng)
    if represented_vertex(s, p) is None and glue_equivalent(s, p, q):
        assert p == q
    a = p.unroll(len(p.preperiod))
    assert cell_contains(a, p)
