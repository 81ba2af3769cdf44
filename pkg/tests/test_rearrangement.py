import random

import pytest
from hypothesis import given, settings, strategies as st

from rearrange.catalog import catalog
from rearrange.graph_core import automorphisms
from rearrange.limit_space import glue_equivalent, parse_periodic
from rearrange.rearrangement import (DiagramError, NotComposable, apply, automorphism_element, compose,
                                     element_order, expand_pair, identity, invert, is_identity, make_diagram, power,
                                     reduce, transfer_generator)
from rearrange.replacement import ReplacementError, base_frontier, expand, frontier_of, full_expansion, realize
from samples import random_element, random_frontier, random_point, vicsek_rotation

SYSTEMS = ["thompson_f", "thompson_t", "thompson_v", "basilica", "vicsek(4)", "airplane", "rabbit(2)"]


def A(text):
    return tuple(text.split("/"))


def test_identity_diagram_is_valid():
    f = catalog("thompson_f")
    d = make_diagram(f, [("E",)], [("E",)], [(("E",), ("E",))])
    assert d.mapping == identity(f).mapping


def test_rotation_table_is_valid_and_reduced():
    f = vicsek_rotation()
    assert reduce(f).mapping == f.mapping
    assert len(f.mapping) == 8


def test_swapping_path_edges_is_rejected():
    f = catalog("thompson_f")
    with pytest.raises(DiagramError, match="vertex map"):
        make_diagram(f, [A("E/0"), A("E/1")], [A("E/0"), A("E/1")],
                     [(A("E/0"), A("E/1")), (A("E/1"), A("E/0"))])


def test_diagram_errors_name_the_problem():
    b = catalog("basilica")
    with pytest.raises(ReplacementError, match="frontier"):
        make_diagram(b, [A("L")], [A("L")], [(A("L"), A("L"))])
    s = catalog("airplane")
    fr = expand(s, base_frontier(s), ("E",))
    rows = [(A("E/0"), A("E/1")), (A("E/1"), A("E/0")), (A("E/2"), A("E/2")), (A("E/3"), A("E/3"))]
    with pytest.raises(DiagramError, match="color"):
        make_diagram(s, fr, fr, rows)


def test_unreduced_rotation_reduces_back():
    f = vicsek_rotation()
    g = expand_pair(f, ("L",))
    assert ("L", "0") in g.forward and g.forward[("L", "0")] == ("L", "3", "0")
    assert reduce(g).mapping == f.mapping


def test_identity_on_full_expansion_reduces():
    b = catalog("basilica")
    fr = full_expansion(b, 2)
    d = make_diagram(b, fr, fr, [(a, a) for a in fr])
    assert reduce(d).mapping == identity(b).mapping


def test_inverse_and_involution():
    f = vicsek_rotation()
    assert is_identity(compose(f, invert(f)))
    assert invert(invert(f)).mapping == reduce(f).mapping
    assert invert(f).domain == f.range
    assert is_identity(invert(identity(catalog("basilica"))))


def test_mismatched_bases_do_not_compose():
    with pytest.raises(NotComposable):
        compose(identity(catalog("basilica")), identity(catalog("vicsek(4)")))


def test_apply_rotation():
    s = catalog("vicsek(4)")
    f = vicsek_rotation()
    p = parse_periodic(s, "R/0(3/1)")
    assert apply(f, p) == parse_periodic(s, "L/1(3/1)")
    assert apply(identity(s), p) == p


def test_element_orders():
    b = catalog("basilica")
    assert element_order(identity(b)) == 1
    swap = [a for a in automorphisms(b.base) if a.vertex["l"] == "r"][0]
    assert element_order(automorphism_element(b, base_frontier(b), swap.edge)) == 2
    v = catalog("vicsek(4)")
    fr = base_frontier(v)
    cycle = {"T": "L", "L": "R", "R": "T", "B": "B"}
    assert element_order(automorphism_element(v, fr, cycle)) == 3
    assert element_order(vicsek_rotation()) is None


def _F_generators():
    s = catalog("vicsek(4)")
    fr = base_frontier(s)
    gens = []
    e = ("T",)
    for _ in range(5):
        gens.append(transfer_generator(s, fr, e))
        fr = expand(s, fr, e)
        e = e + ("3",)
    return s, gens


def test_thompson_relations_in_vicsek():
    s, r = _F_generators()
    # the product xy means "apply y, then x"
    mul = lambda x, y: compose(y, x)
    assert mul(r[1], r[2]) == mul(r[3], r[1])
    assert mul(r[1], r[3]) == mul(r[4], r[1])
    assert mul(r[0], r[1]) != mul(r[1], r[0])


def test_thompson_generators_move_cells():
    s, r = _F_generators()
    p = parse_periodic(s, "T/0/3/3(1)")
    assert apply(compose(r[0], r[1]), p) == parse_periodic(s, "T/3/3/0(1)")
    assert apply(compose(r[1], r[0]), p) == parse_periodic(s, "T/3/0/3(1)")
    assert apply(r[0], parse_periodic(s, "T/0/0(1)")) == parse_periodic(s, "T/0(1)")


def test_transfer_generator_needs_degree_one_boundary():
    s = catalog("f_semi_z2")
    with pytest.raises(DiagramError, match="terminal"):
        transfer_generator(s, base_frontier(s), ("E",))


def test_power():
    f = vicsek_rotation()
    assert power(f, 3) == compose(compose(f, f), f)
    assert is_identity(power(f, 0))


@pytest.mark.parametrize("name", SYSTEMS)
def test_expand_round_trips(name):
    s = catalog(name)
    rng = random.Random(1)
    for _ in range(60):
        f = random_element(s, rng)
        g = f
        for _ in range(rng.randint(1, 4)):
            g = expand_pair(g, rng.choice(g.domain.addresses))
        assert reduce(g) == f


@pytest.mark.parametrize("name", SYSTEMS)
def test_groupoid_laws(name):
    s = catalog(name)
    rng = random.Random(2)
    ident = identity(s)
    for _ in range(30):
        f, g, h = (random_element(s, rng) for _ in range(3))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))
        assert compose(ident, f) == f == compose(f, ident)
        assert compose(f, invert(f)) == ident
        for _ in range(3):
            p = random_point(s, rng)
            assert apply(compose(f, g), p) == apply(g, apply(f, p))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_apply_respects_gluing(seed):
    s = catalog("basilica")
    rng = random.Random(seed)
    f = random_element(s, rng)
    p = parse_periodic(s, "L(0)")
    for q in ("L(2)", "B(0)", "T(2)"):
        assert glue_equivalent(s, apply(f, p), apply(f, parse_periodic(s, q)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_automorphism_elements_are_valid(seed):
    s = catalog("vicsek(4)")
    rng = random.Random(seed)
    fr = random_frontier(s, rng, 3)
    auts = automorphisms(realize(s, fr), limit=50)
    a = rng.choice(auts)
    f = automorphism_element(s, fr, a.edge)
    n = element_order(f)
    assert n is not None and is_identity(power(f, n))


def test_frontier_order_does_not_matter():
    s = catalog("thompson_f")
    d1 = make_diagram(s, [A("E/1"), A("E/0")], [A("E/0"), A("E/1")],
                      [(A("E/1"), A("E/1")), (A("E/0"), A("E/0"))])
    assert d1.domain == frontier_of([A("E/0"), A("E/1")])
