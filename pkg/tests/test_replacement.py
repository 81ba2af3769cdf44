import pytest

from rearrange.catalog import catalog, names
from rearrange.graph_core import Graph, connected_components, is_isomorphic
from rearrange.replacement import (ReplacementError, ReplacementSystem, SizeCapExceeded, base_frontier, endpoints,
                                   expand, frontier_of, frontier_problems, full_expansion, make_frontier, make_rule,
                                   realize, refine, validate_system)

EXPANDING = ["thompson_f", "thompson_t", "thompson_v", "f32", "t32", "v32", "basilica", "rabbit(1)", "rabbit(2)",
             "rabbit(3)", "vicsek(3)", "vicsek(4)", "vicsek(5)", "bubble_bath", "trivial", "airplane",
             "linear_fwrf", "f_semi_z2"]


def fr(*addrs):
    return frontier_of(tuple(a.split("/")) for a in addrs)


@pytest.mark.parametrize("name", EXPANDING)
def test_catalog_systems_are_expanding(name):
    assert validate_system(catalog(name)).ok


def test_nonexpanding_example_fails_condition_two():
    report = validate_system(catalog("nonexpanding_fig14"))
    assert report.conditions() == {2}
    assert any("joins initial and terminal" in line for line in report.lines())


def test_single_edge_rule_fails_two_and_three():
    s = ReplacementSystem.single(Graph.from_edges([("E", "a", "b")]), make_rule([("0", "i", "t")], "i", "t"))
    assert validate_system(s).conditions() == {2, 3}


def test_isolated_vertex_is_reported():
    s = ReplacementSystem.single(Graph.from_edges([("E", "a", "b")], ["z"]),
                                 make_rule([("0", "i", "v"), ("1", "v", "t")], "i", "t"))
    assert validate_system(s).conditions() == {1}


def test_system_invariants():
    rule = make_rule([("0", "i", "v", "red")], "i", "t", ["t"])
    with pytest.raises(ReplacementError):
        ReplacementSystem.single(Graph.from_edges([("E", "a", "b")]), rule)
    with pytest.raises(ReplacementError):
        make_rule([("0", "i", "v")], "i", "i")
        ReplacementSystem.single(Graph.from_edges([("E", "a", "b")]), make_rule([("0", "i", "v")], "i", "i"))


def test_catalog_shapes():
    b = catalog("basilica")
    assert sorted(b.base.edge_ids) == ["B", "L", "R", "T"]
    assert len(b.rule("black").graph.edges) == 3 and b.rule("black").interior == ("v",)
    assert sorted(catalog("vicsek(4)").rule("black").graph.edge_ids) == ["0", "1", "2", "3", "4"]
    assert catalog("airplane").colors == ("blue", "red")
    with pytest.raises(ReplacementError):
        catalog("nosuch")
    assert "rabbit(n)" in names()


def test_expand_basilica_top_edge():
    b = catalog("basilica")
    assert expand(b, base_frontier(b), ("T",)) == fr("L", "R", "B", "T/0", "T/1", "T/2")
    with pytest.raises(ReplacementError):
        expand(b, base_frontier(b), ("T", "0"))


def test_expansion_order_is_irrelevant():
    b = catalog("basilica")
    f0 = base_frontier(b)
    one = expand(b, expand(b, expand(b, f0, ("T",)), ("T", "1")), ("L",))
    two = expand(b, expand(b, expand(b, f0, ("L",)), ("T",)), ("T", "1"))
    assert one == two


def test_full_expansion_sizes():
    assert len(full_expansion(catalog("thompson_f"), 3)) == 8
    assert full_expansion(catalog("basilica"), 0) == base_frontier(catalog("basilica"))
    assert len(full_expansion(catalog("basilica"), 2)) == 36
    # two colors: blue -> 2 blue + 2 red, red -> 2 red + 1 blue
    assert len(full_expansion(catalog("airplane"), 2)) == 2 * 4 + 2 * 3


def test_full_expansion_cap(monkeypatch):
    monkeypatch.setenv("REARRANGE_MAX_CELLS", "100")
    with pytest.raises(SizeCapExceeded):
        full_expansion(catalog("basilica"), 4)


def test_endpoints():
    b = catalog("basilica")
    assert endpoints(b, ("T", "1")) == (("T", "v"), ("T", "v"))
    assert endpoints(b, ("L", "0")) == (("l",), ("L", "v"))
    assert endpoints(b, ("T",)) == (("r",), ("l",))


def test_realize():
    f = catalog("thompson_f")
    g = realize(f, full_expansion(f, 2))
    assert len(g.edges) == 4 and len(g.vertices) == 5
    assert all(g.out_degree(v) <= 1 and g.in_degree(v) <= 1 for v in g.vertices)
    b = catalog("basilica")
    assert is_isomorphic(realize(b, base_frontier(b)), b.base)
    simple = realize(b, fr("L", "R", "B", "T/0", "T/1", "T/2"))
    assert len(simple.vertices) == 3


def test_refine():
    f = catalog("thompson_f")
    a = fr("E/0", "E/1")
    assert refine(f, a, a) == a
    assert refine(f, a, fr("E")) == a
    assert refine(f, a, fr("E/0/0", "E/0/1", "E/1")) == fr("E/0/0", "E/0/1", "E/1")


def test_frontier_problems():
    b = catalog("basilica")
    assert frontier_problems(b, [("L",), ("R",), ("B",), ("T", "0")])
    assert frontier_problems(b, [("L",), ("L", "0"), ("R",), ("B",), ("T",)])
    assert frontier_problems(b, [("X",)])
    with pytest.raises(ReplacementError):
        make_frontier(b, [("L",)])


def test_rule_connectivity():
    assert len(connected_components(catalog("basilica").rule("black").graph)) == 1
    assert len(connected_components(catalog("thompson_v").rule("black").graph)) == 2


def test_vicsek_leaf_counts():
    # each expansion adds 4 edges to vicsek(4)
    s = catalog("vicsek(4)")
    f = base_frontier(s)
    for a in list(f)[:3]:
        f = expand(s, f, a)
    assert len(realize(s, f).edges) == 4 + 3 * 4
