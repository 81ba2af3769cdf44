"""Rearrangements as graph pair diagrams.

A diagram is a domain frontier over one base graph, a range frontier over a
(possibly different) base graph with the same rules, and a bijection between
them that induces an isomorphism of the realized expansions.  Every
rearrangement has a unique reduced diagram, so reduced diagrams are compared
structurally.

Composition runs left to right: ``compose(f, g)`` applies ``f`` first, which
is the map usually written ``g ∘ f``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .graph_core import Edge, Graph
from .limit_space import PeriodicAddress, format_address, periodic
from .replacement import (Address, Frontier, ReplacementError, ReplacementSystem, base_frontier,
                          endpoints, expand, frontier_of, frontier_problems, realize, refine,
                          vertex_token)


class DiagramError(ReplacementError):
    pass


class NotComposable(DiagramError):
    pass


def _fmt(a: Sequence[str]) -> str:
    return format_address(a)


@dataclass(frozen=True)
class PairDiagram:
    domain_sys: ReplacementSystem
    range_sys: ReplacementSystem
    domain: Frontier
    range: Frontier
    mapping: tuple[tuple[Address, Address], ...]

    @cached_property
    def forward(self) -> dict[Address, Address]:
        return dict(self.mapping)

    @cached_property
    def backward(self) -> dict[Address, Address]:
        return {b: a for a, b in self.mapping}

    def __len__(self) -> int:
        return len(self.mapping)

    def rows(self) -> list[str]:
        return [f"{_fmt(a)} -> {_fmt(b)}" for a, b in self.mapping]


class Rearrangement(PairDiagram):
    """A reduced pair diagram; build with ``reduce`` or the helpers below."""


def _same_rules(a: ReplacementSystem, b: ReplacementSystem) -> bool:
    return a is b or a.rules == b.rules


def _vertex_map(dsys, rsys, pairs) -> dict:
    vmap: dict = {}
    for a, b in pairs:
        for u, w in zip(endpoints(dsys, a), endpoints(rsys, b)):
            if vmap.setdefault(u, w) != w:
                raise DiagramError(
                    f"vertex map ill-defined: {_fmt(a)} -> {_fmt(b)} sends vertex "
                    f"{vertex_token(u)} to both {vertex_token(vmap[u])} and {vertex_token(w)}")
    return vmap


def make_diagram(domain_sys: ReplacementSystem, domain: Iterable[Sequence[str]],
                 range_: Iterable[Sequence[str]], mapping: Mapping | Iterable,
                 range_sys: Optional[ReplacementSystem] = None) -> PairDiagram:
    """Validate raw diagram data."""
    range_sys = range_sys or domain_sys
    if not _same_rules(domain_sys, range_sys):
        raise DiagramError("domain and range systems have different rules")
    dom = [tuple(a) for a in domain]
    ran = [tuple(b) for b in range_]
    for sys, addrs, side in ((domain_sys, dom, "domain"), (range_sys, ran, "range")):
        probs = frontier_problems(sys, addrs)
        if probs:
            raise DiagramError(f"{side} is not a frontier: " + "; ".join(probs))
    items = mapping.items() if isinstance(mapping, Mapping) else mapping
    pairs = [(tuple(a), tuple(b)) for a, b in items]
    fwd = dict(pairs)
    if len(fwd) != len(pairs):
        raise DiagramError("not bijective: a domain address is mapped twice")
    if set(fwd) != set(dom):
        missing = sorted(set(dom) - set(fwd))
        extra = sorted(set(fwd) - set(dom))
        raise DiagramError(f"not bijective: unmapped {[_fmt(a) for a in missing]}, "
                           f"unknown {[_fmt(a) for a in extra]}")
    if sorted(fwd.values()) != sorted(set(ran)) or len(set(fwd.values())) != len(ran):
        raise DiagramError("not bijective: the map does not hit every range address exactly once")
    for a, b in pairs:
        if domain_sys.color(a) != range_sys.color(b):
            raise DiagramError(f"color mismatch: {_fmt(a)} -> {_fmt(b)}")
    vmap = _vertex_map(domain_sys, range_sys, pairs)
    dverts = set(realize(domain_sys, frontier_of(dom)).vertices)
    rverts = set(realize(range_sys, frontier_of(ran)).vertices)
    images = {vertex_token(w) for w in vmap.values()}
    if len(images) != len(vmap):
        raise DiagramError("vertex map ill-defined: two vertices have the same image")
    if {vertex_token(u) for u in vmap} != dverts or images != rverts:
        raise DiagramError("vertex map ill-defined: isolated vertices are not matched")
    return PairDiagram(domain_sys, range_sys, frontier_of(dom), frontier_of(ran),
                       tuple(sorted(pairs)))


def _build(cls, dsys, rsys, pairs) -> PairDiagram:
    pairs = sorted(pairs)
    return cls(dsys, rsys, frontier_of(a for a, _ in pairs), frontier_of(b for _, b in pairs),
               tuple(pairs))


def reduce(d: PairDiagram) -> Rearrangement:
    """Collapse sibling families mapped suffix-for-suffix onto sibling families."""
    dsys, rsys = d.domain_sys, d.range_sys
    fwd = dict(d.mapping)
    changed = True
    while changed:
        changed = False
        parents: dict[Address, list[Address]] = {}
        for a in fwd:
            if len(a) > 1:
                parents.setdefault(a[:-1], []).append(a)
        for p in sorted(parents):
            kids = parents[p]
            expected = dsys.children(p)
            if len(kids) != len(expected) or set(kids) != set(expected):
                continue
            first = fwd[kids[0]]
            if len(first) < 2:
                continue
            b = first[:-1]
            if any(fwd[a] != b + (a[-1],) for a in kids):
                continue
            if dsys.color(p) != rsys.color(b):
                continue
            for a in kids:
                del fwd[a]
            fwd[p] = b
            changed = True
    return _build(Rearrangement, dsys, rsys, fwd.items())


def identity(sys: ReplacementSystem) -> Rearrangement:
    return _build(Rearrangement, sys, sys, [(a, a) for a in base_frontier(sys)])


def invert(f: PairDiagram) -> Rearrangement:
    return reduce(_build(PairDiagram, f.range_sys, f.domain_sys, [(b, a) for a, b in f.mapping]))


def _split(fr: Frontier, c: Address) -> tuple[Address, Address]:
    p = fr.prefix_in(c)
    if p is None:
        raise DiagramError(f"{_fmt(c)} has no prefix in the frontier")
    return p, c[len(p):]


def compose(f: PairDiagram, g: PairDiagram) -> Rearrangement:
    """The rearrangement that applies f and then g."""
    if f.range_sys.base != g.domain_sys.base or not _same_rules(f.range_sys, g.domain_sys):
        raise NotComposable(
            f"range of the first map ({f.range_sys.name or 'unnamed base'}) differs from the domain "
            f"of the second ({g.domain_sys.name or 'unnamed base'})")
    mid = refine(f.range_sys, f.range, g.domain)
    fb, gf = f.backward, g.forward
    pairs = []
    for c in mid:
        b, s = _split(f.range, c)
        b2, s2 = _split(g.domain, c)
        pairs.append((fb[b] + s, gf[b2] + s2))
    return reduce(_build(PairDiagram, f.domain_sys, g.range_sys, pairs))


def expand_pair(d: PairDiagram, a: Sequence[str]) -> PairDiagram:
    """Expand domain address a and its image simultaneously."""
    a = tuple(a)
    b = d.forward[a]
    fwd = dict(d.mapping)
    del fwd[a]
    for c in d.domain_sys.children(a):
        fwd[c] = b + (c[-1],)
    return _build(PairDiagram, d.domain_sys, d.range_sys, fwd.items())


def apply(f: PairDiagram, p: PeriodicAddress) -> PeriodicAddress:
    """Image of an eventually periodic point under f."""
    depth = max(len(a) for a in f.domain)
    word = p.unroll(max(depth, len(p.preperiod)))
    a = f.domain.prefix_in(word)
    if a is None:
        raise DiagramError(f"point {p} is not over the domain of the map")
    b = f.forward[a]
    k = len(a)
    if k <= len(p.preperiod):
        return periodic(f.range_sys, b + p.preperiod[k:], p.period)
    shift = (k - len(p.preperiod)) % len(p.period)
    return periodic(f.range_sys, b, p.period[shift:] + p.period[:shift])


def is_identity(f: PairDiagram) -> bool:
    return f.domain_sys.base == f.range_sys.base and reduce(f).mapping == identity(f.domain_sys).mapping


def power(f: Rearrangement, k: int) -> Rearrangement:
    out = identity(f.domain_sys)
    for _ in range(k):
        out = compose(out, f)
    return out


def element_order(f: Rearrangement, bound: int = 10**4, max_size: int = 500) -> Optional[int]:
    """Least k <= bound with f^k the identity, or None.

    Powers of an element of infinite order have unbounded diagrams (finitely
    many diagrams of a given size), so the search also stops once a power has
    more than max_size leaves.
    """
    if f.domain_sys.base != f.range_sys.base:
        raise DiagramError("element_order needs a map from a space to itself")
    ident = identity(f.domain_sys)
    cur = reduce(f)
    for k in range(1, bound + 1):
        if cur.mapping == ident.mapping:
            return k
        if len(cur.mapping) > max_size:
            return None
        cur = compose(cur, f)
    return None


def automorphism_element(sys: ReplacementSystem, fr: Frontier, edge_perm: Mapping[str, str]) -> Rearrangement:
    """Rearrangement induced by an automorphism of realize(fr), given on edge tokens."""
    tokens = {".".join(a): a for a in fr}
    pairs = [(tokens[x], tokens[y]) for x, y in edge_perm.items()]
    return reduce(make_diagram(sys, fr, fr, pairs))


# ---------------------------------------------------------------------------
# the Thompson F generators attached to an edge

def boundary_edges(sys: ReplacementSystem, color: str) -> tuple[str, str]:
    """Edges at the initial and terminal vertex when both have degree one."""
    rule = sys.rule(color)
    g = rule.graph
    if g.in_degree(rule.initial) != 0 or g.out_degree(rule.initial) != 1:
        raise DiagramError(f"initial vertex {rule.initial} of rule {color} is not a source of degree one")
    if g.out_degree(rule.terminal) != 0 or g.in_degree(rule.terminal) != 1:
        raise DiagramError(f"terminal vertex {rule.terminal} of rule {color} is not a sink of degree one")
    return g.out_edges[rule.initial][0].id, g.in_edges[rule.terminal][0].id


def transfer_generator(sys: ReplacementSystem, fr: Frontier, e: Sequence[str]) -> Rearrangement:
    e = tuple(e)
    if e not in fr:
        raise DiagramError(f"{_fmt(e)} is not in the frontier")
    color = sys.color(e)
    iota, tau = boundary_edges(sys, color)
    g = sys.rule(color).graph
    for z in (iota, tau):
        if g.edge(z).color != color:
            raise DiagramError(f"boundary edge {z} of rule {color} has a different color")
    dom = expand(sys, expand(sys, fr, e), e + (iota,))
    ran = expand(sys, expand(sys, fr, e), e + (tau,))
    m = {a: a for a in fr if a != e}
    m[e + (iota, iota)] = e + (iota,)
    m[e + (iota, tau)] = e + (tau, iota)
    m[e + (tau,)] = e + (tau, tau)
    for z in g.edge_ids:
        if z not in (iota, tau):
            m[e + (iota, z)] = e + (z,)
            m[e + (z,)] = e + (tau, z)
    return reduce(make_diagram(sys, dom, ran, m))


# ---------------------------------------------------------------------------
# morphisms between different base graphs

def expansion_morphism(sys: ReplacementSystem, fr: Frontier, name: str = "") -> Rearrangement:
    """The map X(G) -> X(E) for the expansion E of the base given by fr.

    Edges of E are named by their address tokens.
    """
    target = sys.with_base(realize(sys, fr), name)
    pairs = [(a, (".".join(a),)) for a in fr]
    return reduce(_build(PairDiagram, sys, target, pairs))


def collapse_graph(sys: ReplacementSystem, g: Graph, color: str, edge_assignment: Mapping[str, str],
                   new_edge: str) -> Graph:
    """Replace the image of a characteristic map in g by a single edge."""
    rule = sys.rule(color)
    image = set(edge_assignment.values())
    src = dst = None
    for z, x in edge_assignment.items():
        rz, gx = rule.graph.edge(z), g.edge(x)
        for end_r, end_g in ((rz.src, gx.src), (rz.dst, gx.dst)):
            if end_r == rule.initial:
                src = end_g
            elif end_r == rule.terminal:
                dst = end_g
    if src is None or dst is None:
        raise DiagramError("characteristic map does not reach both boundary vertices")
    if new_edge in g.edge_map:
        raise DiagramError(f"edge id {new_edge!r} already used")
    interior = {v for e in image for v in (g.edge(e).src, g.edge(e).dst)} - {src, dst}
    keep = [e for e in g.edges if e.id not in image]
    return Graph.build([v for v in g.vertices if v not in interior],
                       keep + [Edge(new_edge, src, dst, color)])


def contraction_morphism(sys: ReplacementSystem, color: str, edge_assignment: Mapping[str, str],
                         new_edge: str, name: str = "") -> Rearrangement:
    """The map X(G) -> X(G') collapsing the image of a characteristic map to one edge.

    edge_assignment sends each rule edge to the base edge it lands on.
    """
    g = sys.base
    newg = collapse_graph(sys, g, color, edge_assignment, new_edge)
    image = set(edge_assignment.values())
    target = sys.with_base(newg, name)
    pairs = [((e.id,), (e.id,)) for e in g.edges if e.id not in image]
    pairs += [((x,), (new_edge, z)) for z, x in edge_assignment.items()]
    return reduce(make_diagram(sys, [(e,) for e in g.edge_ids],
                               [p[1] for p in pairs], pairs, range_sys=target))
