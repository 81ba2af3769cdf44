"""The cube complex of range classes and the contraction complexes.

A vertex of the complex is a class of rearrangements f: X(G0) -> X(H) up to
post-composition with isomorphisms of H.  It is stored as ``KVertex``:

* ``frontier``: the domain frontier of the reduced diagram of f;
* ``shape``: the graph H, with each edge renamed after the least domain
  address mapped into it and each vertex after its least incident
  (edge, role) pair;
* ``cells``: where each domain address lands, as (shape edge, suffix).

Two rearrangements are range equivalent iff these three values coincide.  The
rank of a vertex is the number of edges of H.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .graph_core import Edge, Graph, canonical_form, certificate, connected_components
from .homology import FlagComplex, betti
from .limit_space import format_address
from .replacement import (Address, Frontier, ReplacementError, ReplacementSystem, SizeCapExceeded,
                          base_frontier, expand, frontier_of, realize)
from .rearrangement import (PairDiagram, Rearrangement, collapse_graph, compose, contraction_morphism,
                            expansion_morphism, identity, invert, make_diagram, reduce)

MAX_CUBE_DIM = 20


@dataclass(frozen=True, order=True)
class KVertex:
    frontier: Frontier
    shape: Graph
    cells: tuple[tuple[Address, tuple[str, Address]], ...]

    @property
    def rank(self) -> int:
        return len(self.shape.edges)

    def describe(self) -> str:
        rows = [f"{format_address(d)} -> {e}{'/' + format_address(s) if s else ''}"
                for d, (e, s) in self.cells]
        return "; ".join(rows)


def rank(v: KVertex) -> int:
    return v.rank


def canonical_vertex(f: PairDiagram) -> KVertex:
    f = reduce(f)
    blocks: dict[str, list[Address]] = {}
    for d, b in f.mapping:
        blocks.setdefault(b[0], []).append(d)
    h = f.range_sys.base
    name = {e: ".".join(min(blocks[e])) for e in h.edge_ids}
    best: dict[str, tuple[str, str]] = {}
    for e in h.edges:
        for v, role in ((e.src, "s"), (e.dst, "t")):
            key = (name[e.id], role)
            if v not in best or key < best[v]:
                best[v] = key
    vname = {v: f"{n}@{r}" for v, (n, r) in best.items()}
    if len(vname) != len(h.vertices):
        raise ReplacementError("range graph has isolated vertices")
    shape = Graph.build(vname.values(),
                        [Edge(name[e.id], vname[e.src], vname[e.dst], e.color) for e in h.edges])
    cells = tuple(sorted((d, (name[b[0]], b[1:])) for d, b in f.mapping))
    return KVertex(f.domain, shape, cells)


def to_rearrangement(sys: ReplacementSystem, v: KVertex) -> Rearrangement:
    """A representative X(G0) -> X(v.shape) of the class v."""
    target = sys.with_base(v.shape, "")
    pairs = [(d, (e,) + s) for d, (e, s) in v.cells]
    return reduce(PairDiagram(sys, target, v.frontier, frontier_of(p[1] for p in pairs),
                              tuple(sorted(pairs))))


def root_vertex(sys: ReplacementSystem) -> KVertex:
    return canonical_vertex(identity(sys))


def vertex_of_frontier(sys: ReplacementSystem, fr: Frontier) -> KVertex:
    """Class of the expansion morphism X(G0) -> X(E) for the expansion E given by fr."""
    return canonical_vertex(expansion_morphism(sys, fr))


def _simple_expansion(rsys: ReplacementSystem, edge: str) -> Rearrangement:
    return expansion_morphism(rsys, expand(rsys, base_frontier(rsys), (edge,)))


def expand_vertex(sys: ReplacementSystem, v: KVertex, edges: Iterable[str]) -> KVertex:
    f = to_rearrangement(sys, v)
    fr = base_frontier(f.range_sys)
    for e in edges:
        fr = expand(f.range_sys, fr, (e,))
    return canonical_vertex(compose(f, expansion_morphism(f.range_sys, fr)))


def expansion_neighbors(sys: ReplacementSystem, v: KVertex) -> list[KVertex]:
    """One up-neighbor per edge of the shape, in edge order."""
    f = to_rearrangement(sys, v)
    return [canonical_vertex(compose(f, _simple_expansion(f.range_sys, e))) for e in v.shape.edge_ids]


# ---------------------------------------------------------------------------
# characteristic maps

@dataclass(frozen=True, order=True)
class CharacteristicMap:
    color: str
    looped: bool
    edge_pairs: tuple[tuple[str, str], ...]
    vertex_pairs: tuple[tuple[str, str], ...] = field(compare=False)

    @cached_property
    def edge(self) -> dict[str, str]:
        return dict(self.edge_pairs)

    @cached_property
    def vertex(self) -> dict[str, str]:
        return dict(self.vertex_pairs)

    @property
    def image(self) -> frozenset[str]:
        return frozenset(x for _, x in self.edge_pairs)

    def describe(self) -> str:
        kind = "loop" if self.looped else "plain"
        return f"{self.color}/{kind}: " + ", ".join(f"{z}->{x}" for z, x in self.edge_pairs)


def _rule_shape(sys: ReplacementSystem, color: str, looped: bool):
    rule = sys.rule(color)
    merge = {rule.terminal: rule.initial} if looped else {}
    m = lambda x: merge.get(x, x)
    verts = sorted({m(v) for v in rule.graph.vertices})
    edges = [(e.id, m(e.src), m(e.dst), e.color) for e in rule.graph.edges]
    interior = set(rule.interior)
    return verts, edges, interior, m


def _embeddings(sys: ReplacementSystem, g: Graph, color: str, looped: bool) -> list[CharacteristicMap]:
    verts, edges, interior, m = _rule_shape(sys, color, looped)
    rule = sys.rule(color)
    rin = {v: [] for v in verts}
    rout = {v: [] for v in verts}
    for eid, s, t, c in edges:
        rout[s].append(c)
        rin[t].append(c)
    gin = {v: sorted(e.color for e in g.in_edges[v]) for v in g.vertices}
    gout = {v: sorted(e.color for e in g.out_edges[v]) for v in g.vertices}
    pair_count: dict[tuple, int] = {}
    for e in g.edges:
        pair_count[(e.src, e.dst, e.color)] = pair_count.get((e.src, e.dst, e.color), 0) + 1
    rpair: dict[tuple, list[str]] = {}
    for eid, s, t, c in edges:
        rpair.setdefault((s, t, c), []).append(eid)

    # interior vertices first, then by adjacency
    nbrs = {v: set() for v in verts}
    for _, s, t, _ in edges:
        nbrs[s].add(t)
        nbrs[t].add(s)
    order: list[str] = []
    pool = sorted(verts, key=lambda v: (v not in interior, v))
    while len(order) < len(verts):
        nxt = [v for v in pool if v not in order and nbrs[v] & set(order)]
        order.append(nxt[0] if nxt else next(v for v in pool if v not in order))

    def candidates(v):
        out = []
        for y in g.vertices:
            if v in interior:
                if gin[y] != sorted(rin[v]) or gout[y] != sorted(rout[v]):
                    continue
            elif len(gin[y]) < len(rin[v]) or len(gout[y]) < len(rout[v]):
                continue
            out.append(y)
        return out

    cands = {v: candidates(v) for v in verts}
    assign: dict[str, str] = {}
    used: set[str] = set()
    results = []

    def fits(v, y) -> bool:
        for (s, t, c), ids in rpair.items():
            if (s == v or t == v) and (s in assign or s == v) and (t in assign or t == v):
                ys = y if s == v else assign[s]
                yt = y if t == v else assign[t]
                if pair_count.get((ys, yt, c), 0) < len(ids):
                    return False
        return True

    def rec(i):
        if i == len(order):
            groups = sorted(rpair.items())
            options = []
            for (s, t, c), ids in groups:
                pool_g = sorted(e.id for e in g.out_edges[assign[s]]
                                if e.dst == assign[t] and e.color == c)
                options.append([(ids, perm) for perm in itertools.permutations(pool_g, len(ids))])
            for combo in itertools.product(*options):
                emap = {}
                for ids, perm in combo:
                    emap.update(zip(ids, perm))
                vmap = {v: assign[m(v)] for v in rule.graph.vertices}
                results.append(CharacteristicMap(color, looped, tuple(sorted(emap.items())),
                                                 tuple(sorted(vmap.items()))))
            return
        v = order[i]
        for y in cands[v]:
            if y in used or not fits(v, y):
                continue
            assign[v] = y
            used.add(y)
            rec(i + 1)
            del assign[v]
            used.discard(y)

    rec(0)
    return results


def characteristic_maps(sys: ReplacementSystem, g: Graph) -> list[CharacteristicMap]:
    out = []
    for color in sys.colors:
        for looped in (False, True):
            out.extend(_embeddings(sys, g, color, looped))
    out.sort(key=lambda c: (c.color, c.looped, tuple(x for _, x in c.edge_pairs), c.vertex_pairs))
    return out


def collapsible_subgraphs(sys: ReplacementSystem, g: Graph) -> list[frozenset[str]]:
    return sorted({c.image for c in characteristic_maps(sys, g)}, key=lambda s: sorted(s))


def _fresh_edge(g: Graph) -> str:
    k = 0
    while f"new{k}" in g.edge_map:
        k += 1
    return f"new{k}"


def contract_graph(sys: ReplacementSystem, g: Graph, chi: CharacteristicMap) -> Graph:
    return collapse_graph(sys, g, chi.color, chi.edge, _fresh_edge(g))


def contract(sys: ReplacementSystem, v: KVertex, chi: CharacteristicMap) -> KVertex:
    f = to_rearrangement(sys, v)
    if not set(chi.edge.values()) <= set(v.shape.edge_ids):
        raise ReplacementError("characteristic map does not land in the shape")
    c = contraction_morphism(f.range_sys, chi.color, chi.edge, _fresh_edge(v.shape))
    return canonical_vertex(compose(f, c))


def down_neighbors(sys: ReplacementSystem, v: KVertex) -> list[tuple[CharacteristicMap, KVertex]]:
    return [(chi, contract(sys, v, chi)) for chi in characteristic_maps(sys, v.shape)]


# ---------------------------------------------------------------------------
# partial order

def _is_expansion(h: PairDiagram) -> bool:
    return all(len(b) == 1 for _, b in h.mapping)


def precedes(f: PairDiagram, g: PairDiagram) -> bool:
    """Whether g = x ∘ f for an expansion morphism x."""
    if f.domain_sys.base != g.domain_sys.base:
        raise ReplacementError("rearrangements have different domains")
    return _is_expansion(compose(invert(f), g))


def least_upper_bound(f: PairDiagram, g: PairDiagram) -> KVertex:
    if f.domain_sys.base != g.domain_sys.base:
        raise ReplacementError("rearrangements have different domains")
    h = compose(invert(f), g)
    x = expansion_morphism(f.range_sys, h.domain)
    return canonical_vertex(compose(f, x))


def vertex_precedes(sys: ReplacementSystem, u: KVertex, v: KVertex) -> bool:
    return precedes(to_rearrangement(sys, u), to_rearrangement(sys, v))


def vertex_lub(sys: ReplacementSystem, u: KVertex, v: KVertex) -> KVertex:
    return least_upper_bound(to_rearrangement(sys, u), to_rearrangement(sys, v))


def cube(sys: ReplacementSystem, v: KVertex, edges: Iterable[str]) -> dict[frozenset[str], KVertex]:
    """Vertices obtained by expanding each subset of the given shape edges."""
    s = sorted(set(edges))
    if len(s) > MAX_CUBE_DIM:
        raise SizeCapExceeded(f"cube dimension {len(s)} exceeds {MAX_CUBE_DIM}")
    for e in s:
        if e not in v.shape.edge_map:
            raise ReplacementError(f"{e} is not an edge of the shape")
    out = {}
    for k in range(len(s) + 1):
        for t in itertools.combinations(s, k):
            out[frozenset(t)] = expand_vertex(sys, v, t) if t else v
    return out


# ---------------------------------------------------------------------------
# links and contraction complexes

def contraction_complex(sys: ReplacementSystem, g: Graph) -> FlagComplex:
    maps = characteristic_maps(sys, g)
    return FlagComplex.build(maps, lambda a, b: not (a.image & b.image))


def descending_link(sys: ReplacementSystem, v: KVertex) -> FlagComplex:
    """Down-neighbors, adjacent when they span a square below v.

    Built from the order structure alone (common lower neighbor and least
    upper bound equal to v) and cross-checked against the contraction complex
    of the shape, which uses edge-disjointness instead.
    """
    down = down_neighbors(sys, v)
    lower = [{w for _, w in down_neighbors(sys, u)} for _, u in down]
    reps = [to_rearrangement(sys, u) for _, u in down]

    def adjacent(i, j):
        return bool(lower[i] & lower[j]) and least_upper_bound(reps[i], reps[j]) == v

    n = len(down)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if adjacent(i, j)]
    link = FlagComplex.from_edges(n, edges, [chi for chi, _ in down])
    con = contraction_complex(sys, v.shape)
    if link != con:
        raise AssertionError("descending link and contraction complex disagree")
    return link


# ---------------------------------------------------------------------------
# the graph family

def expand_graph(sys: ReplacementSystem, g: Graph, edge: str) -> Graph:
    s = sys.with_base(g)
    return realize(s, expand(s, base_frontier(s), (edge,)))


def enumerate_family(sys: ReplacementSystem, max_edges: int, extra: Optional[int] = None) -> list[Graph]:
    """Canonical forms of the graphs reachable from the base with at most max_edges edges.

    The search moves by single expansions and contractions and never leaves
    graphs with more than max_edges + (largest rule size - 1) edges.
    """
    bound = max_edges + (sys.max_rule_size - 1 if extra is None else extra)
    start = canonical_form(sys.base)
    seen = {certificate(start): start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        nexts = []
        for e in g.edges:
            if len(g.edges) - 1 + sys.rule_size(e.color) <= bound:
                nexts.append(expand_graph(sys, g, e.id))
        for chi in characteristic_maps(sys, g):
            nexts.append(contract_graph(sys, g, chi))
        for h in nexts:
            c = certificate(h)
            if c not in seen:
                hc = canonical_form(h)
                seen[c] = hc
                queue.append(hc)
                if len(seen) > 10**5:
                    raise SizeCapExceeded("family enumeration exceeded 100000 classes")
    out = [g for g in seen.values() if len(g.edges) <= max_edges]
    return sorted(out, key=lambda g: (len(g.edges), certificate(g)))


def contracts_into(sys: ReplacementSystem, g: Graph, family: Sequence[Graph]) -> bool:
    """Whether repeated contraction of g reaches a graph isomorphic to a member of family."""
    targets = {certificate(h) for h in family}
    seen = set()
    stack = [g]
    while stack:
        h = stack.pop()
        c = certificate(h)
        if c in targets:
            return True
        if c in seen:
            continue
        seen.add(c)
        for chi in characteristic_maps(sys, h):
            stack.append(contract_graph(sys, h, chi))
    return False


def max_overlap(sys: ReplacementSystem, graphs: Iterable[Graph]) -> int:
    best = 0
    for g in graphs:
        subs = collapsible_subgraphs(sys, g)
        for i, s in enumerate(subs):
            best = max(best, sum(1 for j, t in enumerate(subs) if j != i and s & t))
    return best


class ShapeError(ValueError):
    pass


def source_tree(g: Graph) -> Graph:
    """Tree on the sources of g, joining sources that share a sink."""
    n_comp = len(connected_components(g))
    if n_comp != 1 or len(g.edges) != len(g.vertices) - 1:
        raise ShapeError("graph is not a tree")
    sources = [v for v in g.vertices if g.in_degree(v) == 0]
    if any(g.in_degree(v) and g.out_degree(v) for v in g.vertices):
        raise ShapeError("graph has a vertex that is neither a source nor a sink")
    pairs = set()
    for v in g.vertices:
        ins = sorted(e.src for e in g.in_edges[v])
        for a, b in itertools.combinations(ins, 2):
            pairs.add((a, b))
    return Graph.build(sources, [Edge(f"{a}~{b}", a, b) for a, b in sorted(pairs)])


# ---------------------------------------------------------------------------
# finiteness evidence

def degree_transfer(sys: ReplacementSystem) -> dict:
    """Linear map sending per-color (in, out) counts at a vertex to the counts
    after every incident edge is expanded once."""
    colors = list(sys.colors)
    idx = {c: k for k, c in enumerate(colors)}
    dim = 2 * len(colors)
    mat = [[0] * dim for _ in range(dim)]
    for c in colors:
        rule = sys.rule(c)
        g = rule.graph
        # an edge of color c ending at the vertex is replaced by the edges at the terminal vertex
        for boundary, col in ((rule.terminal, 2 * idx[c]), (rule.initial, 2 * idx[c] + 1)):
            for e in g.in_edges[boundary]:
                mat[2 * idx[e.color]][col] += 1
            for e in g.out_edges[boundary]:
                mat[2 * idx[e.color] + 1][col] += 1
    return {"colors": colors, "matrix": mat}


def _vertex_vector(g: Graph, v: str, colors: list[str]) -> tuple[int, ...]:
    vec = [0] * (2 * len(colors))
    for e in g.in_edges[v]:
        vec[2 * colors.index(e.color)] += 1
    for e in g.out_edges[v]:
        vec[2 * colors.index(e.color) + 1] += 1
    return tuple(vec)


def branching_verdict(sys: ReplacementSystem, steps: int = 64) -> dict:
    fast = all(sys.rule(c).graph.degree(sys.rule(c).initial) == 1
               and sys.rule(c).graph.degree(sys.rule(c).terminal) == 1 for c in sys.colors)
    dt = degree_transfer(sys)
    colors, mat = dt["colors"], dt["matrix"]
    starts = [_vertex_vector(sys.base, v, colors) for v in sys.base.vertices]
    for c in colors:
        rule = sys.rule(c)
        starts += [_vertex_vector(rule.graph, v, colors) for v in rule.interior]
    bounded = True
    for vec in starts:
        seen = {vec}
        cur = vec
        decided = False
        for _ in range(steps):
            cur = tuple(sum(mat[r][k] * cur[k] for k in range(len(cur))) for r in range(len(cur)))
            if cur in seen:
                decided = True
                break
            seen.add(cur)
        if not decided:
            bounded = False
            break
    return {"finite_branching": bounded, "boundary_degree_one": fast, "matrix": mat, "colors": colors}


@dataclass(frozen=True)
class ClassRecord:
    edges: int
    graph: Graph
    collapsible: int
    maps: int
    con_vertices: int
    con_edges: int
    betti: tuple[int, ...]
    density: Optional[int]
    tree_size: Optional[int]

    def as_dict(self) -> dict:
        return {
            "edges": self.edges,
            "vertices": len(self.graph.vertices),
            "graph": [[e.src, e.dst, e.color] for e in self.graph.edges],
            "collapsible_subgraphs": self.collapsible,
            "characteristic_maps": self.maps,
            "con_vertices": self.con_vertices,
            "con_edges": self.con_edges,
            "betti": list(self.betti),
            "density": self.density,
            "source_tree_vertices": self.tree_size,
        }


@dataclass(frozen=True)
class FinftyReport:
    system: str
    max_edges: int
    m: int
    records: tuple[ClassRecord, ...]
    exceptions: tuple[int, ...]
    branching: dict
    overlap_bound: int

    def disconnected(self) -> list[int]:
        """Indices of classes whose contraction complex is nonempty with b0 >= 2."""
        return [i for i, r in enumerate(self.records) if r.con_vertices and r.betti[0] >= 2]

    def empty_complexes(self) -> list[int]:
        return [i for i, r in enumerate(self.records) if r.con_vertices == 0]

    def as_dict(self) -> dict:
        return {
            "system": self.system,
            "max_edges": self.max_edges,
            "m": self.m,
            "classes": [r.as_dict() for r in self.records],
            "exceptions": list(self.exceptions),
            "disconnected": self.disconnected(),
            "empty_contraction_complex": self.empty_complexes(),
            "branching": self.branching,
            "overlap_bound": self.overlap_bound,
        }


def analyze_class(sys: ReplacementSystem, g: Graph, betti_dim: int = 1) -> ClassRecord:
    from .homology import density as _density
    maps = characteristic_maps(sys, g)
    con = FlagComplex.build(maps, lambda a, b: not (a.image & b.image))
    try:
        tree = len(source_tree(g).vertices)
    except ShapeError:
        tree = None
    return ClassRecord(
        edges=len(g.edges), graph=g, collapsible=len({c.image for c in maps}), maps=len(maps),
        con_vertices=con.n, con_edges=len(con.edges), betti=tuple(betti(con, betti_dim)),
        density=_density(con) if con.n else None, tree_size=tree)


def finfty_evidence(sys: ReplacementSystem, max_edges: int, m: int, betti_dim: int = 1,
                    threads: int = 1) -> FinftyReport:
    family = enumerate_family(sys, max_edges)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda g: analyze_class(sys, g, betti_dim), family))
    else:
        records = [analyze_class(sys, g, betti_dim) for g in family]
    exceptions = tuple(i for i, r in enumerate(records) if r.collapsible < m)
    return FinftyReport(sys.name, max_edges, m, tuple(records), exceptions,
                        branching_verdict(sys), max_overlap(sys, family))
