"""Finite directed multigraphs with colored edges.

Vertices and edges are identified by strings.  Loops and parallel edges are
allowed.  Everything here is immutable and deterministic: results that are
lists come back in a fixed order that depends only on the input values.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

DEFAULT_COLOR = "black"


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    dst: str
    color: str = DEFAULT_COLOR

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        seen = set()
        for e in self.edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.id!r} has an endpoint outside the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable) -> "Graph":
        """Accepts Edge objects or (id, src, dst[, color]) tuples; sorts both."""
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        return cls(tuple(sorted(set(vertices))), tuple(sorted(es)))

    @classmethod
    def from_edges(cls, edges: Iterable, extra_vertices: Iterable[str] = ()) -> "Graph":
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        vs = set(extra_vertices)
        for e in es:
            vs.add(e.src)
            vs.add(e.dst)
        return cls.build(vs, es)

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def edge(self, eid: str) -> Edge:
        return self.edge_map[eid]

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        d: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            d[e.src].append(e)
        return {v: tuple(es) for v, es in d.items()}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        d: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            d[e.dst].append(e)
        return {v: tuple(es) for v, es in d.items()}

    def in_degree(self, v: str) -> int:
        return len(self.in_edges[v])

    def out_degree(self, v: str) -> int:
        return len(self.out_edges[v])

    def degree(self, v: str) -> int:
        return self.in_degree(v) + self.out_degree(v)

    def incident(self, v: str) -> list[Edge]:
        seen = {}
        for e in self.out_edges[v] + self.in_edges[v]:
            seen[e.id] = e
        return [seen[k] for k in sorted(seen)]

    @cached_property
    def colors(self) -> tuple[str, ...]:
        return tuple(sorted({e.color for e in self.edges}))

    def isolated_vertices(self) -> list[str]:
        return [v for v in self.vertices if self.degree(v) == 0]

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class GraphMap:
    vertex_pairs: tuple[tuple[str, str], ...]
    edge_pairs: tuple[tuple[str, str], ...]

    @cached_property
    def vertex(self) -> dict[str, str]:
        return dict(self.vertex_pairs)

    @cached_property
    def edge(self) -> dict[str, str]:
        return dict(self.edge_pairs)

    @classmethod
    def make(cls, vmap: Mapping[str, str], emap: Mapping[str, str]) -> "GraphMap":
        return cls(tuple(sorted(vmap.items())), tuple(sorted(emap.items())))

    def then(self, other: "GraphMap") -> "GraphMap":
        """Apply self first, then other."""
        return GraphMap.make({k: other.vertex[v] for k, v in self.vertex_pairs},
                             {k: other.edge[v] for k, v in self.edge_pairs})

    def inverse(self) -> "GraphMap":
        return GraphMap.make({v: k for k, v in self.vertex_pairs},
                             {v: k for k, v in self.edge_pairs})


def identity_map(g: Graph) -> GraphMap:
    return GraphMap.make({v: v for v in g.vertices}, {e: e for e in g.edge_ids})


def is_graph_map(g: Graph, h: Graph, m: GraphMap) -> bool:
    for e in g.edges:
        f = h.edge_map.get(m.edge.get(e.id))
        if f is None or f.color != e.color:
            return False
        if m.vertex.get(e.src) != f.src or m.vertex.get(e.dst) != f.dst:
            return False
    hv = set(h.vertices)
    return all(m.vertex.get(v) in hv for v in g.vertices)


def relabel(g: Graph, vmap: Mapping[str, str], emap: Optional[Mapping[str, str]] = None) -> Graph:
    emap = emap or {}
    return Graph.build((vmap.get(v, v) for v in g.vertices),
                       (Edge(emap.get(e.id, e.id), vmap.get(e.src, e.src),
                             vmap.get(e.dst, e.dst), e.color) for e in g.edges))


def degree_signature(g: Graph, v: str) -> tuple:
    cols = sorted([("in", e.color) for e in g.in_edges[v]] + [("out", e.color) for e in g.out_edges[v]])
    return (g.in_degree(v), g.out_degree(v), tuple(cols))


def connected_components(g: Graph) -> list[frozenset[str]]:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = find(e.src), find(e.dst)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[str, set[str]] = {}
    for v in g.vertices:
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=lambda s: min(s))


# ---------------------------------------------------------------------------
# color refinement on vertex colorings

class _Indexed:
    """Integer view of a graph used by the search routines."""

    def __init__(self, g: Graph):
        self.g = g
        self.names = list(g.vertices)
        self.index = {v: i for i, v in enumerate(self.names)}
        self.n = len(self.names)
        self.arcs = [(self.index[e.src], self.index[e.dst], e.color) for e in g.edges]
        self.out: list[list[tuple[str, int]]] = [[] for _ in range(self.n)]
        self.inc: list[list[tuple[str, int]]] = [[] for _ in range(self.n)]
        for s, t, c in self.arcs:
            self.out[s].append((c, t))
            self.inc[t].append((c, s))

    def initial_coloring(self, seed: Optional[Sequence] = None) -> list:
        keys = []
        for i in range(self.n):
            k = (tuple(sorted(c for c, _ in self.out[i])), tuple(sorted(c for c, _ in self.inc[i])),
                 sum(1 for c, t in self.out[i] if t == i))
            keys.append((seed[i] if seed is not None else 0, k))
        return _rank(keys)

    def refine(self, col: list[int]) -> list[int]:
        ncells = len(set(col))
        while True:
            keys = []
            for i in range(self.n):
                keys.append((col[i],
                             tuple(sorted((c, col[t]) for c, t in self.out[i])),
                             tuple(sorted((c, col[s]) for c, s in self.inc[i]))))
            new = _rank(keys)
            k = len(set(new))
            if k == ncells:
                return new
            col, ncells = new, k


def _rank(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _individualize(col: list[int], v: int) -> list[int]:
    c = col[v]
    return _rank([(x, 0 if (i == v or x != c) else 1) for i, x in enumerate(col)])


def _target_cell(col: list[int]) -> Optional[list[int]]:
    cells: dict[int, list[int]] = {}
    for i, c in enumerate(col):
        cells.setdefault(c, []).append(i)
    best = None
    for c in sorted(cells):
        if len(cells[c]) > 1 and (best is None or len(cells[c]) < len(best)):
            best = cells[c]
    return best


class _Canonizer:
    """Individualization/refinement search for a canonical vertex labeling.

    Leaves whose encodings coincide yield automorphisms, which are used both to
    jump back past equivalent subtrees and to skip children lying in an orbit
    of an already explored child.
    """

    def __init__(self, ig: _Indexed):
        self.ig = ig
        self.first = None
        self.best = None
        self.generators: list[list[int]] = []

    def encode(self, lab: list[int]) -> tuple:
        return tuple(sorted((lab[s], lab[t], c) for s, t, c in self.ig.arcs))

    def run(self) -> list[int]:
        col = self.ig.refine(self.ig.initial_coloring())
        self.search(col, [])
        return self.best[2]

    def search(self, col: list[int], path: list[int]) -> Optional[int]:
        col = self.ig.refine(col)
        cell = _target_cell(col)
        if cell is None:
            return self.leaf(col, path)
        explored: list[int] = []
        for v in cell:
            if explored and self.pruned(v, explored, path):
                continue
            explored.append(v)
            jump = self.search(_individualize(col, v), path + [v])
            if jump is not None and jump < len(path):
                return jump
        return None

    def leaf(self, lab: list[int], path: list[int]) -> Optional[int]:
        enc = self.encode(lab)
        if self.first is None:
            self.first = self.best = (enc, path, lab)
            return None
        for ref in (self.first, self.best):
            if enc == ref[0]:
                inv = [0] * len(lab)
                for i, x in enumerate(lab):
                    inv[x] = i
                gamma = [inv[ref[2][i]] for i in range(len(lab))]
                self.generators.append(gamma)
                c = 0
                while c < len(path) and path[c] == ref[1][c]:
                    c += 1
                return c
        if enc < self.best[0]:
            self.best = (enc, path, lab)
        return None

    def pruned(self, v: int, explored: list[int], path: list[int]) -> bool:
        gens = [g for g in self.generators if all(g[p] == p for p in path)]
        if not gens:
            return False
        orbit = {v}
        todo = [v]
        while todo:
            x = todo.pop()
            for g in gens:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    todo.append(y)
        return any(u in orbit for u in explored)


def canonical_labeling(g: Graph) -> dict[str, int]:
    ig = _Indexed(g)
    if ig.n == 0:
        return {}
    lab = _Canonizer(ig).run()
    return {ig.names[i]: lab[i] for i in range(ig.n)}


def canonical_form(g: Graph) -> Graph:
    """Isomorphic copy with vertices v0.. and edges e0.. named canonically."""
    lab = canonical_labeling(g)
    n = len(g.vertices)
    w = len(str(max(n - 1, 0)))
    rows = sorted((lab[e.src], lab[e.dst], e.color) for e in g.edges)
    we = len(str(max(len(rows) - 1, 0)))
    vs = [f"v{i:0{w}d}" for i in range(n)]
    es = [Edge(f"e{k:0{we}d}", vs[s], vs[t], c) for k, (s, t, c) in enumerate(rows)]
    return Graph(tuple(vs), tuple(es))


def certificate(g: Graph) -> tuple:
    c = canonical_form(g)
    idx = {v: i for i, v in enumerate(c.vertices)}
    return (len(c.vertices), tuple((idx[e.src], idx[e.dst], e.color) for e in c.edges))


# ---------------------------------------------------------------------------
# isomorphism enumeration

def _vertex_maps(g: Graph, h: Graph, pinned: Optional[Mapping[str, str]], rng=None,
                 limit: Optional[int] = None):
    """Yield vertex bijections g -> h compatible with all edge multiplicities."""
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return
    if sorted(e.color for e in g.edges) != sorted(e.color for e in h.edges):
        return
    ig, ih = _Indexed(g), _Indexed(h)
    # refine the disjoint union so that colors are comparable across g and h
    union = Graph.build(["g|" + v for v in g.vertices] + ["h|" + v for v in h.vertices],
                        [Edge("g|" + e.id, "g|" + e.src, "g|" + e.dst, e.color) for e in g.edges]
                        + [Edge("h|" + e.id, "h|" + e.src, "h|" + e.dst, e.color) for e in h.edges])
    iu = _Indexed(union)
    col = iu.refine(iu.initial_coloring())
    gcol = {v: col[iu.index["g|" + v]] for v in g.vertices}
    hcol = {v: col[iu.index["h|" + v]] for v in h.vertices}
    if sorted(gcol.values()) != sorted(hcol.values()):
        return
    mult_g: dict[tuple, int] = {}
    for e in g.edges:
        mult_g[(e.src, e.dst, e.color)] = mult_g.get((e.src, e.dst, e.color), 0) + 1
    mult_h: dict[tuple, int] = {}
    for e in h.edges:
        mult_h[(e.src, e.dst, e.color)] = mult_h.get((e.src, e.dst, e.color), 0) + 1
    nbrs_g: dict[str, set[str]] = {v: set() for v in g.vertices}
    for e in g.edges:
        nbrs_g[e.src].add(e.dst)
        nbrs_g[e.dst].add(e.src)

    # order: pinned first, then BFS by connectivity, rarest color class first
    order: list[str] = []
    placed: set[str] = set()
    classes: dict[int, int] = {}
    for c in gcol.values():
        classes[c] = classes.get(c, 0) + 1
    pinned = dict(pinned or {})
    for v in sorted(pinned):
        order.append(v)
        placed.add(v)
    remaining = sorted(g.vertices, key=lambda v: (classes[gcol[v]], v))
    while len(order) < len(g.vertices):
        frontier = [v for v in remaining if v not in placed and nbrs_g[v] & placed]
        nxt = frontier[0] if frontier else next(v for v in remaining if v not in placed)
        order.append(nxt)
        placed.add(nxt)

    pair_colors_g: dict[tuple[str, str], list[str]] = {}
    for (s, t, c), k in mult_g.items():
        pair_colors_g.setdefault((s, t), []).extend([c] * k)
    pair_colors_h: dict[tuple[str, str], list[str]] = {}
    for (s, t, c), k in mult_h.items():
        pair_colors_h.setdefault((s, t), []).extend([c] * k)
    for d in (pair_colors_g, pair_colors_h):
        for k in d:
            d[k].sort()
    by_color_h: dict[int, list[str]] = {}
    for v in h.vertices:
        by_color_h.setdefault(hcol[v], []).append(v)

    assign: dict[str, str] = {}
    used: set[str] = set()
    count = [0]

    def consistent(v: str, w: str) -> bool:
        if pair_colors_g.get((v, v), []) != pair_colors_h.get((w, w), []):
            return False
        for u, x in assign.items():
            if pair_colors_g.get((v, u), []) != pair_colors_h.get((w, x), []):
                return False
            if pair_colors_g.get((u, v), []) != pair_colors_h.get((x, w), []):
                return False
        return True

    def rec(i: int):
        if limit is not None and count[0] >= limit:
            return
        if i == len(order):
            count[0] += 1
            yield dict(assign)
            return
        v = order[i]
        if v in pinned:
            cands = [pinned[v]] if pinned[v] in hcol and hcol[pinned[v]] == gcol[v] else []
        else:
            cands = list(by_color_h.get(gcol[v], []))
            if rng is not None:
                rng.shuffle(cands)
        for w in cands:
            if w in used or not consistent(v, w):
                continue
            assign[v] = w
            used.add(w)
            yield from rec(i + 1)
            del assign[v]
            used.discard(w)
            if limit is not None and count[0] >= limit:
                return

    yield from rec(0)


def _edge_matchings(g: Graph, h: Graph, vmap: Mapping[str, str], rng=None):
    groups_g: dict[tuple, list[str]] = {}
    for e in g.edges:
        groups_g.setdefault((vmap[e.src], vmap[e.dst], e.color), []).append(e.id)
    groups_h: dict[tuple, list[str]] = {}
    for e in h.edges:
        groups_h.setdefault((e.src, e.dst, e.color), []).append(e.id)
    keys = sorted(groups_g)
    if rng is not None:
        choice = {}
        for k in keys:
            tgt = list(groups_h[k])
            rng.shuffle(tgt)
            choice.update(zip(groups_g[k], tgt))
        yield choice
        return
    options = [list(itertools.permutations(groups_h[k])) for k in keys]
    for combo in itertools.product(*options):
        m = {}
        for k, perm in zip(keys, combo):
            m.update(zip(groups_g[k], perm))
        yield m


def isomorphisms(g: Graph, h: Graph, pinned: Optional[Mapping[str, str]] = None,
                 limit: Optional[int] = None) -> list[GraphMap]:
    """All isomorphisms g -> h extending `pinned`, sorted by the edge image sequence."""
    out = []
    for vmap in _vertex_maps(g, h, pinned):
        for emap in _edge_matchings(g, h, vmap):
            out.append(GraphMap.make(vmap, emap))
            if limit is not None and len(out) >= limit:
                break
        if limit is not None and len(out) >= limit:
            break
    ids = g.edge_ids
    vids = g.vertices
    out.sort(key=lambda m: (tuple(m.edge[e] for e in ids), tuple(m.vertex[v] for v in vids)))
    return out


def automorphisms(g: Graph, limit: Optional[int] = None) -> list[GraphMap]:
    return isomorphisms(g, g, limit=limit)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return next(_vertex_maps(g, h, None), None) is not None


def random_isomorphism(g: Graph, h: Graph, rng: random.Random) -> Optional[GraphMap]:
    """Some isomorphism found by a randomized search (not uniformly distributed)."""
    for vmap in _vertex_maps(g, h, None, rng=rng):
        emap = next(_edge_matchings(g, h, vmap, rng=rng))
        return GraphMap.make(vmap, emap)
    return None
