"""Edge replacement systems, edge addresses, frontiers and their realizations.

An address is a tuple of edge ids: a base edge followed by rule edges, each
taken from the rule for the color of the previous symbol.  A frontier is the
leaf set of a finite expansion tree, i.e. a complete prefix code of addresses.

Vertex addresses are tuples as well: ``(v,)`` for a base vertex ``v`` and
``(*prefix, nu)`` for the interior rule vertex ``nu`` created when the edge
``prefix`` is expanded.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

from .graph_core import Edge, Graph, GraphError

Address = tuple[str, ...]
VertexAddress = tuple[str, ...]

# rule symbols are concatenated into addresses, so they are kept simple; base
# ids may also carry the "." ":" "@" used by derived graphs
ID_PATTERN = re.compile(r"^[A-Za-z0-9_+\-]+$")
BASE_ID_PATTERN = re.compile(r"^[A-Za-z0-9_+\-.:@]+$")
DEFAULT_MAX_CELLS = 10**6


class ReplacementError(ValueError):
    pass


class SizeCapExceeded(ReplacementError):
    pass


def max_cells() -> int:
    raw = os.environ.get("REARRANGE_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


@dataclass(frozen=True)
class Rule:
    graph: Graph
    initial: str
    terminal: str

    @cached_property
    def interior(self) -> tuple[str, ...]:
        return tuple(v for v in self.graph.vertices if v not in (self.initial, self.terminal))

    def __len__(self) -> int:
        return len(self.graph.edges)


@dataclass(frozen=True)
class ReplacementSystem:
    base: Graph
    rules: tuple[tuple[str, Rule], ...]
    name: str = ""

    def __post_init__(self):
        names = [c for c, _ in self.rules]
        if len(set(names)) != len(names):
            raise ReplacementError("a color has more than one rule")
        object.__setattr__(self, "rules", tuple(sorted(self.rules, key=lambda cr: cr[0])))
        for c, r in self.rules:
            for v in (r.initial, r.terminal):
                if v not in r.graph.vertices:
                    raise ReplacementError(f"rule {c}: boundary vertex {v!r} is not in the rule graph")
            if r.initial == r.terminal:
                raise ReplacementError(f"rule {c}: initial and terminal vertex coincide")
        missing = set(self.base.colors)
        for _, r in self.rules:
            missing |= set(r.graph.colors)
        missing -= set(names)
        if missing:
            raise ReplacementError(f"no rule for color(s) {sorted(missing)}")
        checks = [(self.base, "base", BASE_ID_PATTERN)]
        checks += [(r.graph, f"rule {c}", ID_PATTERN) for c, r in self.rules]
        for g, where, pattern in checks:
            for x in list(g.vertices) + list(g.edge_ids):
                if not pattern.match(x):
                    raise ReplacementError(f"{where}: identifier {x!r} uses reserved characters")

    @classmethod
    def single(cls, base: Graph, rule: Rule, name: str = "") -> "ReplacementSystem":
        colors = set(base.colors) | set(rule.graph.colors)
        if len(colors) > 1:
            raise ReplacementError("single-rule system with several colors")
        color = colors.pop() if colors else "black"
        return cls(base, ((color, rule),), name)

    @cached_property
    def rule_map(self) -> dict[str, Rule]:
        return dict(self.rules)

    @property
    def colors(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.rules)

    def rule(self, color: str) -> Rule:
        return self.rule_map[color]

    def with_base(self, base: Graph, name: Optional[str] = None) -> "ReplacementSystem":
        return ReplacementSystem(base, self.rules, self.name if name is None else name)

    def same_rules(self, other: "ReplacementSystem") -> bool:
        return self.rules == other.rules

    # -- addresses --------------------------------------------------------

    def color(self, a: Address) -> str:
        """Color of the edge named by address a."""
        if not a:
            raise ReplacementError("empty address")
        try:
            c = self.base.edge(a[0]).color
        except KeyError:
            raise ReplacementError(f"{a[0]!r} is not a base edge") from None
        for z in a[1:]:
            try:
                c = self.rule_map[c].graph.edge(z).color
            except KeyError:
                raise ReplacementError(f"{z!r} is not an edge of rule {c}") from None
        return c

    def is_address(self, a: Sequence[str]) -> bool:
        try:
            self.color(tuple(a))
            return True
        except ReplacementError:
            return False

    def children(self, a: Address) -> list[Address]:
        return [a + (z,) for z in self.rule(self.color(a)).graph.edge_ids]

    def rule_size(self, color: str) -> int:
        return len(self.rule(color).graph.edges)

    @cached_property
    def max_rule_size(self) -> int:
        return max(len(r) for _, r in self.rules)


def safe_id(x: str) -> bool:
    return bool(ID_PATTERN.match(x))


# ---------------------------------------------------------------------------
# frontiers

@dataclass(frozen=True)
class Frontier:
    addresses: tuple[Address, ...]

    @cached_property
    def members(self) -> frozenset[Address]:
        return frozenset(self.addresses)

    def __contains__(self, a) -> bool:
        return tuple(a) in self.members

    def __iter__(self):
        return iter(self.addresses)

    def __len__(self) -> int:
        return len(self.addresses)

    def prefix_in(self, word: Sequence[str]) -> Optional[Address]:
        """The member that is a prefix of word, if any."""
        for k in range(1, len(word) + 1):
            if tuple(word[:k]) in self.members:
                return tuple(word[:k])
        return None


def frontier_of(addresses: Iterable[Sequence[str]]) -> Frontier:
    return Frontier(tuple(sorted(set(tuple(a) for a in addresses))))


def base_frontier(sys: ReplacementSystem) -> Frontier:
    return frontier_of((e,) for e in sys.base.edge_ids)


def frontier_problems(sys: ReplacementSystem, addresses: Iterable[Sequence[str]]) -> list[str]:
    """Reasons why the addresses do not form a frontier (empty when they do)."""
    leaves = set()
    problems = []
    for a in addresses:
        a = tuple(a)
        if not sys.is_address(a):
            problems.append(f"{'/'.join(a)} is not a valid address")
        elif a in leaves:
            problems.append(f"{'/'.join(a)} is listed twice")
        leaves.add(a)
    if problems:
        return problems
    internal = {a[:k] for a in leaves for k in range(1, len(a))}
    for a in sorted(leaves & internal):
        problems.append(f"{'/'.join(a)} is a proper prefix of another member")
    for e in sys.base.edge_ids:
        if (e,) not in leaves and (e,) not in internal:
            problems.append(f"base edge {e} is not covered")
    for p in sorted(internal):
        for c in sys.children(p):
            if c not in leaves and c not in internal:
                problems.append(f"{'/'.join(c)} is missing below {'/'.join(p)}")
    return problems


def make_frontier(sys: ReplacementSystem, addresses: Iterable[Sequence[str]]) -> Frontier:
    addresses = [tuple(a) for a in addresses]
    problems = frontier_problems(sys, addresses)
    if problems:
        raise ReplacementError("not a frontier: " + "; ".join(problems))
    return frontier_of(addresses)


def expand(sys: ReplacementSystem, f: Frontier, a: Sequence[str]) -> Frontier:
    a = tuple(a)
    if a not in f:
        raise ReplacementError(f"address {'/'.join(a)} is not in the frontier")
    new = set(f.members)
    new.discard(a)
    new.update(sys.children(a))
    if len(new) > max_cells():
        raise SizeCapExceeded(f"frontier would exceed {max_cells()} cells")
    return frontier_of(new)


def expand_all(sys: ReplacementSystem, f: Frontier, addrs: Iterable[Sequence[str]]) -> Frontier:
    for a in addrs:
        f = expand(sys, f, a)
    return f


def full_expansion(sys: ReplacementSystem, n: int) -> Frontier:
    if n < 0:
        raise ValueError("n must be nonnegative")
    cap = max_cells()
    level = [((e,), sys.base.edge(e).color) for e in sys.base.edge_ids]
    for _ in range(n):
        size = sum(sys.rule_size(c) for _, c in level)
        if size > cap:
            raise SizeCapExceeded(f"full expansion would exceed {cap} cells")
        level = [(a + (z.id,), z.color) for a, c in level for z in sys.rule(c).graph.edges]
    return frontier_of(a for a, _ in level)


def refine(sys: ReplacementSystem, f1: Frontier, f2: Frontier) -> Frontier:
    """Coarsest common refinement of two frontiers over the same base."""
    union = f1.members | f2.members
    internal = {a[:k] for a in union for k in range(1, len(a))}
    return frontier_of(union - internal)


def endpoints(sys: ReplacementSystem, a: Sequence[str]) -> tuple[VertexAddress, VertexAddress]:
    a = tuple(a)
    if not a:
        raise ReplacementError("empty address")
    try:
        e = sys.base.edge(a[0])
    except KeyError:
        raise ReplacementError(f"{a[0]!r} is not a base edge") from None
    src, dst, color = (e.src,), (e.dst,), e.color
    for k in range(1, len(a)):
        rule = sys.rule(color)
        try:
            z = rule.graph.edge(a[k])
        except KeyError:
            raise ReplacementError(f"{a[k]!r} is not an edge of rule {color}") from None
        prefix = a[:k]

        def place(x, s=src, d=dst, prefix=prefix, rule=rule):
            if x == rule.initial:
                return s
            if x == rule.terminal:
                return d
            return prefix + (x,)

        src, dst, color = place(z.src), place(z.dst), z.color
    return src, dst


def address_token(a: Sequence[str]) -> str:
    return ".".join(a)


def vertex_token(v: VertexAddress) -> str:
    if len(v) == 1:
        return v[0]
    return ".".join(v[:-1]) + ":" + v[-1]


def realize(sys: ReplacementSystem, f: Frontier) -> Graph:
    """The expansion graph whose edges are the frontier addresses."""
    edges = []
    verts: dict[str, VertexAddress] = {v: (v,) for v in sys.base.vertices}
    seen: dict[str, Address] = {}
    for a in f:
        tok = address_token(a)
        if seen.setdefault(tok, a) != a:
            raise ReplacementError(f"edge names collide on {tok!r}")
        ends = endpoints(sys, a)
        for v in ends:
            if verts.setdefault(vertex_token(v), v) != v:
                raise ReplacementError(f"vertex names collide on {vertex_token(v)!r}")
        edges.append(Edge(tok, vertex_token(ends[0]), vertex_token(ends[1]), sys.color(a)))
    # base vertices survive every expansion; interior ones appear only via edges
    return Graph.build(verts, edges)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[int, str], ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[int]:
        return {c for c, _ in self.violations}

    def lines(self) -> list[str]:
        if self.ok:
            return ["expanding: all conditions hold"]
        return [f"condition {c}: {msg}" for c, msg in self.violations]


def validate_system(sys: ReplacementSystem) -> ValidationReport:
    """Check the expanding conditions.

    1. neither the base nor any rule graph has isolated vertices;
    2. initial and terminal vertex of each rule are not joined by an edge;
    3. each rule graph has at least three vertices and two edges.
    """
    out: list[tuple[int, str]] = []
    for v in sys.base.isolated_vertices():
        out.append((1, f"base: vertex {v} is isolated"))
    for c, r in sys.rules:
        g = r.graph
        for v in g.isolated_vertices():
            out.append((1, f"rule {c}: vertex {v} is isolated"))
        for e in g.edges:
            if {e.src, e.dst} == {r.initial, r.terminal}:
                out.append((2, f"rule {c}: edge {e.id} joins initial and terminal vertex"))
        if len(g.vertices) < 3:
            out.append((3, f"rule {c}: only {len(g.vertices)} vertices"))
        if len(g.edges) < 2:
            out.append((3, f"rule {c}: only {len(g.edges)} edges"))
    return ValidationReport(tuple(out))


@lru_cache(maxsize=512)
def _is_expanding(sys: ReplacementSystem) -> bool:
    return validate_system(sys).ok


def require_expanding(sys: ReplacementSystem) -> None:
    if not _is_expanding(sys):
        raise ReplacementError(f"system {sys.name or '(unnamed)'} is not expanding")


def make_rule(edges: Iterable, initial: str, terminal: str, extra_vertices: Iterable[str] = ()) -> Rule:
    return Rule(Graph.from_edges(edges, extra_vertices), initial, terminal)


__all__ = [
    "Address", "VertexAddress", "Rule", "ReplacementSystem", "Frontier", "ReplacementError",
    "SizeCapExceeded", "GraphError", "frontier_of", "base_frontier", "make_frontier",
    "frontier_problems", "expand", "expand_all", "full_expansion", "refine", "endpoints",
    "realize", "validate_system", "ValidationReport", "require_expanding", "make_rule",
    "address_token", "vertex_token", "max_cells",
]
