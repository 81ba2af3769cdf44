"""Flag complexes and their rational homology."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Hashable, Iterable, Optional, Sequence

MAX_SIMPLICES = 10**5


class ComplexTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FlagComplex:
    """Clique complex of a simple undirected graph on vertices 0..n-1."""
    labels: tuple
    edges: frozenset[tuple[int, int]]

    @classmethod
    def build(cls, labels: Sequence[Hashable], adjacent) -> "FlagComplex":
        """adjacent(a, b) decides adjacency between two labels."""
        labels = tuple(labels)
        es = frozenset((i, j) for i in range(len(labels)) for j in range(i + 1, len(labels))
                       if adjacent(labels[i], labels[j]))
        return cls(labels, es)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Optional[Sequence] = None):
        es = frozenset((min(a, b), max(a, b)) for a, b in edges if a != b)
        return cls(tuple(labels) if labels is not None else tuple(range(n)), es)

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return tuple(frozenset(s) for s in nb)

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def cliques(self, max_size: int) -> list[list[tuple[int, ...]]]:
        """Cliques grouped by size 1..max_size (index 0 holds the singletons)."""
        out: list[list[tuple[int, ...]]] = [[] for _ in range(max_size)]
        total = 0

        def grow(clique: tuple[int, ...], cands: list[int]):
            nonlocal total
            out[len(clique) - 1].append(clique)
            total += 1
            if total > MAX_SIMPLICES:
                raise ComplexTooLarge(f"more than {MAX_SIMPLICES} simplices")
            if len(clique) == max_size:
                return
            for i, v in enumerate(cands):
                grow(clique + (v,), [w for w in cands[i + 1:] if w in self.neighbors[v]])

        if max_size >= 1:
            for v in range(self.n):
                grow((v,), sorted(w for w in self.neighbors[v] if w > v))
        for level in out:
            level.sort()
        return out

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbors[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


def _rank(rows: list[dict[int, int]]) -> int:
    """Rank over the rationals by fraction-free elimination on sparse integer rows."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                pivots[col] = {k: v // g for k, v in row.items()}
                rank += 1
                break
            a, b = piv[col], row[col]
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                new[k] = new.get(k, 0) - b * v
            g = 0
            for v in new.values():
                g = gcd(g, v)
            row = {k: v // g for k, v in new.items() if v} if g else {}
    return rank


def betti(x: FlagComplex, max_dim: int) -> list[int]:
    """Rational Betti numbers b_0..b_max_dim of the clique complex."""
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    levels = x.cliques(max_dim + 2)
    index = [{s: i for i, s in enumerate(level)} for level in levels]
    ranks = [0] * (max_dim + 3)
    # ranks[k] = rank of the boundary map from k-simplices to (k-1)-simplices
    for k in range(1, max_dim + 2):
        rows = []
        for s in levels[k]:
            row = {}
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                row[index[k - 1][face]] = -1 if j % 2 else 1
            rows.append(row)
        ranks[k] = _rank(rows)
    return [len(levels[k]) - ranks[k] - ranks[k + 1] for k in range(max_dim + 1)]


def density(x: FlagComplex) -> int:
    """Least k such that every vertex misses at most k other vertices."""
    if x.n == 0:
        raise ValueError("density of the empty complex is undefined")
    return max(x.n - 1 - len(x.neighbors[v]) for v in range(x.n))


def is_k_ground(x: FlagComplex, simplex: Sequence[int], k: int) -> bool:
    for v in range(x.n):
        missed = sum(1 for u in simplex if u == v or u not in x.neighbors[v])
        if missed > k:
            return False
    return True


def is_grounded(x: FlagComplex, n: int, k: int) -> bool:
    """Whether some n-simplex is a k-ground (a vertex counts as missing itself)."""
    if n + 1 > x.n:
        return False
    for s in x.cliques(n + 1)[n]:
        if is_k_ground(x, s, k):
            return True
    return False

