"""Eventually periodic points of the symbol space and the gluing relation.

A point is stored as a preperiod (an address) followed by a period repeated
forever.  Points are kept in a normal form: the period is as short as
possible and the preperiod as short as possible (but never empty, since it
carries the base edge).  Two normal forms are equal iff they name the same
infinite sequence.

Whether a point represents a vertex is decided by tracking which endpoint
roles (source, target) a candidate vertex plays on the edges ``p[:n]``.  The
role set evolves by a fixed map per symbol, so along a periodic tail it is
eventually periodic; four passes over the period suffice to see whether it
survives (three nonempty role sets, pigeonhole on five samples).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .replacement import (Address, ReplacementError, ReplacementSystem, VertexAddress, endpoints,
                          require_expanding)

ROLE_SOURCE = "s"
ROLE_TARGET = "t"


@dataclass(frozen=True, order=True)
class PeriodicAddress:
    preperiod: Address
    period: tuple[str, ...]

    def unroll(self, n: int) -> Address:
        """The first n symbols."""
        w = list(self.preperiod[:n])
        k = 0
        while len(w) < n:
            w.append(self.period[k % len(self.period)])
            k += 1
        return tuple(w)

    def __str__(self) -> str:
        return format_periodic(self)


def _states(sys: ReplacementSystem, word: Sequence[str]) -> list[str]:
    """Color of each prefix word[:k+1]; raises on an invalid word."""
    out = []
    try:
        c = sys.base.edge(word[0]).color
    except KeyError:
        raise ReplacementError(f"{word[0]!r} is not a base edge") from None
    out.append(c)
    for z in word[1:]:
        try:
            c = sys.rule(c).graph.edge(z).color
        except KeyError:
            raise ReplacementError(f"{z!r} is not an edge of rule {c}") from None
        out.append(c)
    return out


def periodic(sys: ReplacementSystem, preperiod: Sequence[str], period: Sequence[str]) -> PeriodicAddress:
    """Validate and normalize an eventually periodic point."""
    pre, per = tuple(preperiod), tuple(period)
    if not pre or not per:
        raise ReplacementError("preperiod and period must be nonempty")
    # the color reached after each repetition of the period eventually cycles;
    # absorb the repetitions before the cycle into the preperiod
    seen: dict[str, int] = {}
    word = pre
    k = 0
    while True:
        c = _states(sys, word)[-1]
        if c in seen:
            break
        seen[c] = k
        word = word + per
        k += 1
    start_rep = seen[c]
    pre = pre + per * start_rep
    per = per * (k - start_rep)
    n = len(pre) + 3 * len(per)
    word = PeriodicAddress(pre, per).unroll(n)
    st = _states(sys, word)
    # pair sequence (symbol, color before symbol) at positions >= 1
    pairs = [None] + [(word[j], st[j - 1]) for j in range(1, n)]
    start = len(pre)
    best = len(per)
    for d in range(1, len(per)):
        if len(per) % d == 0 and all(pairs[j] == pairs[j + d] for j in range(start, start + len(per))):
            best = d
            break
    m = start
    while m > 1 and pairs[m - 1] == pairs[m - 1 + best]:
        m -= 1
    return PeriodicAddress(word[:m], word[m:m + best])


def _roles(src: VertexAddress, dst: VertexAddress, v: VertexAddress) -> frozenset[str]:
    r = set()
    if src == v:
        r.add(ROLE_SOURCE)
    if dst == v:
        r.add(ROLE_TARGET)
    return frozenset(r)


def _step(sys: ReplacementSystem, color: str, symbol: str, roles: frozenset[str]) -> tuple[str, frozenset[str]]:
    rule = sys.rule(color)
    z = rule.graph.edge(symbol)
    held = set()
    if ROLE_SOURCE in roles:
        held.add(rule.initial)
    if ROLE_TARGET in roles:
        held.add(rule.terminal)
    new = set()
    if z.src in held:
        new.add(ROLE_SOURCE)
    if z.dst in held:
        new.add(ROLE_TARGET)
    return z.color, frozenset(new)


def represented_vertex(sys: ReplacementSystem, p: PeriodicAddress) -> Optional[VertexAddress]:
    """The gluing vertex represented by p, or None for a regular point."""
    require_expanding(sys)
    per = len(p.period)
    start = len(p.preperiod)
    horizon = start + per + 4 * per + 1
    word = p.unroll(horizon)
    colors = _states(sys, word)
    for s in range(start, start + per + 1):
        src, dst = endpoints(sys, word[:s])
        for v in (src, dst):
            roles = _roles(src, dst, v)
            c = colors[s - 1]
            for j in range(s, s + 4 * per):
                c, roles = _step(sys, c, word[j], roles)
                if not roles:
                    break
            if roles:
                return v
    return None


def glue_equivalent(sys: ReplacementSystem, p: PeriodicAddress, q: PeriodicAddress) -> bool:
    require_expanding(sys)
    if p == q:
        return True
    v = represented_vertex(sys, p)
    return v is not None and v == represented_vertex(sys, q)


def cell_boundary(sys: ReplacementSystem, a: Sequence[str]) -> frozenset[VertexAddress]:
    src, dst = endpoints(sys, tuple(a))
    return frozenset({src, dst})


def cell_contains(a: Sequence[str], p: PeriodicAddress) -> bool:
    """Whether the sequence p lies in the symbol-space cylinder of a."""
    return p.unroll(len(a)) == tuple(a)


# ---------------------------------------------------------------------------
# textual syntax: symbols joined by "/", period in parentheses

_PERIODIC = re.compile(r"^([^()]+?)\(([^()]+)\)$")


def parse_address(text: str) -> Address:
    text = text.strip()
    if not text or "(" in text or ")" in text:
        raise ValueError(f"bad address {text!r}")
    parts = tuple(text.split("/"))
    if any(not s for s in parts):
        raise ValueError(f"bad address {text!r}")
    return parts


def format_address(a: Sequence[str]) -> str:
    return "/".join(a)


def parse_periodic_parts(text: str) -> tuple[Address, tuple[str, ...]]:
    m = _PERIODIC.match(text.strip())
    if not m:
        raise ValueError(f"bad periodic address {text!r}")
    pre = m.group(1).rstrip("/")
    return parse_address(pre), parse_address(m.group(2))


def parse_periodic(sys: ReplacementSystem, text: str) -> PeriodicAddress:
    pre, per = parse_periodic_parts(text)
    return periodic(sys, pre, per)


def format_periodic(p: PeriodicAddress) -> str:
    return f"{format_address(p.preperiod)}({format_address(p.period)})"
