"""DOT and SVG output for graphs and flag complexes.

The SVG layout is a plain layered drawing: vertices are put on layers by
longest path over a fixed acyclic orientation (edges that would close a cycle
in a depth-first search are ignored), ordered within a layer by one
barycenter pass, and drawn with straight or bent edges.  Everything is
deterministic, so output is byte-stable.
"""
from __future__ import annotations

from html import escape
from typing import Iterable, Optional, Sequence

from .graph_core import Graph
from .homology import FlagComplex

COLOR_MAP = {"black": "#000000", "red": "#c0392b", "blue": "#2471a3", "green": "#229954"}


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: Graph, name: str = "G", initial: Optional[str] = None,
                 terminal: Optional[str] = None) -> str:
    lines = [f"digraph {_q(name)} {{"]
    for v in g.vertices:
        attrs = []
        if v == initial:
            attrs += ['shape="doublecircle"', 'xlabel="initial"']
        elif v == terminal:
            attrs += ['shape="box"', 'xlabel="terminal"']
        lines.append(f"  {_q(v)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for e in g.edges:
        lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(e.id)}, color={_q(e.color)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def complex_to_dot(x: FlagComplex, name: str = "Con", labels: Optional[Sequence[str]] = None) -> str:
    labels = list(labels) if labels is not None else [str(i) for i in range(x.n)]
    lines = [f"graph {_q(name)} {{"]
    for i in range(x.n):
        lines.append(f"  {_q(i)} [label={_q(labels[i])}];")
    for a, b in sorted(x.edges):
        lines.append(f"  {_q(a)} -- {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _layers(vertices: Sequence[str], arcs: Iterable[tuple[str, str]]) -> dict[str, int]:
    succ: dict[str, list[str]] = {v: [] for v in vertices}
    for a, b in arcs:
        if a != b:
            succ[a].append(b)
    for v in succ:
        succ[v] = sorted(set(succ[v]))
    # keep only forward arcs of a deterministic DFS
    state: dict[str, int] = {}
    order: list[str] = []
    dag: dict[str, list[str]] = {v: [] for v in vertices}
    for root in vertices:
        if root in state:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                order.append(v)
                stack.pop()
            elif state.get(nxt) == 1:
                continue
            else:
                dag[v].append(nxt)
                if nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
    layer = {v: 0 for v in vertices}
    for v in reversed(order):
        for w in dag[v]:
            layer[w] = max(layer[w], layer[v] + 1)
    return layer


def _positions(vertices: Sequence[str], arcs: list[tuple[str, str]]) -> dict[str, tuple[float, float]]:
    layer = _layers(vertices, arcs)
    rows: dict[int, list[str]] = {}
    for v in vertices:
        rows.setdefault(layer[v], []).append(v)
    nbrs: dict[str, list[str]] = {v: [] for v in vertices}
    for a, b in arcs:
        nbrs[a].append(b)
        nbrs[b].append(a)
    index: dict[str, float] = {}
    for k in sorted(rows):
        row = rows[k]
        start = {v: float(i) for i, v in enumerate(row)}

        def bary(v):
            known = [index[w] for w in nbrs[v] if w in index]
            return (sum(known) / len(known) if known else start[v], v)
        row.sort(key=bary)
        for i, v in enumerate(row):
            index[v] = float(i)
    pos = {}
    width = max(len(r) for r in rows.values()) if rows else 1
    for k, row in rows.items():
        off = (width - len(row)) / 2
        for i, v in enumerate(row):
            pos[v] = (60.0 + 110.0 * (i + off), 50.0 + 100.0 * k)
    return pos


def _svg(vertices: Sequence[str], arcs: list[tuple[str, str, str, str]], directed: bool,
         vlabels: Optional[dict] = None, marks: Optional[dict] = None) -> str:
    pos = _positions(vertices, [(a, b) for _, a, b, _ in arcs])
    xs = [p[0] for p in pos.values()] or [0.0]
    ys = [p[1] for p in pos.values()] or [0.0]
    w, h = max(xs) + 60, max(ys) + 60
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
           f'viewBox="0 0 {w:.0f} {h:.0f}">']
    if directed:
        out.append('<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" '
                   'markerHeight="7" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>')
    mult: dict[tuple[str, str], int] = {}
    for eid, a, b, color in arcs:
        key = (min(a, b), max(a, b))
        k = mult.get(key, 0)
        mult[key] = k + 1
        stroke = COLOR_MAP.get(color, color)
        (x1, y1), (x2, y2) = pos[a], pos[b]
        marker = ' marker-end="url(#arrow)"' if directed else ""
        if a == b:
            r = 14 + 7 * k
            d = f"M{x1:.1f},{y1 - 12:.1f} C{x1 - 2 * r:.1f},{y1 - 3 * r:.1f} {x1 + 2 * r:.1f},{y1 - 3 * r:.1f} {x1 + 4:.1f},{y1 - 12:.1f}"
            lx, ly = x1, y1 - 2.4 * r
        else:
            # shorten to the vertex circles, bend parallel edges apart
            dx, dy = x2 - x1, y2 - y1
            n = max((dx * dx + dy * dy) ** 0.5, 1.0)
            ux, uy = dx / n, dy / n
            sx, sy, tx, ty = x1 + 12 * ux, y1 + 12 * uy, x2 - 12 * ux, y2 - 12 * uy
            sign = 1 if a < b else -1
            bend = 0 if k == 0 else sign * 22 * ((k + 1) // 2) * (1 if k % 2 else -1)
            cx, cy = (sx + tx) / 2 - uy * bend, (sy + ty) / 2 + ux * bend
            d = f"M{sx:.1f},{sy:.1f} Q{cx:.1f},{cy:.1f} {tx:.1f},{ty:.1f}"
            lx, ly = (sx + 2 * cx + tx) / 4, (sy + 2 * cy + ty) / 4
        out.append(f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="1.5"{marker}/>')
        if eid:
            out.append(f'<text x="{lx + 4:.1f}" y="{ly - 3:.1f}" font-size="10" fill="{stroke}">'
                       f'{escape(eid)}</text>')
    for v in vertices:
        x, y = pos[v]
        fill = (marks or {}).get(v, "#ffffff")
        out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="12" fill="{fill}" stroke="#000000"/>')
        label = (vlabels or {}).get(v, v)
        out.append(f'<text x="{x:.1f}" y="{y + 4:.1f}" font-size="9" text-anchor="middle">'
                   f'{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def graph_to_svg(g: Graph, initial: Optional[str] = None, terminal: Optional[str] = None) -> str:
    marks = {}
    if initial is not None:
        marks[initial] = "#d5f5e3"
    if terminal is not None:
        marks[terminal] = "#fadbd8"
    return _svg(list(g.vertices), [(e.id, e.src, e.dst, e.color) for e in g.edges], True, marks=marks)


def complex_to_svg(x: FlagComplex) -> str:
    verts = [str(i) for i in range(x.n)]
    arcs = [("", str(a), str(b), "black") for a, b in sorted(x.edges)]
    return _svg(verts, arcs, False)
