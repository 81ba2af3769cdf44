"""Versioned text formats for systems, diagrams and graphs.

Every document starts with the header line ``rearrange-format 1`` followed by
a kind line (``system``, ``diagram`` or ``graph``).  The remaining lines are
``keyword arguments...`` statements; ``#`` starts a comment.  A system file:

    rearrange-format 1
    system basilica
    colors black
    base
      vertices l r
      edge B l r black
    rule black
      vertices i t v
      init i
      term t
      edge 0 i v black

A diagram file names its system (``builtin:NAME`` or a path relative to the
diagram file) and lists both frontiers and the mapping rows:

    rearrange-format 1
    diagram
    system builtin:basilica
    domain L/0 L/1 L/2 T B R
    range L B R/0 R/1 R/2 T
    map L/0 -> L
    ...

Serialization is canonical (sorted), so parse and serialize are inverse on
canonical text.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from .graph_core import Edge, Graph, GraphError
from .limit_space import format_address, parse_address
from .replacement import ReplacementError, ReplacementSystem, Rule
from .rearrangement import PairDiagram, make_diagram

HEADER = "rearrange-format 1"


class FormatError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, source: str = "<input>"):
        self.line, self.column, self.source, self.message = line, column, source, message
        where = f"{source}:{line}:{column}: " if line else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class _Stmt:
    line: int
    words: tuple[str, ...]
    cols: tuple[int, ...]
    indented: bool


def _tokenize(text: str, source: str) -> list[_Stmt]:
    out = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        words, cols = [], []
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            words.append(body[i:j])
            cols.append(i + 1)
            i = j
        if words:
            out.append(_Stmt(n, tuple(words), tuple(cols), raw[:1].isspace()))
    if not out:
        raise FormatError("empty document", 1, 1, source)
    head = out[0]
    if " ".join(head.words) != HEADER:
        raise FormatError(f"expected header {HEADER!r}", head.line, head.cols[0], source)
    return out[1:]


def _kind(stmts: list[_Stmt], source: str) -> tuple[str, _Stmt]:
    if not stmts:
        raise FormatError("missing document kind", 1, 1, source)
    s = stmts[0]
    if s.words[0] not in ("system", "diagram", "graph"):
        raise FormatError(f"unknown document kind {s.words[0]!r}", s.line, s.cols[0], source)
    return s.words[0], s


def document_kind(text: str, source: str = "<input>") -> str:
    return _kind(_tokenize(text, source), source)[0]


class _GraphBlock:
    def __init__(self):
        self.vertices: list[str] = []
        self.edges: list[tuple] = []
        self.stmts: list[_Stmt] = []

    def take(self, s: _Stmt, source: str) -> bool:
        key = s.words[0]
        if key == "vertices":
            self.vertices.extend(s.words[1:])
        elif key == "edge":
            if len(s.words) not in (4, 5):
                raise FormatError("edge needs: id src dst [color]", s.line, s.cols[0], source)
            eid, a, b = s.words[1:4]
            color = s.words[4] if len(s.words) == 5 else "black"
            self.edges.append((eid, a, b, color))
        else:
            return False
        self.stmts.append(s)
        return True

    def graph(self, s: _Stmt, source: str) -> Graph:
        try:
            return Graph.from_edges(self.edges, self.vertices)
        except GraphError as e:
            raise FormatError(str(e), s.line, s.cols[0], source) from None


def _fail(s: _Stmt, idx: int, msg: str, source: str):
    raise FormatError(msg, s.line, s.cols[min(idx, len(s.cols) - 1)], source)


def _one_arg(s: _Stmt, source: str) -> str:
    if len(s.words) != 2:
        _fail(s, 0, f"{s.words[0]} takes exactly one argument", source)
    return s.words[1]


# ---------------------------------------------------------------------------
# graphs

def parse_graph(text: str, source: str = "<input>") -> Graph:
    stmts = _tokenize(text, source)
    kind, first = _kind(stmts, source)
    if kind != "graph":
        _fail(first, 0, f"expected a graph document, found {kind}", source)
    block = _GraphBlock()
    for s in stmts[1:]:
        if not block.take(s, source):
            _fail(s, 0, f"unknown field {s.words[0]!r}", source)
    return block.graph(first, source)


def _graph_lines(g: Graph, indent: str = "") -> list[str]:
    lines = [indent + "vertices " + " ".join(g.vertices)] if g.vertices else []
    lines += [f"{indent}edge {e.id} {e.src} {e.dst} {e.color}" for e in g.edges]
    return lines


def serialize_graph(g: Graph) -> str:
    return "\n".join([HEADER, "graph"] + _graph_lines(g)) + "\n"


# ---------------------------------------------------------------------------
# systems

def parse_system(text: str, source: str = "<input>") -> ReplacementSystem:
    stmts = _tokenize(text, source)
    kind, first = _kind(stmts, source)
    if kind != "system":
        _fail(first, 0, f"expected a system document, found {kind}", source)
    if len(first.words) > 2:
        _fail(first, 2, "system takes at most one name", source)
    name = first.words[1] if len(first.words) == 2 else ""
    colors: Optional[list[str]] = None
    base: Optional[_GraphBlock] = None
    base_stmt = first
    rules: dict[str, dict] = {}
    current = None  # ("base", block) or ("rule", color)
    for s in stmts[1:]:
        key = s.words[0]
        if key == "colors":
            if colors is not None:
                _fail(s, 0, "duplicate colors line", source)
            colors = list(s.words[1:])
            if not colors:
                _fail(s, 0, "colors needs at least one color", source)
            current = None
        elif key == "base":
            if len(s.words) != 1:
                _fail(s, 1, "base takes no arguments", source)
            if base is not None:
                _fail(s, 0, "duplicate base section", source)
            base, base_stmt = _GraphBlock(), s
            current = ("base", base)
        elif key == "rule":
            c = _one_arg(s, source)
            if c in rules:
                _fail(s, 1, f"duplicate rule for color {c!r}", source)
            rules[c] = {"block": _GraphBlock(), "init": None, "term": None, "stmt": s}
            current = ("rule", c)
        elif current is None:
            _fail(s, 0, f"unknown field {key!r}", source)
        elif current[0] == "base":
            if not base.take(s, source):
                _fail(s, 0, f"unknown field {key!r} in base section", source)
        else:
            r = rules[current[1]]
            if key in ("init", "term"):
                if r[key] is not None:
                    _fail(s, 0, f"duplicate {key}", source)
                r[key] = _one_arg(s, source)
            elif not r["block"].take(s, source):
                _fail(s, 0, f"unknown field {key!r} in rule section", source)
    if base is None:
        raise FormatError("missing base section", first.line, 1, source)
    if colors is None:
        colors = sorted(rules)
    for c in colors:
        if c not in rules:
            raise FormatError(f"no rule for color {c!r}", first.line, 1, source)
    for c, r in rules.items():
        if c not in colors:
            _fail(r["stmt"], 1, f"rule color {c!r} is not declared", source)
        for key in ("init", "term"):
            if r[key] is None:
                _fail(r["stmt"], 0, f"rule {c} has no {key} line", source)
    try:
        built = tuple(sorted((c, Rule(r["block"].graph(r["stmt"], source), r["init"], r["term"]))
                             for c, r in rules.items()))
        return ReplacementSystem(base.graph(base_stmt, source), built, name)
    except (ReplacementError, GraphError) as e:
        raise FormatError(str(e), base_stmt.line, 1, source) from None


def serialize_system(sys: ReplacementSystem) -> str:
    lines = [HEADER, f"system {sys.name}".rstrip(), "colors " + " ".join(sys.colors), "base"]
    lines += _graph_lines(sys.base, "  ")
    for c, r in sys.rules:
        lines.append(f"rule {c}")
        lines += _graph_lines(r.graph, "  ")[:1]
        lines += [f"  init {r.initial}", f"  term {r.terminal}"]
        lines += _graph_lines(r.graph, "  ")[1:]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# diagrams

@dataclass(frozen=True)
class DiagramFile:
    system: str
    domain: tuple[tuple[str, ...], ...]
    range: tuple[tuple[str, ...], ...]
    rows: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]

    @classmethod
    def of(cls, system_ref: str, d: PairDiagram) -> "DiagramFile":
        return cls(system_ref, tuple(d.domain), tuple(d.range), tuple(d.mapping))


def parse_diagram_file(text: str, source: str = "<input>") -> DiagramFile:
    stmts = _tokenize(text, source)
    kind, first = _kind(stmts, source)
    if kind != "diagram" or len(first.words) != 1:
        _fail(first, 0, "expected a diagram document", source)
    ref = None
    dom: list = []
    ran: list = []
    rows: list = []
    seen = set()

    def addr(s, i):
        try:
            return parse_address(s.words[i])
        except ValueError as e:
            _fail(s, i, str(e), source)

    for s in stmts[1:]:
        key = s.words[0]
        if key == "system":
            if ref is not None:
                _fail(s, 0, "duplicate system line", source)
            ref = _one_arg(s, source)
        elif key in ("domain", "range"):
            if key in seen:
                _fail(s, 0, f"duplicate {key} line", source)
            seen.add(key)
            (dom if key == "domain" else ran).extend(addr(s, i) for i in range(1, len(s.words)))
        elif key == "map":
            if len(s.words) != 4 or s.words[2] != "->":
                _fail(s, 0, "map rows look like: map A -> B", source)
            rows.append((addr(s, 1), addr(s, 3)))
        else:
            _fail(s, 0, f"unknown field {key!r}", source)
    if ref is None:
        raise FormatError("missing system line", first.line, 1, source)
    for key in ("domain", "range"):
        if key not in seen:
            raise FormatError(f"missing {key} line", first.line, 1, source)
    return DiagramFile(ref, tuple(dom), tuple(ran), tuple(rows))


def serialize_diagram_file(d: DiagramFile) -> str:
    lines = [HEADER, "diagram", f"system {d.system}",
             "domain " + " ".join(format_address(a) for a in sorted(d.domain)),
             "range " + " ".join(format_address(a) for a in sorted(d.range))]
    lines += [f"map {format_address(a)} -> {format_address(b)}" for a, b in sorted(d.rows)]
    return "\n".join(lines) + "\n"


def build_diagram(sys: ReplacementSystem, d: DiagramFile, source: str = "<input>") -> PairDiagram:
    if set(d.domain) != {a for a, _ in d.rows} or set(d.range) != {b for _, b in d.rows}:
        raise FormatError("map rows do not match the listed frontiers", 0, 0, source)
    try:
        return make_diagram(sys, d.domain, d.range, d.rows)
    except ReplacementError as e:
        raise FormatError(str(e), 0, 0, source) from None


# ---------------------------------------------------------------------------
# loading

def load_system(ref: str, relative_to: Optional[str] = None) -> ReplacementSystem:
    """Resolve ``builtin:NAME`` or a file path to a system."""
    from .catalog import catalog
    if ref.startswith("builtin:"):
        try:
            return catalog(ref[len("builtin:"):])
        except ReplacementError as e:
            raise FormatError(str(e), 0, 0, ref) from None
    path = ref
    if relative_to and not os.path.isabs(path):
        path = os.path.join(os.path.dirname(relative_to), path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read system file: {e.strerror}", 0, 0, path) from None
    return parse_system(text, path)


def load_diagram(path: str, sys: Optional[ReplacementSystem] = None) -> tuple[DiagramFile, PairDiagram]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read diagram file: {e.strerror}", 0, 0, path) from None
    df = parse_diagram_file(text, path)
    if sys is None:
        sys = load_system(df.system, path)
    return df, build_diagram(sys, df, path)
