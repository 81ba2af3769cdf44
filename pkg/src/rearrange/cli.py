"""Command-line front end.

Exit status is 0 on success (or when the checked property holds), 1 when a
checked property fails, and 2 for usage, parse and input errors.

Graph selectors, used by ``render``, ``concomplex`` and ``aut``:

    base                 the base graph
    rule:COLOR           the replacement graph of a color
    expand:A,B/0,...     expand the listed addresses in order, starting from the base
    full:N               the n-th full expansion
    family:N:K           the K-th class of the family enumerated up to N edges
    file:PATH            a graph document
    concomplex[:SEL]     the contraction complex of a graph selector (default base)
"""
from __future__ import annotations

import argparse
import json
import sys as _sys
from typing import Optional, Sequence

from .catalog import catalog as builtin_system, names as builtin_names
from .complex import (characteristic_maps, contraction_complex, enumerate_family, finfty_evidence)
from .fileformat import (DiagramFile, FormatError, load_diagram, load_system, parse_graph,
                         serialize_diagram_file, serialize_graph, serialize_system)
from .graph_core import automorphisms
from .homology import ComplexTooLarge, betti, density
from .limit_space import format_periodic, parse_address, parse_periodic
from .rearrangement import apply, compose, element_order, invert
from .render import complex_to_dot, complex_to_svg, graph_to_dot, graph_to_svg
from .replacement import (ReplacementError, SizeCapExceeded, base_frontier, expand, full_expansion, realize,
                          validate_system)


class UsageError(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _system(args, required: bool = True):
    ref = getattr(args, "system", None)
    if ref is None:
        if required:
            raise UsageError("--system is required")
        return None
    return load_system(ref)


def _graph_from_selector(sys, sel: str):
    """Returns (graph, initial, terminal)."""
    if sel == "base":
        return sys.base, None, None
    kind, _, rest = sel.partition(":")
    if kind == "rule":
        if rest not in sys.rule_map:
            raise UsageError(f"no rule for color {rest!r}")
        r = sys.rule(rest)
        return r.graph, r.initial, r.terminal
    if kind == "expand":
        fr = base_frontier(sys)
        for text in filter(None, rest.split(",")):
            fr = expand(sys, fr, parse_address(text))
        return realize(sys, fr), None, None
    if kind == "full":
        return realize(sys, full_expansion(sys, _int(rest, "full:N"))), None, None
    if kind == "family":
        n, _, k = rest.partition(":")
        fam = enumerate_family(sys, _int(n, "family:N:K"))
        idx = _int(k, "family:N:K")
        if not 0 <= idx < len(fam):
            raise UsageError(f"family index {idx} out of range (0..{len(fam) - 1})")
        return fam[idx], None, None
    if kind == "file":
        try:
            with open(rest, encoding="utf-8") as fh:
                return parse_graph(fh.read(), rest), None, None
        except OSError as e:
            raise UsageError(f"cannot read {rest}: {e.strerror}") from None
    raise UsageError(f"bad selector {sel!r}")


def _int(text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"{what}: expected an integer, got {text!r}") from None
    if v < 0:
        raise UsageError(f"{what}: expected a nonnegative integer")
    return v


def _complex_of(sys, sel: str):
    inner = sel.partition(":")[2] or "base"
    g, _, _ = _graph_from_selector(sys, inner)
    maps = characteristic_maps(sys, g)
    return g, maps, contraction_complex(sys, g)


# ---------------------------------------------------------------------------
# commands

def cmd_check(args) -> int:
    ref = args.path or args.system
    if ref is None:
        raise UsageError("give a system file or --system")
    s = load_system(ref)
    report = validate_system(s)
    if report.ok:
        print(f"{s.name or ref}: expanding")
        return 0
    print(f"{s.name or ref}: not expanding")
    for line in report.lines():
        print(line)
    return 1


def cmd_expand(args) -> int:
    s = _system(args)
    if args.full is not None:
        g = realize(s, full_expansion(s, args.full))
    else:
        fr = base_frontier(s)
        for text in args.addresses:
            fr = expand(s, fr, parse_address(text))
        g = realize(s, fr)
    _sys.stdout.write(serialize_graph(g))
    return 0


def _diagrams(args, paths):
    override = _system(args, required=False)
    return [load_diagram(p, override) for p in paths]


def cmd_compose(args) -> int:
    loaded = _diagrams(args, args.paths)
    result = loaded[0][1]
    for _, d in loaded[1:]:
        result = compose(result, d)
    ref = args.system or loaded[0][0].system
    _sys.stdout.write(serialize_diagram_file(DiagramFile.of(ref, result)))
    return 0


def cmd_invert(args) -> int:
    (df, d), = _diagrams(args, [args.path])
    _sys.stdout.write(serialize_diagram_file(DiagramFile.of(args.system or df.system, invert(d))))
    return 0


def cmd_apply(args) -> int:
    (_, d), = _diagrams(args, [args.path])
    p = parse_periodic(d.domain_sys, args.point)
    print(format_periodic(apply(d, p)))
    return 0


def cmd_order(args) -> int:
    (_, d), = _diagrams(args, [args.path])
    if d.domain_sys.base != d.range_sys.base:
        raise UsageError("order needs a diagram from a system to itself")
    n = element_order(d, args.bound, args.max_size)
    print(n if n is not None else "none found (infinite or beyond the search bounds)")
    return 0


def _graph_json(g) -> dict:
    return {"vertices": list(g.vertices), "edges": [[e.id, e.src, e.dst, e.color] for e in g.edges]}


def cmd_family(args) -> int:
    s = _system(args)
    fam = enumerate_family(s, args.max_edges)
    _sys.stdout.write(_dump({"system": s.name, "max_edges": args.max_edges,
                             "classes": [_graph_json(g) for g in fam]}))
    return 0


def cmd_concomplex(args) -> int:
    s = _system(args)
    sel = args.selector or "base"
    g, maps, x = _complex_of(s, "concomplex:" + sel)
    report = {
        "graph": _graph_json(g),
        "maps": [m.describe() for m in maps],
        "collapsible_subgraphs": len({m.image for m in maps}),
        "edges": [list(e) for e in sorted(x.edges)],
        "betti": betti(x, args.betti),
        "density": density(x) if x.n else None,
    }
    _sys.stdout.write(_dump(report))
    return 0


def cmd_analyze(args) -> int:
    s = _system(args)
    rep = finfty_evidence(s, args.max_edges, args.m, args.betti, threads=args.threads)
    _sys.stdout.write(_dump(rep.as_dict()))
    return 0


def cmd_render(args) -> int:
    s = _system(args)
    sel = args.selector
    if not sel:
        raise UsageError("render needs a selector")
    if sel == "concomplex" or sel.startswith("concomplex:"):
        _, maps, x = _complex_of(s, sel)
        out = (complex_to_dot(x, labels=[m.describe() for m in maps]) if args.format == "dot"
               else complex_to_svg(x))
    else:
        g, i, t = _graph_from_selector(s, sel)
        out = graph_to_dot(g, s.name or "G", i, t) if args.format == "dot" else graph_to_svg(g, i, t)
    _sys.stdout.write(out)
    return 0


def cmd_aut(args) -> int:
    s = _system(args)
    g, _, _ = _graph_from_selector(s, args.selector or "base")
    auts = automorphisms(g, limit=args.limit)
    _sys.stdout.write(_dump({"count": len(auts), "limit": args.limit,
                             "automorphisms": [dict(a.edge) for a in auts]}))
    return 0


def cmd_catalog(args) -> int:
    if args.name is None:
        for n in builtin_names():
            print(n)
        return 0
    _sys.stdout.write(serialize_system(builtin_system(args.name)))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", help="system file or builtin:NAME")
    common.add_argument("--threads", type=int, default=1, help="worker threads for analysis")

    p = argparse.ArgumentParser(prog="rearrange", description="Edge replacement systems and rearrangements.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="validate a system")
    c.add_argument("path", nargs="?")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("expand", parents=[common], help="print an expansion of the base graph")
    c.add_argument("addresses", nargs="*")
    c.add_argument("--full", type=int)
    c.set_defaults(func=cmd_expand)

    c = sub.add_parser("compose", parents=[common], help="compose diagrams, first applied first")
    c.add_argument("paths", nargs="+")
    c.set_defaults(func=cmd_compose)

    for name, func, text in (("invert", cmd_invert, "inverse diagram"), ("order", cmd_order, "order of an element")):
        c = sub.add_parser(name, parents=[common], help=text)
        c.add_argument("path")
        if name == "order":
            c.add_argument("--bound", type=int, default=10**4, help="largest power tried")
            c.add_argument("--max-size", type=int, default=500, help="largest power diagram tried")
        c.set_defaults(func=func)

    c = sub.add_parser("apply", parents=[common], help="image of a periodic point")
    c.add_argument("path")
    c.add_argument("point")
    c.set_defaults(func=cmd_apply)

    c = sub.add_parser("family", parents=[common], help="enumerate the graph family")
    c.add_argument("--max-edges", type=int, required=True)
    c.set_defaults(func=cmd_family)

    c = sub.add_parser("concomplex", parents=[common], help="contraction complex of a graph")
    c.add_argument("selector", nargs="?")
    c.add_argument("--betti", type=int, default=1)
    c.set_defaults(func=cmd_concomplex)

    c = sub.add_parser("analyze", parents=[common], help="finiteness evidence report")
    c.add_argument("--max-edges", type=int, required=True)
    c.add_argument("--m", type=int, default=2)
    c.add_argument("--betti", type=int, default=1)
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("render", parents=[common], help="DOT or SVG drawing")
    c.add_argument("selector")
    c.add_argument("--format", choices=["dot", "svg"], default="dot")
    c.set_defaults(func=cmd_render)

    c = sub.add_parser("aut", parents=[common], help="automorphisms of a graph")
    c.add_argument("selector", nargs="?")
    c.add_argument("--limit", type=int, default=1000)
    c.set_defaults(func=cmd_aut)

    c = sub.add_parser("catalog", parents=[common], help="list or print built-in systems")
    c.add_argument("name", nargs="?")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except SizeCapExceeded as e:
        print(f"error: {e} (set REARRANGE_MAX_CELLS to raise the cell cap, or lower the size arguments)",
              file=_sys.stderr)
    except (UsageError, FormatError, ReplacementError, ComplexTooLarge, ValueError) as e:
        print(f"error: {e}", file=_sys.stderr)
    return 2


if __name__ == "__main__":
    _sys.exit(main())
