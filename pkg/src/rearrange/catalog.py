"""Built-in replacement systems.

Each entry comes with a list of gluing identities.  An identity is a group of
periodic addresses written in the textual syntax (``T/0(2)``) that must all
represent the same point, or, for ``distinct`` groups, pairwise different
points.  A leading ``@`` stands for an arbitrary address of the right color.
"""
from __future__ import annotations

import re
from typing import Callable

from .graph_core import Edge, Graph
from .replacement import ReplacementError, ReplacementSystem, Rule, make_rule

BLACK = "black"
RED = "red"
BLUE = "blue"

STAR_NAMES = ["T", "L", "R", "B", "U", "W", "X", "Y", "Z"]


def _single(name, base_edges, rule_edges, base_vertices=(), rule_vertices=(), initial="i", terminal="t"):
    base = Graph.from_edges([(e, s, t, BLACK) for e, s, t in base_edges], base_vertices)
    rule = make_rule([(e, s, t, BLACK) for e, s, t in rule_edges], initial, terminal, rule_vertices)
    return ReplacementSystem(base, ((BLACK, rule),), name)


def thompson_f():
    return _single("thompson_f", [("E", "a", "b")], [("0", "i", "v"), ("1", "v", "t")])


def thompson_t():
    return _single("thompson_t", [("E", "a", "a")], [("0", "i", "v"), ("1", "v", "t")])


def thompson_v():
    return _single("thompson_v", [("E", "a", "b")], [("0", "i", "u"), ("1", "w", "t")])


def f32():
    return _single("f32", [("A", "a", "b"), ("B", "b", "c")],
                   [("0", "i", "u"), ("1", "u", "w"), ("2", "w", "t")])


def t32():
    return _single("t32", [("A", "a", "b"), ("B", "b", "a")],
                   [("0", "i", "u"), ("1", "u", "w"), ("2", "w", "t")])


def v32():
    return _single("v32", [("A", "a", "b"), ("B", "c", "d")],
                   [("0", "i", "u"), ("1", "w", "x"), ("2", "y", "t")])


def basilica():
    return _single("basilica", [("T", "r", "l"), ("B", "l", "r"), ("L", "l", "l"), ("R", "r", "r")],
                   [("0", "i", "v"), ("1", "v", "v"), ("2", "v", "t")])


def rabbit(n: int):
    """One vertex with n+1 loops; the rule is a path through a vertex carrying n loops."""
    if n < 1:
        raise ReplacementError("rabbit(n) needs n >= 1")
    base = [(f"E{k}", "a", "a") for k in range(n + 1)]
    rule = [("0", "i", "v")] + [(str(k), "v", "v") for k in range(1, n + 1)] + [(str(n + 1), "v", "t")]
    return _single(f"rabbit({n})", base, rule)


def vicsek(n: int):
    """Star base with n arms; the rule is a tree whose center has n outgoing edges."""
    if n < 3 or n > len(STAR_NAMES):
        raise ReplacementError(f"vicsek(n) needs 3 <= n <= {len(STAR_NAMES)}")
    base = [(STAR_NAMES[k], "c", f"x{STAR_NAMES[k]}") for k in range(n)]
    rule = [("0", "i", "x"), ("1", "c", "x")]
    for k in range(2, n + 1):
        rule.append((str(k), "c", "t" if k == 3 else f"y{k}"))
    return _single(f"vicsek({n})", base, rule)


def bubble_bath():
    return _single("bubble_bath", [("A", "a", "b"), ("B", "a", "b"), ("C", "a", "b")],
                   [("0", "i", "u"), ("1", "u", "w"), ("2", "u", "w"), ("3", "w", "t")])


def trivial():
    return _single("trivial", [("E", "a", "b")],
                   [("0", "i", "u"), ("1", "u", "t"), ("2", "i", "w"), ("3", "w", "x"), ("4", "x", "t")])


def airplane():
    base = Graph.from_edges([("E", "a", "b", BLUE)])
    blue = make_rule([("0", "i", "u", BLUE), ("1", "u", "w", RED), ("2", "u", "w", RED),
                      ("3", "w", "t", BLUE)], "i", "t")
    red = make_rule([("0", "i", "v", RED), ("1", "v", "t", RED), ("2", "v", "w", BLUE)], "i", "t")
    return ReplacementSystem(base, ((BLUE, blue), (RED, red)), "airplane")


def linear_fwrf():
    base = Graph.from_edges([("E", "a", "b", BLUE)])
    blue = make_rule([("0", "i", "u", BLUE), ("1", "u", "w", RED), ("2", "w", "t", BLUE)], "i", "t")
    red = make_rule([("0", "i", "v", RED), ("1", "v", "t", RED)], "i", "t")
    return ReplacementSystem(base, ((BLUE, blue), (RED, red)), "linear_fwrf")


def f_semi_z2():
    # both rule edges point into the midpoint, so the rule is symmetric under
    # swapping its boundary vertices
    return _single("f_semi_z2", [("E", "a", "b")], [("0", "i", "v"), ("1", "t", "v")])


def nonexpanding_fig14():
    # triangle on i, m, t with i and t adjacent; this orientation makes the raw
    # share-a-vertex relation fail transitivity on E(0), E/1(0), E/1/1(0)
    return _single("nonexpanding_fig14", [("E", "a", "b")],
                   [("0", "i", "t"), ("1", "m", "i"), ("2", "m", "t")])


_FIXED: dict[str, Callable[[], ReplacementSystem]] = {
    "thompson_f": thompson_f, "thompson_t": thompson_t, "thompson_v": thompson_v,
    "f32": f32, "t32": t32, "v32": v32, "basilica": basilica, "bubble_bath": bubble_bath,
    "trivial": trivial, "airplane": airplane, "linear_fwrf": linear_fwrf,
    "f_semi_z2": f_semi_z2, "nonexpanding_fig14": nonexpanding_fig14,
}
_INDEXED: dict[str, Callable[[int], ReplacementSystem]] = {"rabbit": rabbit, "vicsek": vicsek}

_cache: dict[str, ReplacementSystem] = {}


def names() -> list[str]:
    return sorted(_FIXED) + ["rabbit(n)", "vicsek(n)"]


def catalog(name: str) -> ReplacementSystem:
    """Look up a built-in system by name, e.g. ``basilica`` or ``vicsek(4)``."""
    key = name.replace(" ", "")
    if key in _cache:
        return _cache[key]
    if key in _FIXED:
        sys = _FIXED[key]()
    else:
        m = re.fullmatch(r"([a-z_]+)\((\d+)\)", key)
        if not m or m.group(1) not in _INDEXED:
            raise ReplacementError(f"unknown catalog system {name!r}")
        sys = _INDEXED[m.group(1)](int(m.group(2)))
    _cache[key] = sys
    return sys


# kind, group of periodic addresses
GLUING_IDENTITIES: dict[str, list[tuple[str, list[str]]]] = {
    "basilica": [
        ("equal", ["L(0)", "L(2)", "B(0)", "T(2)"]),
        ("equal", ["R(0)", "R(2)", "T(0)", "B(2)"]),
        ("equal", ["@/0(2)", "@/1(0)", "@/1(2)", "@/2(0)"]),
        ("distinct", ["L(0)", "R(0)", "L(1)"]),
    ],
    "thompson_f": [("equal", ["@/0(1)", "@/1(0)"]), ("distinct", ["E(0)", "E(1)"])],
    "thompson_t": [("equal", ["@/0(1)", "@/1(0)"]), ("equal", ["E(0)", "E(1)"])],
    "thompson_v": [("distinct", ["E(0)", "E(1)", "E/0(1)", "E/1(0)"])],
    "vicsek(4)": [
        ("equal", ["@/0(3)", "@/1(3)"]),
        ("equal", ["@/1(0)", "@/2(0)", "@/3(0)", "@/4(0)"]),
        ("equal", ["T(0)", "L(0)", "R(0)", "B(0)"]),
    ],
}


def gluing_identities(name: str) -> list[tuple[str, list[str]]]:
    return list(GLUING_IDENTITIES.get(name, []))


__all__ = ["catalog", "names", "gluing_identities", "rabbit", "vicsek", "Edge"]
