"""Checkerboard graphs, spanning trees, Tutte activities and the overlaid graph.

Edges are named by the crossing they pass through; the edge order used for
activities is the crossing labeling. Vertices are region ids of the universe.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .algebra import LaurentPoly
from .linkcore import BLACK, WHITE, LinkConfiguration, LinkError, LinkUniverse

__all__ = [
    "EdgeNotInTree",
    "NotPerfectMatching",
    "SignedGraph",
    "checkerboard_graph",
    "dual_graph",
    "enumerate_spanning_trees",
    "fundamental_cocycle",
    "fundamental_cycle",
    "activity_letter",
    "activity_letters",
    "duality_activity_check",
    "table1_evaluate",
    "LETTER_VALUES",
    "BalancedOverlaidGraph",
    "build_balanced_overlaid",
    "eta",
    "theta",
    "graph_to_dot",
    "balanced_to_dot",
]

L, D, ELL, DEE = "L", "D", "l", "d"
DUAL_LETTER = {L: ELL, D: DEE, ELL: L, DEE: D}


class EdgeNotInTree(LinkError):
    pass


class NotPerfectMatching(LinkError):
    pass


def _mono(e: int, c: int = 1) -> LaurentPoly:
    return LaurentPoly({e: c})


#: Bracket evaluations of signed activity letters
LETTER_VALUES: dict[tuple[int, str], LaurentPoly] = {
    (1, L): _mono(-3, -1), (1, D): _mono(1), (1, ELL): _mono(3, -1), (1, DEE): _mono(-1),
    (-1, L): _mono(3, -1), (-1, D): _mono(-1), (-1, ELL): _mono(-3, -1), (-1, DEE): _mono(1),
}


def table1_evaluate(sign: int, letter: str) -> LaurentPoly:
    return LETTER_VALUES[(1 if sign > 0 else -1, letter)]


@dataclass(frozen=True)
class SignedGraph:
    """Plane multigraph with one edge per crossing.

    ``edges[c] = (u, v)`` with u <= v region ids; ``order[c]`` is the rank
    used for activities (the crossing label); ``signs[c]`` is +1/-1.
    """

    vertices: tuple[int, ...]
    edges: Mapping[int, tuple[int, int]]
    order: Mapping[int, int]
    signs: Mapping[int, int]
    name: str = "G"

    @cached_property
    def edge_list(self) -> list[int]:
        return sorted(self.edges, key=lambda c: self.order[c])

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges.values():
            adj[u].add(v)
            adj[v].add(u)
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            x = todo.pop()
            for y in adj[x] - seen:
                seen.add(y)
                todo.append(y)
        return len(seen) == len(self.vertices)


def _graph(u: LinkUniverse, color: str, order: Mapping[int, int],
           signs: Mapping[int, int] | None, name: str) -> SignedGraph:
    verts = tuple(r for r in range(len(u.regions)) if u.color[r] == color)
    edges = {}
    for c in range(u.n):
        ks = [k for k in range(4) if u.color[u.corner_region[c][k]] == color]
        a, b = (u.corner_region[c][k] for k in ks)
        if a == b:
            raise LinkError("checkerboard graph has a loop (nugatory crossing)")
        edges[c] = (min(a, b), max(a, b))
    return SignedGraph(verts, edges, dict(order), dict(signs or {c: 1 for c in range(u.n)}), name)


def checkerboard_graph(u: LinkUniverse, order: Mapping[int, int] | Sequence[int] | None = None,
                       signs: Sequence[int] | None = None) -> SignedGraph:
    """Vertices at black regions, an edge e_c per crossing between its black corners."""
    order = _as_order(u, order)
    sg = {c: s for c, s in enumerate(signs)} if signs is not None else None
    return _graph(u, BLACK, order, sg, "G")


def dual_graph(u: LinkUniverse, order=None, signs: Sequence[int] | None = None) -> SignedGraph:
    """Vertices at white regions; edge signs are opposite to the checkerboard graph."""
    order = _as_order(u, order)
    sg = {c: -s for c, s in enumerate(signs)} if signs is not None else None
    return _graph(u, WHITE, order, sg, "Gbar")


def _as_order(u: LinkUniverse, order) -> dict[int, int]:
    if order is None:
        return {c: c + 1 for c in range(u.n)}
    if isinstance(order, Mapping):
        return dict(order)
    return {c: int(o) for c, o in enumerate(order)}


class _DSU:
    def __init__(self, items: Iterable[int]):
        self.p = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def enumerate_spanning_trees(g: SignedGraph) -> list[frozenset[int]]:
    """All spanning trees as frozensets of edge names, in canonical order.

    Backtracking over edges in order: an edge is included when it joins two
    components, and excluded only while the remaining edges can still span.
    """
    from .linkcore import Disconnected
    if not g.is_connected():
        raise Disconnected("checkerboard graph is not connected")
    edges = g.edge_list
    need = len(g.vertices) - 1
    out: list[frozenset[int]] = []

    def can_span(chosen: list[int], start: int) -> bool:
        dsu = _DSU(g.vertices)
        for c in chosen:
            dsu.union(*g.edges[c])
        for c in edges[start:]:
            dsu.union(*g.edges[c])
        roots = {dsu.find(v) for v in g.vertices}
        return len(roots) == 1

    def rec(i: int, chosen: list[int], dsu_parent: dict[int, int]) -> None:
        if len(chosen) == need:
            out.append(frozenset(chosen))
            return
        if i == len(edges) or len(edges) - i < need - len(chosen):
            return
        c = edges[i]
        u, v = g.edges[c]
        dsu = _DSU(g.vertices)
        dsu.p = dict(dsu_parent)
        if dsu.union(u, v):
            rec(i + 1, chosen + [c], dsu.p)
        if can_span(chosen, i + 1):
            rec(i + 1, chosen, dsu_parent)

    rec(0, [], {v: v for v in g.vertices})
    return out


def _tree_components_without(g: SignedGraph, tree: frozenset[int], removed: int) -> dict[int, int]:
    dsu = _DSU(g.vertices)
    for c in tree:
        if c != removed:
            dsu.union(*g.edges[c])
    return {v: dsu.find(v) for v in g.vertices}


def fundamental_cocycle(g: SignedGraph, tree: frozenset[int], e: int) -> frozenset[int]:
    if e not in tree:
        raise EdgeNotInTree(f"edge {e} is not in the tree")
    comp = _tree_components_without(g, tree, e)
    return frozenset(c for c, (u, v) in g.edges.items() if comp[u] != comp[v])


def fundamental_cycle(g: SignedGraph, tree: frozenset[int], f: int) -> frozenset[int]:
    if f in tree:
        raise LinkError(f"edge {f} is in the tree")
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    for c in tree:
        u, v = g.edges[c]
        adj[u].append((v, c))
        adj[v].append((u, c))
    src, dst = g.edges[f]
    prev: dict[int, tuple[int, int] | None] = {src: None}
    todo = [src]
    while todo:
        x = todo.pop()
        for y, c in adj[x]:
            if y not in prev:
                prev[y] = (x, c)
                todo.append(y)
    path = {f}
    x = dst
    while prev[x] is not None:
        x, c = prev[x]  # type: ignore[misc]
        path.add(c)
    return frozenset(path)


def activity_letter(g: SignedGraph, tree: frozenset[int], e: int) -> str:
    """L/D for tree edges, l/d for the others, by the lowest-ordered-edge rule."""
    if e in tree:
        cut = fundamental_cocycle(g, tree, e)
        return L if min(cut, key=g.order.__getitem__) == e else D
    cyc = fundamental_cycle(g, tree, e)
    return ELL if min(cyc, key=g.order.__getitem__) == e else DEE


def activity_letters(g: SignedGraph, tree: frozenset[int]) -> dict[int, str]:
    return {c: activity_letter(g, tree, c) for c in g.edges}


def dual_tree(g: SignedGraph, tree: frozenset[int]) -> frozenset[int]:
    return frozenset(c for c in g.edges if c not in tree)


def duality_activity_check(g: SignedGraph, gbar: SignedGraph, tree: frozenset[int]) -> bool:
    """Letters of e in T and of its dual in the dual tree are swapped L<->l, D<->d."""
    tbar = dual_tree(g, tree)
    a = activity_letters(g, tree)
    b = activity_letters(gbar, tbar)
    return all(DUAL_LETTER[a[c]] == b[c] for c in g.edges)


# -- overlaid graphs -----------------------------------------------------------

HalfEdge = tuple[int, int]  # (crossing index, region id)


class BalancedOverlaidGraph:
    """Bipartite graph on crossings and the regions not adjacent to s.

    Half-edges are (crossing, region) incidences; every square face
    corresponds to a segment with both sides retained.
    """

    def __init__(self, cfg: LinkConfiguration):
        u = cfg.universe
        self.cfg = cfg
        self.universe = u
        self.omitted = cfg.omitted
        self.crossing_vertices = tuple(range(u.n))
        self.round_vertices = tuple(r for r in range(len(u.regions)) if r not in self.omitted)
        self.half_edges: tuple[HalfEdge, ...] = tuple(
            (c, u.corner_region[c][k]) for c in range(u.n) for k in range(4)
            if u.corner_region[c][k] not in self.omitted)
        self.adj: dict[int, tuple[int, ...]] = {
            c: tuple(r for cc, r in self.half_edges if cc == c) for c in range(u.n)}

    @property
    def balanced(self) -> bool:
        return len(self.crossing_vertices) == len(self.round_vertices)

    def square_faces(self) -> dict[int, tuple[HalfEdge, ...]]:
        """Segment -> its four half-edges, for segments with both sides retained."""
        u = self.universe
        out = {}
        for e, ((c1, k1), (c2, k2)) in u.ends.items():
            left, right = u.segment_sides(e)
            if left in self.omitted or right in self.omitted:
                continue
            out[e] = ((c1, left), (c1, right), (c2, left), (c2, right))
        return out

    def perfect_matchings(self) -> list[dict[int, int]]:
        """Matchings as crossing -> region maps, crossings taken in label order."""
        order = list(self.cfg.crossing_of_label)
        out: list[dict[int, int]] = []
        used: set[int] = set()
        cur: dict[int, int] = {}

        def rec(i: int) -> None:
            if i == len(order):
                out.append(dict(cur))
                return
            c = order[i]
            for r in sorted(self.adj[c]):
                if r not in used:
                    used.add(r)
                    cur[c] = r
                    rec(i + 1)
                    used.discard(r)
                    del cur[c]

        rec(0)
        return out


def build_balanced_overlaid(cfg: LinkConfiguration) -> BalancedOverlaidGraph:
    return BalancedOverlaidGraph(cfg)


def eta(cfg: LinkConfiguration, matching: Mapping[int, int]) -> tuple[frozenset[int], frozenset[int]]:
    """Matching -> double tree (T in G, Tbar in the dual), as crossing sets."""
    u = cfg.universe
    if sorted(matching) != list(range(u.n)) or len(set(matching.values())) != u.n:
        raise NotPerfectMatching("not a perfect matching of the balanced graph")
    t, tbar = set(), set()
    for c, r in matching.items():
        if r in cfg.omitted or r not in u.corner_region[c]:
            raise NotPerfectMatching(f"({c}, {r}) is not a half-edge")
        (t if u.color[r] == BLACK else tbar).add(c)
    return frozenset(t), frozenset(tbar)


def theta(cfg: LinkConfiguration, t: frozenset[int], tbar: frozenset[int]) -> dict[int, int]:
    """Double tree rooted at the omitted regions -> matching (edge to its target)."""
    u = cfg.universe
    g = checkerboard_graph(u, cfg.labels)
    gb = dual_graph(u, cfg.labels)
    out: dict[int, int] = {}
    for graph, tree, root in ((g, t, cfg.omitted_black()), (gb, tbar, cfg.omitted_white())):
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in graph.vertices}
        for c in tree:
            a, b = graph.edges[c]
            adj[a].append((b, c))
            adj[b].append((a, c))
        seen = {root}
        todo = [root]
        while todo:
            x = todo.pop()
            for y, c in adj[x]:
                if y not in seen:
                    seen.add(y)
                    out[c] = y
                    todo.append(y)
        if len(seen) != len(graph.vertices):
            raise LinkError("not a spanning tree")
    return out


# -- DOT export ------------------------------------------------------------------

def graph_to_dot(g: SignedGraph, tree: frozenset[int] | None = None) -> str:
    lines = [f"graph {g.name} {{"]
    for v in g.vertices:
        lines.append(f'  r{v} [label="R{v}"];')
    letters = activity_letters(g, tree) if tree is not None else {}
    for c in g.edge_list:
        a, b = g.edges[c]
        sign = "+" if g.signs.get(c, 1) > 0 else "-"
        lab = f"{sign}{letters.get(c, '')} c{g.order[c]}"
        style = ", style=bold" if tree is not None and c in tree else ""
        lines.append(f'  r{a} -- r{b} [label="{lab}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def balanced_to_dot(bg: BalancedOverlaidGraph, matching: Mapping[int, int] | None = None) -> str:
    u = bg.universe
    lines = ["graph balanced {"]
    for c in bg.crossing_vertices:
        lines.append(f'  c{c} [shape=box, label="c{bg.cfg.labels[c]}"];')
    for r in bg.round_vertices:
        fill = "black" if u.color[r] == BLACK else "white"
        font = "white" if fill == "black" else "black"
        lines.append(f'  r{r} [shape=circle, style=filled, fillcolor={fill}, fontcolor={font}];')
    for c, r in bg.half_edges:
        style = ", style=bold" if matching is not None and matching.get(c) == r else ""
        lines.append(f"  c{c} -- r{r} [{style.lstrip(', ')}];" if style else f"  c{c} -- r{r};")
    lines.append("}")
    return "\n".join(lines) + "\n"
