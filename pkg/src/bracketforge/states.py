"""Kauffman states of a configuration and the lattice they form.

States are stored as matchings ``{crossing: region}``. An up move at a
transposable segment rotates the two markers on it counterclockwise: with
the segment walked so that its black side is on the left, a state holding
(tail, white) and (head, black) moves to (tail, black) and (head, white).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import LaurentPoly, MultiPoly
from .graphs import (
    LETTER_VALUES,
    BalancedOverlaidGraph,
    activity_letter,
    checkerboard_graph,
    dual_graph,
    eta,
)
from .linkcore import BLACK, LinkConfiguration, LinkDiagram, LinkError

__all__ = [
    "NotAdmissible",
    "NoTranspositionExists",
    "EIReport",
    "StateLattice",
    "TransposableSegment",
    "KauffmanState",
    "all_states",
    "check_ei_property",
    "half_edge_activity",
    "half_edge_sign",
    "matching_expansion",
    "build_state_lattice",
    "minimal_state",
    "state_monomial",
    "states_lattice_polynomial",
    "state_weight",
    "weight_ratio",
    "weight_ratios",
    "transposable_segments",
    "lattice_to_dot",
    "states_to_json",
]

KauffmanState = Mapping[int, int]


class NotAdmissible(LinkError):
    pass


class NoTranspositionExists(LinkError):
    pass


def _key(st: Mapping[int, int]) -> tuple[int, ...]:
    return tuple(st[c] for c in range(len(st)))


def all_states(cfg: LinkConfiguration) -> list[dict[int, int]]:
    """Every Kauffman state, i.e. every perfect matching of the balanced graph."""
    return BalancedOverlaidGraph(cfg).perfect_matchings()


# -- EI property -----------------------------------------------------------------

@dataclass
class EIReport:
    letters: dict[tuple[int, int], set[str]] = field(default_factory=dict)
    witness: tuple | None = None  # (half_edge, matching_a, letter_a, matching_b, letter_b)

    @property
    def ok(self) -> bool:
        return self.witness is None

    def letter(self, c: int, r: int) -> str:
        (x,) = self.letters[(c, r)]
        return x


def _matching_letters(cfg: LinkConfiguration, g, gb, m: Mapping[int, int]) -> dict[int, str]:
    t, tbar = eta(cfg, m)
    out = {}
    for c in t:
        out[c] = activity_letter(g, t, c)
    for c in tbar:
        out[c] = activity_letter(gb, tbar, c)
    return out


def check_ei_property(cfg: LinkConfiguration) -> EIReport:
    """Brute force: the letter of every half-edge over all matchings containing it."""
    u = cfg.universe
    g = checkerboard_graph(u, cfg.labels)
    gb = dual_graph(u, cfg.labels)
    rep = EIReport()
    first: dict[tuple[int, int], tuple[dict, str]] = {}
    for m in all_states(cfg):
        letters = _matching_letters(cfg, g, gb, m)
        for c, r in m.items():
            h = (c, r)
            rep.letters.setdefault(h, set()).add(letters[c])
            if h not in first:
                first[h] = (m, letters[c])
            elif rep.witness is None and first[h][1] != letters[c]:
                rep.witness = (h, first[h][0], first[h][1], m, letters[c])
    return rep


def half_edge_activity(cfg: LinkConfiguration, c: int, r: int, check: bool = False) -> str:
    """Letter of half-edge (c, r): L when c has the lowest label around r."""
    if r in cfg.omitted or r not in cfg.universe.corner_region[c]:
        raise LinkError(f"({c}, {r}) is not a half-edge of the balanced graph")
    if check and not check_ei_property(cfg).ok:
        raise NotAdmissible("configuration fails the EI property")
    return cfg.half_edge_letter(c, r)


def half_edge_sign(d: LinkDiagram, c: int, r: int) -> int:
    return d.sign(c) * (1 if d.universe.color[r] == BLACK else -1)


def _half_edge_value(cfg: LinkConfiguration, d: LinkDiagram, c: int, r: int) -> LaurentPoly:
    return LETTER_VALUES[(half_edge_sign(d, c, r), cfg.half_edge_letter(c, r))]


def state_weight(cfg: LinkConfiguration, st: Mapping[int, int],
                 d: LinkDiagram | None = None) -> LaurentPoly:
    """Product of the signed letter values over the markers of the state.

    Without a diagram the alternating all-negative one is used.
    """
    d = d or LinkDiagram.all_negative(cfg.universe)
    out = LaurentPoly({0: 1})
    for c, r in st.items():
        out = out * _half_edge_value(cfg, d, c, r)
    return out


def matching_expansion(cfg: LinkConfiguration, d: LinkDiagram) -> LaurentPoly:
    total = LaurentPoly()
    for st in all_states(cfg):
        total = total + state_weight(cfg, st, d)
    return total


# -- transposable segments and moves ----------------------------------------------

@dataclass(frozen=True)
class TransposableSegment:
    segment: int
    tail: int   # crossing the walk starts from (black region on the left)
    head: int
    black: int
    white: int
    index: int  # 1-based y index


def transposable_segments(cfg: LinkConfiguration) -> list[TransposableSegment]:
    """Transposable segments in y order: lower end label, then black and white region ids."""
    u = cfg.universe
    raw = []
    for e in cfg.transposable_segments():
        (c1, _), (c2, _) = u.ends[e]
        left, right = u.segment_sides(e)
        if u.color[left] == BLACK:
            tail, head, black, white = c1, c2, left, right
        else:
            tail, head, black, white = c2, c1, right, left
        lo = min(cfg.labels[tail], cfg.labels[head])
        raw.append(((lo, black, white), e, tail, head, black, white))
    raw.sort()
    return [TransposableSegment(e, t, h, b, w, i + 1)
            for i, (_, e, t, h, b, w) in enumerate(raw)]


def _up(st: Mapping[int, int], seg: TransposableSegment) -> dict[int, int] | None:
    if st[seg.tail] == seg.white and st[seg.head] == seg.black:
        new = dict(st)
        new[seg.tail] = seg.black
        new[seg.head] = seg.white
        return new
    return None


def _down(st: Mapping[int, int], seg: TransposableSegment) -> dict[int, int] | None:
    if st[seg.tail] == seg.black and st[seg.head] == seg.white:
        new = dict(st)
        new[seg.tail] = seg.white
        new[seg.head] = seg.black
        return new
    return None


def minimal_state(cfg: LinkConfiguration) -> dict[int, int]:
    """Start from any state and apply down moves until none applies."""
    segs = transposable_segments(cfg)
    states = all_states(cfg)
    if not states:
        raise LinkError("configuration has no Kauffman states")
    st = states[0]
    moved = True
    while moved:
        moved = False
        for seg in segs:
            nxt = _down(st, seg)
            if nxt is not None:
                st = nxt
                moved = True
                break
    return st


@dataclass
class StateLattice:
    cfg: LinkConfiguration
    segments: list[TransposableSegment]
    nodes: list[dict[int, int]]
    covers: list[tuple[int, int, int]]  # (lower node, upper node, y index)
    rank: list[int]
    monomials: list[tuple[int, ...]]

    @property
    def minimum(self) -> int:
        return 0

    @property
    def maximum(self) -> int:
        tops = [i for i in range(len(self.nodes)) if not any(a == i for a, _, _ in self.covers)]
        if len(tops) != 1:
            raise LinkError(f"lattice has {len(tops)} maximal elements")
        return tops[0]

    def index_of(self, st: Mapping[int, int]) -> int:
        key = _key(st)
        for i, node in enumerate(self.nodes):
            if _key(node) == key:
                return i
        raise KeyError("state not in lattice")

    def up_neighbors(self, i: int) -> list[tuple[int, int]]:
        return [(b, j) for a, b, j in self.covers if a == i]

    def minimal_elements(self) -> list[int]:
        has_below = {b for _, b, _ in self.covers}
        return [i for i in range(len(self.nodes)) if i not in has_below]

    def is_graded(self) -> bool:
        """Every cover raises the rank by one and ranks agree with monomial degree."""
        return all(self.rank[b] == self.rank[a] + 1 for a, b, _ in self.covers) and all(
            sum(self.monomials[i]) == self.rank[i] for i in range(len(self.nodes)))

    def chain_monomials(self, i: int) -> set[tuple[int, ...]]:
        """Monomials of every saturated chain from the minimum to node i."""
        down: dict[int, list[tuple[int, int]]] = {}
        for a, b, j in self.covers:
            down.setdefault(b, []).append((a, j))
        n = len(self.segments)
        memo: dict[int, set[tuple[int, ...]]] = {0: {(0,) * n}}

        def rec(x: int) -> set[tuple[int, ...]]:
            if x in memo:
                return memo[x]
            out = set()
            for a, j in down.get(x, []):
                for m in rec(a):
                    mm = list(m)
                    mm[j - 1] += 1
                    out.add(tuple(mm))
            memo[x] = out
            return out

        return rec(i)


def build_state_lattice(cfg: LinkConfiguration) -> StateLattice:
    """Breadth-first closure of the minimal state under up moves."""
    segs = transposable_segments(cfg)
    smin = minimal_state(cfg)
    nodes = [smin]
    index = {_key(smin): 0}
    rank = [0]
    monos = [(0,) * len(segs)]
    covers = []
    q = deque([0])
    while q:
        i = q.popleft()
        for seg in segs:
            nxt = _up(nodes[i], seg)
            if nxt is None:
                continue
            k = _key(nxt)
            if k not in index:
                index[k] = len(nodes)
                nodes.append(nxt)
                rank.append(rank[i] + 1)
                m = list(monos[i])
                m[seg.index - 1] += 1
                monos.append(tuple(m))
                q.append(index[k])
            covers.append((i, index[k], seg.index))
    return StateLattice(cfg, segs, nodes, covers, rank, monos)


def state_monomial(lat: StateLattice, st: Mapping[int, int] | int) -> tuple[int, ...]:
    i = st if isinstance(st, int) else lat.index_of(st)
    return lat.monomials[i]


def _names(n: int) -> tuple[str, ...]:
    return tuple(f"y{i + 1}" for i in range(n))


def states_lattice_polynomial(cfg: LinkConfiguration | StateLattice) -> MultiPoly:
    lat = cfg if isinstance(cfg, StateLattice) else build_state_lattice(cfg)
    n = len(lat.segments)
    terms: dict[tuple[int, ...], int] = {}
    for m in lat.monomials:
        terms[m] = terms.get(m, 0) + 1
    return MultiPoly(terms, n, _names(n))


def weight_ratios(cfg: LinkConfiguration, d: LinkDiagram | None = None,
                  lat: StateLattice | None = None) -> dict[int, LaurentPoly]:
    """y index -> the common ratio of weights across its cover edges.

    Raises LinkError if two cover edges with the same label disagree.
    """
    lat = lat or build_state_lattice(cfg)
    d = d or LinkDiagram.all_negative(cfg.universe)
    weights = [state_weight(cfg, st, d) for st in lat.nodes]
    out: dict[int, LaurentPoly] = {}
    for a, b, j in lat.covers:
        wa, wb = weights[a], weights[b]
        (ea, ca), = wa.items()
        (eb, cb), = wb.items()
        ratio = LaurentPoly({eb - ea: cb // ca})
        if j in out and out[j] != ratio:
            raise LinkError(f"weight ratio of y{j} depends on the cover edge: {out[j]} vs {ratio}")
        out[j] = ratio
    return out


def weight_ratio(cfg: LinkConfiguration, j: int, d: LinkDiagram | None = None,
                 lat: StateLattice | None = None) -> LaurentPoly:
    ratios = weight_ratios(cfg, d, lat)
    if j not in ratios:
        raise NoTranspositionExists(f"no state admits a transposition at y{j}")
    return ratios[j]


# -- export ---------------------------------------------------------------------------

def _mono_text(m: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"y{i + 1}")
        elif e > 1:
            parts.append(f"y{i + 1}^{e}")
    return "*".join(parts) or "1"


def lattice_to_dot(lat: StateLattice) -> str:
    lines = ["digraph states {", "  rankdir=BT;"]
    for i, m in enumerate(lat.monomials):
        lines.append(f'  s{i} [label="{_mono_text(m)}"];')
    for a, b, j in lat.covers:
        lines.append(f'  s{a} -> s{b} [label="y{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def states_to_json(lat: StateLattice) -> dict:
    labels = lat.cfg.labels
    return {
        "segments": [{"y": s.index, "segment": s.segment, "tail": labels[s.tail],
                      "head": labels[s.head]} for s in lat.segments],
        "states": [{"markers": [[labels[c], r] for c, r in sorted(st.items())],
                    "monomial": list(lat.monomials[i])}
                   for i, st in enumerate(lat.nodes)],
        "covers": [list(x) for x in lat.covers],
    }
