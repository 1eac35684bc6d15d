"""Link universes as rotation systems, plus diagrams and configurations.

A crossing is a list of four segment ids in counterclockwise order. The
corner ``(c, k)`` is the sector between slots ``k`` and ``k + 1`` (mod 4);
regions are classes of corners under face tracing. Regions are numbered by
their smallest corner, so the numbering is deterministic.
"""
from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

__all__ = [
    "LinkError",
    "Disconnected",
    "NotFourValent",
    "EulerViolation",
    "CurlOrNugatoryPresent",
    "InvalidConfiguration",
    "LinkUniverse",
    "LinkDiagram",
    "LinkConfiguration",
    "build_universe",
    "crossing_sign",
    "is_prime_like",
    "resolve_convention",
    "BLACK",
    "WHITE",
]

BLACK = "B"
WHITE = "W"

# convention names: "standard" makes the A-regions (swept when the over-strand
# turns counterclockwise) white at a negative crossing; "mirror" makes them black.
CONVENTIONS = ("standard", "mirror")


class LinkError(ValueError):
    pass


class Disconnected(LinkError):
    pass


class NotFourValent(LinkError):
    pass


class EulerViolation(LinkError):
    pass


class CurlOrNugatoryPresent(LinkError):
    pass


class InvalidConfiguration(LinkError):
    pass


def resolve_convention(convention: str | None = None) -> str:
    """Pick the sign convention: explicit argument, then BRACKETFORGE_CONVENTION."""
    conv = convention or os.environ.get("BRACKETFORGE_CONVENTION") or "standard"
    if conv not in CONVENTIONS:
        raise LinkError(f"unknown convention {conv!r}; expected one of {CONVENTIONS}")
    return conv


class LinkUniverse:
    """A connected 4-valent plane graph given by its rotation system.

    Parameters
    ----------
    crossings
        ``crossings[c]`` lists the four segment ids at crossing ``c`` in
        counterclockwise order.
    unbounded
        Index of the unbounded region in the canonical region numbering.
    check
        Run the structural validation (default). Intermediate objects in
        the constructions may skip it.
    """

    def __init__(self, crossings: Sequence[Sequence[int]], unbounded: int = 0,
                 check: bool = True):
        self.crossings: tuple[tuple[int, int, int, int], ...] = tuple(
            tuple(int(x) for x in c) for c in crossings)
        for c in self.crossings:
            if len(c) != 4:
                raise NotFourValent("every crossing needs exactly four slots")
        ends: dict[int, list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.crossings):
            for k, e in enumerate(c):
                ends.setdefault(e, []).append((ci, k))
        for e, lst in ends.items():
            if len(lst) != 2:
                raise NotFourValent(f"segment {e} has {len(lst)} ends, expected 2")
        self.ends: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {
            e: (lst[0], lst[1]) for e, lst in sorted(ends.items())}
        self._trace_faces()
        if not 0 <= unbounded < len(self.regions):
            raise LinkError(f"unbounded face {unbounded} out of range")
        self.unbounded = unbounded
        self._connected = self._check_connected()
        if check:
            self.validate()
        self._color()

    # -- construction internals ---------------------------------------------
    @property
    def n(self) -> int:
        return len(self.crossings)

    def other_end(self, c: int, k: int) -> tuple[int, int]:
        a, b = self.ends[self.crossings[c][k]]
        return b if a == (c, k) else a

    def _trace_faces(self) -> None:
        n = self.n
        corner_region = [[-1] * 4 for _ in range(n)]
        regions: list[tuple[tuple[int, int], ...]] = []
        for c in range(n):
            for k in range(4):
                if corner_region[c][k] >= 0:
                    continue
                rid = len(regions)
                walk = []
                cc, kk = c, k
                while corner_region[cc][kk] < 0:
                    corner_region[cc][kk] = rid
                    walk.append((cc, kk))
                    cc, kk = self.other_end(cc, (kk + 1) % 4)
                regions.append(tuple(walk))
        self.corner_region: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in corner_region)
        self.regions = tuple(regions)

    def _check_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for k in range(4):
                d, _ = self.other_end(c, k)
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        return len(seen) == self.n

    def validate(self) -> None:
        if not self._connected:
            raise Disconnected("the universe is not connected")
        if len(self.regions) != self.n + 2:
            raise EulerViolation(
                f"{len(self.regions)} regions for {self.n} crossings; expected {self.n + 2}")
        for r in self.regions:
            if len(r) == 1:
                raise CurlOrNugatoryPresent("a one-sided region (curl) is present")
            cs = [c for c, _ in r]
            if len(set(cs)) != len(cs):
                raise CurlOrNugatoryPresent(
                    f"region touches crossing {cs[0] if len(cs) else '?'} twice (nugatory crossing)")

    def _color(self) -> None:
        nreg = len(self.regions)
        color: list[str | None] = [None] * nreg
        color[self.unbounded] = WHITE
        q = deque([self.unbounded])
        adj: list[set[int]] = [set() for _ in range(nreg)]
        for c in range(self.n):
            for k in range(4):
                a = self.corner_region[c][k]
                b = self.corner_region[c][(k + 1) % 4]
                adj[a].add(b)
                adj[b].add(a)
        while q:
            r = q.popleft()
            for t in adj[r]:
                if color[t] is None:
                    color[t] = BLACK if color[r] == WHITE else WHITE
                    q.append(t)
                elif color[t] == color[r]:
                    raise LinkError("checkerboard coloring is not proper")
        if any(x is None for x in color):
            raise Disconnected("region graph is not connected")
        self.color: tuple[str, ...] = tuple(color)  # type: ignore[arg-type]

    # -- queries ------------------------------------------------------------
    @property
    def segments(self) -> list[int]:
        return list(self.ends)

    def region_of(self, c: int, k: int) -> int:
        return self.corner_region[c][k % 4]

    def segment_sides(self, e: int) -> tuple[int, int]:
        """(left, right) regions when walking ``e`` from its first end."""
        (c, k), _ = self.ends[e]
        return self.corner_region[c][k], self.corner_region[c][(k - 1) % 4]

    def segment_regions(self, e: int) -> frozenset[int]:
        return frozenset(self.segment_sides(e))

    def region_crossings(self, r: int) -> list[int]:
        return sorted({c for c, _ in self.regions[r]})

    def black_corners(self, c: int) -> tuple[int, int]:
        """Corner indices k at crossing c whose region is black."""
        ks = tuple(k for k in range(4) if self.color[self.corner_region[c][k]] == BLACK)
        return ks  # type: ignore[return-value]

    def white_corners(self, c: int) -> tuple[int, int]:
        return tuple(k for k in range(4)  # type: ignore[return-value]
                     if self.color[self.corner_region[c][k]] == WHITE)

    def recolored(self, unbounded: int) -> "LinkUniverse":
        return LinkUniverse(self.crossings, unbounded, check=False)

    def components(self) -> list[list[tuple[int, int, int]]]:
        """Strands as lists of (crossing, in_slot, out_slot), straight through."""
        used: set[tuple[int, int]] = set()
        comps = []
        for c in range(self.n):
            for k in range(4):
                if (c, k) in used:
                    continue
                comp = []
                cc, out = c, k
                while (cc, out) not in used:
                    inn = (out + 2) % 4
                    used.add((cc, out))
                    used.add((cc, inn))
                    comp.append((cc, inn, out))
                    cc, j = self.other_end(cc, out)
                    out = (j + 2) % 4
                comps.append(comp)
        return comps

    def fingerprint(self) -> str:
        return json.dumps([self.crossings, self.unbounded], separators=(",", ":"))

    def __eq__(self, other):
        return (isinstance(other, LinkUniverse) and self.crossings == other.crossings
                and self.unbounded == other.unbounded)

    def __hash__(self):
        return hash((self.crossings, self.unbounded))

    def __repr__(self):
        return f"LinkUniverse(n={self.n}, regions={len(self.regions)})"


def build_universe(crossings: Sequence[Sequence[int]], unbounded_face: int = 0) -> LinkUniverse:
    return LinkUniverse(crossings, unbounded_face)


def a_corners(over_slot: int) -> tuple[int, int]:
    """Corners swept when the over-strand turns counterclockwise."""
    return (over_slot % 4, (over_slot + 2) % 4)


@dataclass(frozen=True)
class LinkDiagram:
    """Universe plus over/under data; ``over[c]`` in {0, 1} picks the over pair.

    ``free_loops`` counts crossingless circles drawn apart from the universe;
    a diagram with no universe is a union of trivial circles.
    """

    universe: LinkUniverse | None
    over: tuple[int, ...] = ()
    convention: str = "standard"
    free_loops: int = 0
    orientation: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "over", tuple(int(x) % 2 for x in self.over))
        if self.universe is not None and len(self.over) != self.universe.n:
            raise LinkError("over/under data must have one entry per crossing")
        if self.convention not in CONVENTIONS:
            raise LinkError(f"unknown convention {self.convention!r}")

    @property
    def n(self) -> int:
        return 0 if self.universe is None else self.universe.n

    def sign(self, c: int) -> int:
        u = self.universe
        assert u is not None
        a_black = u.color[u.corner_region[c][self.over[c]]] == BLACK
        negative = (not a_black) if self.convention == "standard" else a_black
        return -1 if negative else 1

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(self.sign(c) for c in range(self.n))

    def mirror(self) -> "LinkDiagram":
        return LinkDiagram(self.universe, tuple(1 - o for o in self.over),
                           self.convention, self.free_loops, self.orientation)

    def with_convention(self, convention: str) -> "LinkDiagram":
        return LinkDiagram(self.universe, self.over, convention, self.free_loops,
                           self.orientation)

    @classmethod
    def with_signs(cls, universe: LinkUniverse, signs: Sequence[int],
                   convention: str = "standard") -> "LinkDiagram":
        """The diagram on ``universe`` realizing the requested crossing signs."""
        over = []
        for c, s in enumerate(signs):
            d0 = cls(universe, tuple([0] * universe.n), convention)
            over.append(0 if d0.sign(c) == s else 1)
        return cls(universe, tuple(over), convention)

    @classmethod
    def all_negative(cls, universe: LinkUniverse, convention: str = "standard") -> "LinkDiagram":
        return cls.with_signs(universe, [-1] * universe.n, convention)

    def is_alternating(self) -> bool:
        if self.universe is None:
            return True
        for comp in self.universe.components():
            # walking a strand, over/under must alternate
            pattern = [self.over[c] == (inn % 2) for c, inn, _ in comp]
            for i in range(len(pattern)):
                if pattern[i] == pattern[i - 1] and len(pattern) > 1:
                    return False
        return True

    def writhe(self) -> int:
        """Sum of crossing handedness for the chosen component orientation."""
        u = self.universe
        if u is None:
            return 0
        comps = u.components()
        orient = self.orientation or (1,) * len(comps)
        exit_slot: dict[tuple[int, int], int] = {}
        for comp, o in zip(comps, orient):
            for c, inn, out in comp:
                exit_slot[(c, out % 2)] = out if o > 0 else inn
        w = 0
        for c in range(u.n):
            a = self.over[c]
            over_out = exit_slot[(c, a)]
            under_out = exit_slot[(c, 1 - a)]
            # right-handed when the under-strand exits a quarter turn counterclockwise
            w += 1 if (under_out - over_out) % 4 == 1 else -1
        return w


def crossing_sign(d: LinkDiagram, c: int) -> int:
    return d.sign(c)


@dataclass(frozen=True)
class LinkConfiguration:
    """Universe with a distinguished segment and an ordered labeling.

    ``labels[c]`` is the label (1..n) of crossing ``c``.
    """

    universe: LinkUniverse
    segment: int
    labels: tuple[int, ...]
    provenance: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        n = self.universe.n
        if sorted(self.labels) != list(range(1, n + 1)):
            raise InvalidConfiguration("labeling must be a bijection onto 1..n")
        if self.segment not in self.universe.ends:
            raise InvalidConfiguration(f"segment {self.segment} is not in the universe")

    @property
    def n(self) -> int:
        return self.universe.n

    @cached_property
    def omitted(self) -> frozenset[int]:
        return self.universe.segment_regions(self.segment)

    @cached_property
    def crossing_of_label(self) -> tuple[int, ...]:
        out = [0] * self.n
        for c, l in enumerate(self.labels):
            out[l - 1] = c
        return tuple(out)

    def label(self, c: int) -> int:
        return self.labels[c]

    def omitted_white(self) -> int:
        return next(r for r in self.omitted if self.universe.color[r] == WHITE)

    def omitted_black(self) -> int:
        return next(r for r in self.omitted if self.universe.color[r] == BLACK)

    def relabeled(self, labels: Sequence[int]) -> "LinkConfiguration":
        return LinkConfiguration(self.universe, self.segment, tuple(labels))

    def half_edge_letter(self, c: int, r: int) -> str:
        """L when c carries the smallest label around region r, else D."""
        low = min(self.labels[x] for x in self.universe.region_crossings(r))
        return "L" if self.labels[c] == low else "D"

    def transposable_segments(self) -> list[int]:
        u = self.universe
        return [e for e in u.ends if e != self.segment and not (u.segment_regions(e) & self.omitted)]

    def __repr__(self):
        return f"LinkConfiguration(n={self.n}, s={self.segment}, labels={self.labels})"


def is_prime_like(u: LinkUniverse) -> bool:
    """False iff some pair of segments splits the crossings into two nonempty parts."""
    segs = list(u.ends)
    n = u.n
    if n <= 2:
        return True
    for e, f in combinations(segs, 2):
        cut = {e, f}
        seen = {0}
        todo = [0]
        while todo:
            c = todo.pop()
            for k in range(4):
                if u.crossings[c][k] in cut:
                    continue
                d, _ = u.other_end(c, k)
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
        if len(seen) < n:
            return False
    return True


# -- JSON link spec ---------------------------------------------------------

def diagram_from_json(data: dict, convention: str | None = None
                      ) -> tuple[LinkDiagram, LinkConfiguration | None]:
    """Parse the JSON link spec into a diagram and (optionally) a configuration."""
    try:
        crossings = data["crossings"]
    except (KeyError, TypeError):
        raise LinkError("link spec needs a 'crossings' array") from None
    u = LinkUniverse(crossings, int(data.get("unbounded_face", 0)))
    conv = resolve_convention(convention)
    if "over" in data:
        diag = LinkDiagram(u, tuple(data["over"]), conv,
                           orientation=tuple(data["orientation"]) if "orientation" in data else None)
    else:
        diag = LinkDiagram.all_negative(u, conv)
    cfg = None
    if "distinguished_segment" in data:
        labels = data.get("labeling") or list(range(1, u.n + 1))
        cfg = LinkConfiguration(u, int(data["distinguished_segment"]), tuple(labels))
    return diag, cfg


def diagram_to_json(diag: LinkDiagram, cfg: LinkConfiguration | None = None) -> dict:
    u = diag.universe
    assert u is not None
    out: dict = {"crossings": [list(c) for c in u.crossings],
                 "unbounded_face": u.unbounded,
                 "over": list(diag.over)}
    if cfg is not None:
        out["distinguished_segment"] = cfg.segment
        out["labeling"] = list(cfg.labels)
    return out
