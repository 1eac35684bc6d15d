"""Bigon extensions and reductions, admissibility, the attach/sum/interact
assembly of admissible configurations, and the classical families.

Every builder here works by splitting crossings of the Hopf configuration;
the labeling after each split is forced by the activity letters of the
split crossing, so built configurations carry their labeling for free.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Sequence

from .linkcore import (
    BLACK,
    WHITE,
    LinkConfiguration,
    LinkError,
    LinkUniverse,
    is_prime_like,
)

__all__ = [
    "ConstructError",
    "NotAdmissible",
    "NotPrimeLike",
    "NonConsecutiveLabels",
    "NotPermitted",
    "MalformedSpec",
    "ExtensionRejected",
    "Entry",
    "ASISpec",
    "Provenance",
    "RegionCensus",
    "hopf",
    "bigon_extend",
    "is_admissible_extension",
    "bigon_reduce",
    "bigon_regions",
    "active_crossings",
    "expected_active_crossings",
    "asi_build",
    "two_bridge",
    "pretzel",
    "montesinos",
    "whitehead",
    "region_census",
    "region_class_violations",
    "parse_family",
    "parse_asi_shorthand",
    "canonical_order",
]


class ConstructError(LinkError):
    pass


class NotAdmissible(ConstructError):
    def __init__(self, msg: str, witness: tuple | None = None):
        super().__init__(msg)
        self.witness = witness


class NotPrimeLike(ConstructError):
    pass


class NonConsecutiveLabels(ConstructError):
    pass


class NotPermitted(ConstructError):
    pass


class MalformedSpec(ConstructError):
    pass


class ExtensionRejected(ConstructError):
    pass


# -- provenance ---------------------------------------------------------------------

@dataclass(frozen=True)
class Entry:
    """An attach point: sign +1/-1, kind trivial/curl/shell.

    ``components`` is the curl size (for shells: the curl on the shell's
    marked point, possibly 0); ``points`` are the shell's own attach points.
    """

    sign: int
    kind: str = "trivial"
    components: int = 0
    points: tuple["Entry", ...] = ()

    def to_json(self) -> dict:
        out: dict[str, Any] = {"sign": "+" if self.sign > 0 else "-", "kind": self.kind}
        if self.kind != "trivial":
            out["components"] = self.components
        if self.kind == "shell":
            out["points"] = [p.to_json() for p in self.points]
        return out

    def shorthand(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.kind == "trivial":
            return s + "p"
        if self.kind == "curl":
            return f"{s}c{self.components}"
        inner = ",".join(p.shorthand() for p in self.points)
        return f"{s}s{self.components}[{inner}]"


@dataclass(frozen=True)
class ASISpec:
    points: tuple[Entry, ...] = ()

    def to_json(self) -> dict:
        return {"points": [p.to_json() for p in self.points]}

    def shorthand(self) -> str:
        return ",".join(p.shorthand() for p in self.points)

    @classmethod
    def from_json(cls, data: Any) -> "ASISpec":
        try:
            pts = data["points"] if isinstance(data, dict) else data
            return cls(tuple(_entry_from_json(p, top=True) for p in pts))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSpec(f"bad attach spec: {exc}") from None


def _entry_from_json(d: dict, top: bool) -> Entry:
    sign = {"+": 1, "-": -1, 1: 1, -1: -1}[d["sign"]]
    kind = d.get("kind", "trivial")
    comps = int(d.get("components", 0))
    if kind not in ("trivial", "curl", "shell"):
        raise MalformedSpec(f"unknown kind {kind!r}")
    if kind == "shell" and not top:
        raise MalformedSpec("shells cannot be nested inside shells")
    pts = tuple(_entry_from_json(p, top=False) for p in d.get("points", ())) if kind == "shell" else ()
    return _validated(Entry(sign, kind, comps, pts), top)


def _validated(e: Entry, top: bool) -> Entry:
    if e.sign not in (1, -1):
        raise MalformedSpec("sign must be + or -")
    if e.kind == "curl" and e.components < 1:
        raise MalformedSpec("a curl needs at least one component")
    if e.kind == "shell" and e.components < 0:
        raise MalformedSpec("negative curl size on a shell")
    if e.kind == "shell" and not top:
        raise MalformedSpec("shells cannot be nested inside shells")
    for p in e.points:
        if p.kind == "shell":
            raise MalformedSpec("shells cannot be nested inside shells")
    return e


@dataclass
class Provenance:
    """Construction record: crossing roles and region classes."""

    spec: ASISpec
    roles: dict[int, tuple] = field(default_factory=dict)       # crossing -> role
    region_class: dict[int, tuple] = field(default_factory=dict)  # region -> ('u'|'l', 1..3) / ('s',)
    p_minus: int = 0

    def copy(self) -> "Provenance":
        return Provenance(self.spec, dict(self.roles), dict(self.region_class), self.p_minus)


@dataclass(frozen=True)
class RegionCensus:
    u1: int = 0
    l1: int = 0
    u2: int = 0
    l2: int = 0
    u3: int = 0
    l3: int = 0
    p_minus: int = 0

    def total(self) -> int:
        return self.u1 + self.l1 + self.u2 + self.l2 + self.u3 + self.l3

    def as_dict(self) -> dict[str, int]:
        return {"R^u_1": self.u1, "R^l_1": self.l1, "R^u_2": self.u2, "R^l_2": self.l2,
                "R^u_3": self.u3, "R^l_3": self.l3, "p_minus": self.p_minus}


# -- Hopf base ------------------------------------------------------------------------

def hopf() -> LinkConfiguration:
    """Two crossings: q0 (label 1) left, qinf (label 2) right.

    Segment 0 is the distinguished segment s running below the picture,
    1 the middle arc, 2 the upper arc and 3 the lower arc; the black region
    adjacent to s lies below the horizontal string.
    """
    crossings = [[1, 2, 0, 3], [0, 2, 1, 3]]
    probe = LinkUniverse(crossings, 0, check=False)
    u = LinkUniverse(crossings, probe.corner_region[0][1])
    prov = Provenance(ASISpec())
    prov.roles = {0: ("q0",), 1: ("qinf",)}
    for r in range(len(u.regions)):
        if r in u.segment_regions(0):
            prov.region_class[r] = ("s",)
        else:
            prov.region_class[r] = ("u", 1) if u.color[r] == BLACK else ("l", 1)
    return LinkConfiguration(u, 0, (1, 2), prov)


# -- low-level split / merge -------------------------------------------------------------

def _split(u: LinkUniverse, c: int, k: int):
    """Split crossing c so that corners k and k+2 end up on different crossings.

    Returns (crossings, new_index_of_c1, new_index_of_c2, corner_map, bigon_corner)
    where corner_map sends an old corner to a corner of the new universe.
    """
    e = u.crossings[c]
    nu = max(u.ends) + 1
    nv = nu + 1
    c1 = [nu, nv, e[k % 4], e[(k + 1) % 4]]
    c2 = [nv, nu, e[(k + 2) % 4], e[(k + 3) % 4]]
    crossings = [list(x) for x in u.crossings]
    crossings[c] = c1
    crossings.append(c2)
    i1, i2 = c, u.n
    cmap: dict[tuple[int, int], tuple[int, int]] = {}
    for cc in range(u.n):
        for kk in range(4):
            if cc != c:
                cmap[(cc, kk)] = (cc, kk)
    cmap[(c, k % 4)] = (i1, 2)
    cmap[(c, (k + 1) % 4)] = (i1, 3)
    cmap[(c, (k + 2) % 4)] = (i2, 2)
    cmap[(c, (k + 3) % 4)] = (i2, 3)
    return crossings, i1, i2, cmap, (i1, 0)


def _permute(crossings: list[list[int]], labels: list[int]):
    """Reorder crossings so that index = label - 1; returns (crossings, old->new)."""
    order = sorted(range(len(crossings)), key=lambda i: labels[i])
    new_of_old = {old: new for new, old in enumerate(order)}
    return [crossings[i] for i in order], new_of_old


def canonical_order(cfg: LinkConfiguration) -> LinkConfiguration:
    """Same configuration with crossing index = label - 1."""
    u = cfg.universe
    crossings, new_of_old = _permute([list(x) for x in u.crossings], list(cfg.labels))
    corner = u.regions[u.unbounded][0]
    probe = LinkUniverse(crossings, 0, check=False)
    ub = probe.corner_region[new_of_old[corner[0]]][corner[1]]
    nu = LinkUniverse(crossings, ub)
    prov = _remap_prov(cfg, nu, {k: (new_of_old[k[0]], k[1]) for c in range(u.n) for k in
                                  [(c, j) for j in range(4)]}, new_of_old)
    return LinkConfiguration(nu, cfg.segment, tuple(range(1, u.n + 1)), prov)


def _remap_prov(cfg: LinkConfiguration, nu: LinkUniverse, cmap, cidx) -> Provenance | None:
    prov = cfg.provenance
    if prov is None:
        return None
    u = cfg.universe
    out = prov.copy()
    out.roles = {cidx[c]: role for c, role in prov.roles.items() if c in cidx}
    out.region_class = {}
    for r, cls in prov.region_class.items():
        cc, kk = cmap[u.regions[r][0]]
        out.region_class[nu.corner_region[cc][kk]] = cls
    return out


# -- extension ---------------------------------------------------------------------------

def _split_corner(u: LinkUniverse, c: int, kind: str) -> int:
    color = BLACK if kind == "A" else WHITE
    ks = [k for k in range(4) if u.color[u.corner_region[c][k]] == color]
    return min(ks)


def is_admissible_extension(cfg: LinkConfiguration, c: int, kind: str,
                            check_prime: bool = True) -> tuple[bool, tuple | None]:
    """Local criterion: inadmissible iff both split regions are retained and
    the two half-edges of c in them carry the same letter.

    Returns (admissible, witness) with witness = (letter, letter) on failure.
    """
    u = cfg.universe
    if kind not in ("A", "B"):
        raise ConstructError("extension type must be 'A' or 'B'")
    if check_prime and not is_prime_like(u):
        raise NotPrimeLike("the universe is not prime-like")
    k = _split_corner(u, c, kind)
    rx = u.corner_region[c][k]
    ry = u.corner_region[c][(k + 2) % 4]
    if rx in cfg.omitted or ry in cfg.omitted:
        return True, None
    lx = cfg.half_edge_letter(c, rx)
    ly = cfg.half_edge_letter(c, ry)
    if lx == ly:
        return False, (lx, ly)
    return True, None


def brute_force_admissible(cfg: LinkConfiguration, c: int, kind: str) -> bool:
    """Oracle for the local criterion: some label order of the split keeps EI."""
    from .states import check_ei_property
    for flip in (False, True):
        ext = bigon_extend(cfg, c, kind, check=False, flip=flip, canonical=False)
        if check_ei_property(ext).ok:
            return True
    return False


def _extension_labels(cfg: LinkConfiguration, c: int, k: int, flip: bool | None):
    """Labels (for copy at corner k, copy at corner k+2) after splitting c."""
    u = cfg.universe
    i = cfg.labels[c]
    rx = u.corner_region[c][k]
    ry = u.corner_region[c][(k + 2) % 4]
    if flip is not None:
        return (i + 1, i) if flip else (i, i + 1)
    if rx not in cfg.omitted:
        # the copy sitting in a region where c was lowest keeps that role with i+1
        lx = cfg.half_edge_letter(c, rx)
        return (i + 1, i) if lx == "L" else (i, i + 1)
    ly = cfg.half_edge_letter(c, ry)
    return (i, i + 1) if ly == "L" else (i + 1, i)


def bigon_extend(cfg: LinkConfiguration, c: int, kind: str, *, check: bool = True,
                 flip: bool | None = None, canonical: bool = True) -> LinkConfiguration:
    """Split crossing c into two, creating a black (A) or white (B) bigon.

    The labeling of the two new crossings follows the letters of c in the
    split regions; ``flip`` forces one of the two orders instead (used by the
    brute-force admissibility oracle).
    """
    if check:
        ok, witness = is_admissible_extension(cfg, c, kind, check_prime=False)
        if not ok:
            raise NotAdmissible(
                f"extension of type {kind} at crossing labeled {cfg.labels[c]} is not admissible; "
                f"both half-edges carry {witness[0]}", witness)
    u = cfg.universe
    k = _split_corner(u, c, kind)
    crossings, i1, i2, cmap, bigon_corner = _split(u, c, k)
    l1, l2 = _extension_labels(cfg, c, k, flip)
    i = cfg.labels[c]
    labels = [l + 1 if l > i else l for l in cfg.labels] + [0]
    labels[i1] = l1
    labels[i2] = l2
    ub_corner = cmap[u.regions[u.unbounded][0]]
    probe = LinkUniverse(crossings, 0, check=False)
    nu = LinkUniverse(crossings, probe.corner_region[ub_corner[0]][ub_corner[1]])
    cidx = {x: x for x in range(u.n)}
    prov = _remap_prov(cfg, nu, cmap, cidx)
    out = LinkConfiguration(nu, cfg.segment, tuple(labels), prov)
    if prov is not None:
        bigon = nu.corner_region[bigon_corner[0]][bigon_corner[1]]
        prov.region_class[bigon] = ("new", kind)
        prov.roles[i2] = ("new",)
        prov.roles.setdefault(i1, ("new",))
    # remember which crossing index holds which copy for callers that track roles
    object.__setattr__(out, "_split_info", (i1, i2, l1, l2))
    if canonical:
        info = out._split_info  # type: ignore[attr-defined]
        can = canonical_order(out)
        object.__setattr__(can, "_split_info", (info[2] - 1, info[3] - 1, info[2], info[3]))
        return can
    return out


# -- reduction ---------------------------------------------------------------------------

def bigon_regions(cfg: LinkConfiguration) -> list[int]:
    u = cfg.universe
    return [r for r in range(len(u.regions)) if len(u.regions[r]) == 2]


@dataclass(frozen=True)
class Reduction:
    bigon: int
    sides: tuple[int, int]
    reduced_transposable: tuple[int, ...]
    labels: tuple[int, int]


def bigon_reduce(cfg: LinkConfiguration, bigon: int) -> tuple[LinkConfiguration, Reduction]:
    """Merge the two crossings of a bigon region (labels must be consecutive)."""
    u = cfg.universe
    corners = u.regions[bigon]
    if len(corners) != 2:
        raise ConstructError(f"region {bigon} is not a bigon")
    (c1, k1), (c2, k2) = corners
    if abs(cfg.labels[c1] - cfg.labels[c2]) != 1:
        raise NonConsecutiveLabels(
            f"bigon crossings carry labels {cfg.labels[c1]} and {cfg.labels[c2]}")
    if cfg.labels[c1] > cfg.labels[c2]:
        (c1, k1), (c2, k2) = (c2, k2), (c1, k1)
    x = u.crossings[c1]
    y = u.crossings[c2]
    su, sv = x[k1], x[(k1 + 1) % 4]
    if cfg.segment in (su, sv):
        raise NotPermitted("the bigon is bounded by the distinguished segment")
    if y[k2] != sv or y[(k2 + 1) % 4] != su:
        raise ConstructError("inconsistent bigon rotation")
    merged = [x[(k1 + 2) % 4], x[(k1 + 3) % 4], y[(k2 + 2) % 4], y[(k2 + 3) % 4]]
    trans = set(cfg.transposable_segments())
    red = tuple(s for s in (su, sv) if s in trans)
    keep = [i for i in range(u.n) if i != c2]
    cidx = {old: new for new, old in enumerate(keep)}
    crossings = []
    for i in keep:
        crossings.append(merged if i == c1 else list(u.crossings[i]))
    cmap: dict[tuple[int, int], tuple[int, int]] = {}
    for i in keep:
        if i != c1:
            for kk in range(4):
                cmap[(i, kk)] = (cidx[i], kk)
    cmap[(c1, (k1 + 2) % 4)] = (cidx[c1], 0)
    cmap[(c1, (k1 + 3) % 4)] = (cidx[c1], 1)
    cmap[(c2, (k2 + 2) % 4)] = (cidx[c1], 2)
    cmap[(c2, (k2 + 3) % 4)] = (cidx[c1], 3)
    # the stretched corners of c1/c2 also map onto the merged crossing
    cmap[(c1, (k1 + 1) % 4)] = cmap[(c2, (k2 + 3) % 4)]
    cmap[(c2, (k2 + 1) % 4)] = cmap[(c1, (k1 + 3) % 4)]
    i = cfg.labels[c1]
    labels = [l - 1 if l > i + 1 else l for idx, l in enumerate(cfg.labels) if idx != c2]
    ub = None
    for corner in u.regions[u.unbounded]:
        if corner in cmap:
            ub = cmap[corner]
            break
    if ub is None:
        # the bigon was the unbounded face; any white region may take its place
        ub = cmap[(c1, (k1 + 2) % 4)]
    probe = LinkUniverse(crossings, 0, check=False)
    nu = LinkUniverse(crossings, probe.corner_region[ub[0]][ub[1]], check=len(crossings) >= 2)
    prov = None
    if cfg.provenance is not None:
        prov = cfg.provenance.copy()
        prov.roles = {cidx[c]: r for c, r in cfg.provenance.roles.items() if c in cidx}
        prov.region_class = {}
        for r, cls in cfg.provenance.region_class.items():
            if r == bigon:
                continue
            cc, kk = next(cmap[cn] for cn in u.regions[r] if cn in cmap)
            prov.region_class[nu.corner_region[cc][kk]] = cls
    out = LinkConfiguration(nu, cfg.segment, tuple(labels), prov)
    return out, Reduction(bigon, (su, sv), red, (cfg.labels[c1], cfg.labels[c2]))


def permitted_reductions(cfg: LinkConfiguration) -> list[int]:
    """Bigons with consecutive labels not bounded by s, smallest labels first."""
    u = cfg.universe
    out = []
    for r in bigon_regions(cfg):
        (c1, k1), (c2, _) = u.regions[r]
        if abs(cfg.labels[c1] - cfg.labels[c2]) != 1:
            continue
        sides = {u.crossings[c1][k1], u.crossings[c1][(k1 + 1) % 4]}
        if cfg.segment in sides:
            continue
        out.append(r)
    out.sort(key=lambda r: min(cfg.labels[c] for c, _ in u.regions[r]))
    return out


# -- active crossings -----------------------------------------------------------------

def active_crossings(cfg: LinkConfiguration) -> list[int]:
    """Crossings with exactly two L letters, on corner-adjacent half-edges."""
    u = cfg.universe
    out = []
    for c in range(u.n):
        ls = [k for k in range(4) if u.corner_region[c][k] not in cfg.omitted
              and cfg.half_edge_letter(c, u.corner_region[c][k]) == "L"]
        if len(ls) == 2 and (ls[1] - ls[0]) % 4 in (1, 3):
            out.append(c)
    return out


def expected_active_crossings(cfg: LinkConfiguration) -> list[int]:
    """Active crossings predicted from the construction record."""
    prov = cfg.provenance
    if prov is None:
        raise ConstructError("configuration carries no construction record")
    keep = {"q0", "pC", "q0s", "tangle_top"}
    return sorted(c for c, role in prov.roles.items() if role[0] in keep)


# -- assembly ---------------------------------------------------------------------------

def _find_role(cfg: LinkConfiguration, role: tuple) -> int:
    for c, r in cfg.provenance.roles.items():
        if r == role:
            return c
    raise ConstructError(f"no crossing with role {role}")


def _grow(cfg: LinkConfiguration, role: tuple, kind: str, keep_role: tuple,
          new_role: tuple, region_cls: tuple) -> LinkConfiguration:
    """Extend at the crossing carrying ``role``; the lower copy gets ``keep_role``."""
    c = _find_role(cfg, role)
    ok, witness = is_admissible_extension(cfg, c, kind, check_prime=False)
    if not ok:
        raise ExtensionRejected(
            f"extension {kind} at role {role} rejected with letters {witness}")
    out = bigon_extend(cfg, c, kind, check=False)
    lo, hi, _, _ = out._split_info  # type: ignore[attr-defined]
    if out.labels[lo] > out.labels[hi]:
        lo, hi = hi, lo
    prov = out.provenance
    prov.roles[lo] = keep_role
    prov.roles[hi] = new_role
    for r, cls in list(prov.region_class.items()):
        if cls[0] == "new":
            prov.region_class[r] = region_cls
    return out


def asi_build(spec: ASISpec | Sequence[Entry]) -> LinkConfiguration:
    """Admissible configuration for an attach spec, grown from the Hopf one.

    Trivial points enter right to left by splitting q0; curls split the
    point's crossing repeatedly; a shell is one more split of the curl's
    first crossing, and its own points split the shell's left crossing.
    """
    if not isinstance(spec, ASISpec):
        spec = ASISpec(tuple(spec))
    for e in spec.points:
        _validated(e, top=True)
        for p in e.points:
            _validated(p, top=False)
    cfg = hopf()
    cfg.provenance.spec = spec
    pts = spec.points
    for j in reversed(range(len(pts))):
        e = pts[j]
        kind = "A" if e.sign > 0 else "B"
        cls = ("u", 1) if e.sign > 0 else ("l", 1)
        cfg = _grow(cfg, ("q0",), kind, ("q0",), ("q", j), cls)
    for j, e in enumerate(pts):
        if e.kind == "trivial":
            continue
        curl_kind = "B" if e.sign > 0 else "A"
        curl_cls = ("u", 2) if e.sign > 0 else ("l", 2)
        ncurl = e.components if e.kind == "curl" else e.components + 1
        for t in range(ncurl):
            if t == 0:
                cfg = _grow(cfg, ("q", j), curl_kind, ("pC", j), ("q", j), curl_cls)
            else:
                cfg = _grow(cfg, ("pC", j), curl_kind, ("pC", j), ("curl", j, t), curl_cls)
        if e.kind == "shell":
            shell_kind = "A" if e.sign > 0 else "B"
            c = _find_role(cfg, ("pC", j))
            u = cfg.universe
            k = _split_corner(u, c, shell_kind)
            stretched = {u.corner_region[c][(k + 1) % 4], u.corner_region[c][(k + 3) % 4]}
            enclosed = [r for r in stretched if cfg.provenance.region_class.get(r) == curl_cls]
            if len(enclosed) != 1:
                raise ConstructError("could not locate the curl region enclosed by the shell")
            cfg.provenance.region_class[enclosed[0]] = ("promote",)
            new_cls = ("l", 3) if e.sign > 0 else ("u", 3)
            cfg = _grow(cfg, ("pC", j), shell_kind, ("q0s", j), ("qinfs", j), new_cls)
            for r, cls in list(cfg.provenance.region_class.items()):
                if cls == ("promote",):
                    cfg.provenance.region_class[r] = ("u", 3) if e.sign > 0 else ("l", 3)
            # the first remaining curl crossing (or q^j itself) is the new marked point
            for t in reversed(range(len(e.points))):
                p = e.points[t]
                pk = "B" if p.sign > 0 else "A"
                pcls = ("u", 3) if p.sign > 0 else ("l", 3)
                cfg = _grow(cfg, ("q0s", j), pk, ("q0s", j), ("qs", j, t), pcls)
            for t, p in enumerate(e.points):
                if p.kind != "curl":
                    continue
                ck = "B" if p.sign > 0 else "A"
                ccls = ("u", 2) if p.sign > 0 else ("l", 2)
                for m in range(p.components):
                    if m == 0:
                        cfg = _grow(cfg, ("qs", j, t), ck, ("pCs", j, t), ("qs", j, t), ccls)
                    else:
                        cfg = _grow(cfg, ("pCs", j, t), ck, ("pCs", j, t), ("curls", j, t, m), ccls)
    cfg.provenance.p_minus = sum(1 for e in pts if e.kind == "trivial" and e.sign < 0)
    return cfg


# -- families ------------------------------------------------------------------------------

def two_bridge(a: Sequence[int]) -> LinkConfiguration:
    """Configuration on the 2-bridge universe L(a_1, ..., a_n).

    A single entry L(k) is the (2, k) torus universe with k - 2 positive
    points; otherwise the twist boxes become alternating groups of trivial
    points, first group negative with a_1 - 1 points, inner groups a_i
    points, last group a_n - 1 points.
    """
    a = [int(x) for x in a]
    if not a or any(x < 1 for x in a):
        raise MalformedSpec("2-bridge parameters must be positive")
    if len(a) == 1:
        if a[0] < 2:
            raise MalformedSpec("L(k) needs k >= 2")
        return asi_build([Entry(1)] * (a[0] - 2))
    counts = [a[0] - 1] + a[1:-1] + [a[-1] - 1]
    entries: list[Entry] = []
    for i, cnt in enumerate(counts):
        sign = -1 if i % 2 == 0 else 1
        entries += [Entry(sign)] * cnt
    return asi_build(entries)


def pretzel(b: Sequence[int]) -> LinkConfiguration:
    """Configuration on the pretzel universe P(b_1, ..., b_n).

    The first and last twist boxes become b_1 - 1 and b_n - 1 positive
    trivial points; each inner box b_i becomes a negative curl with b_i - 1
    components (a trivial negative point when b_i = 1).
    """
    b = [int(x) for x in b]
    if len(b) < 2 or any(x < 1 for x in b):
        raise MalformedSpec("pretzel needs at least two positive parameters")
    entries: list[Entry] = [Entry(1)] * (b[0] - 1)
    for x in b[1:-1]:
        entries.append(Entry(-1, "curl", x - 1) if x > 1 else Entry(-1))
    entries += [Entry(1)] * (b[-1] - 1)
    return asi_build(entries)


def whitehead() -> LinkConfiguration:
    """One positive shell point with an empty shell and a 0-curl (5 crossings)."""
    return asi_build([Entry(1, "shell", 0)])


def montesinos(k: int, tangles: Sequence[Sequence[int]]) -> LinkConfiguration:
    """Montesinos configuration grown from the pretzel (1,...,1, c_n + 1, ...).

    Each tangle (c_1, ..., c_n) starts as a twist box of c_n + 1 crossings.
    Its top crossing is then split c_{n-1} times by white bigons, c_{n-2}
    times by black bigons, and so on, always at the lower copy (which is
    active), alternating the bigon color per entry.
    """
    if k < 1 or not tangles:
        raise MalformedSpec("montesinos needs k >= 1 and at least one tangle")
    tangles = [tuple(int(x) for x in t) for t in tangles]
    if any(not t or any(x < 1 for x in t) for t in tangles):
        raise MalformedSpec("tangle entries must be positive")
    params = [1] * k + [t[-1] + 1 for t in tangles]
    cfg = pretzel(params)
    spec_pts = cfg.provenance.spec.points
    # index of the base entry (or q0/qinf) that realizes each tangle box
    entry_of_box = _box_entries(params)
    for idx, t in enumerate(tangles):
        box = k + idx
        role = _box_top_role(cfg, entry_of_box[box], spec_pts)
        cur = role
        kind = "B"
        for cnt in reversed(t[:-1]):
            for _ in range(cnt):
                c = _find_role(cfg, cur)
                ok, witness = is_admissible_extension(cfg, c, kind, check_prime=False)
                if not ok:
                    raise ExtensionRejected(
                        f"montesinos schedule rejected at {cur} type {kind}: {witness}")
                out = bigon_extend(cfg, c, kind, check=False)
                lo, hi, _, _ = out._split_info  # type: ignore[attr-defined]
                if out.labels[lo] > out.labels[hi]:
                    lo, hi = hi, lo
                prov = out.provenance
                prov.roles[hi] = ("tangle", idx, len(prov.roles))
                prov.roles[lo] = ("tangle_top", idx)
                for r, cls in list(prov.region_class.items()):
                    if cls[0] == "new":
                        prov.region_class[r] = ("t", idx, kind)
                cfg = out
                cur = ("tangle_top", idx)
            kind = "A" if kind == "B" else "B"
    _classify_regions(cfg)
    return cfg


def _classify_regions(cfg: LinkConfiguration) -> None:
    """Give tangle regions the census class matching their color and
    minimal-state letter; every class sharing a (color, letter) pair
    contributes the same factor to the prefactor."""
    from .states import minimal_state
    prov = cfg.provenance
    if not any(cls[0] == "t" for cls in prov.region_class.values()):
        return
    marker = {r: c for c, r in minimal_state(cfg).items()}
    table = {(WHITE, "L"): ("u", 2), (WHITE, "D"): ("u", 3),
             (BLACK, "L"): ("l", 2), (BLACK, "D"): ("u", 1)}
    for r, cls in list(prov.region_class.items()):
        if cls[0] == "t":
            key = (cfg.universe.color[r], cfg.half_edge_letter(marker[r], r))
            prov.region_class[r] = table[key]


def _box_entries(params: Sequence[int]) -> list[tuple]:
    """Which construction element realizes each pretzel twist box."""
    out: list[tuple] = []
    j = params[0] - 1  # first box: entries 0..b1-2 (plus q0)
    out.append(("first", list(range(j))))
    for x in params[1:-1]:
        out.append(("inner", j))
        j += 1
    out.append(("last", list(range(j, j + params[-1] - 1))))
    return out


def _box_top_role(cfg: LinkConfiguration, box: tuple, spec_pts) -> tuple:
    kind, data = box
    if kind == "inner":
        e = spec_pts[data]
        return ("pC", data) if e.kind == "curl" else ("q", data)
    if kind == "last":
        return ("q", data[0]) if data else ("qinf",)
    return ("q0",)


# -- census -----------------------------------------------------------------------

def region_census(cfg: LinkConfiguration) -> RegionCensus:
    prov = cfg.provenance
    if prov is None:
        raise ConstructError("configuration carries no construction record")
    counts = {"u1": 0, "l1": 0, "u2": 0, "l2": 0, "u3": 0, "l3": 0}
    for r in range(len(cfg.universe.regions)):
        cls = prov.region_class.get(r)
        if cls is None:
            raise ConstructError(f"region {r} has no class")
        if cls[0] in ("u", "l"):
            counts[f"{cls[0]}{cls[1]}"] += 1
        elif cls[0] != "s":
            raise ConstructError(f"region {r} has no census class ({cls})")
    return RegionCensus(p_minus=prov.p_minus, **counts)


#: (color, admissible minimal-state letters) per region class
REGION_CLASS_RULES = {
    ("u", 1): (BLACK, {"D"}), ("l", 1): (WHITE, {"L", "D"}),
    ("u", 2): (WHITE, {"L"}), ("l", 2): (BLACK, {"L"}),
    ("u", 3): (WHITE, {"D"}), ("l", 3): (BLACK, {"L"}),
}


def region_class_violations(cfg: LinkConfiguration) -> list[tuple[int, tuple, str, str]]:
    """Regions whose color or minimal-state letter disagrees with the class table."""
    from .states import minimal_state
    u = cfg.universe
    smin = minimal_state(cfg)
    marker = {r: c for c, r in smin.items()}
    bad = []
    for r, cls in cfg.provenance.region_class.items():
        if cls not in REGION_CLASS_RULES:
            continue
        color, letters = REGION_CLASS_RULES[cls]
        letter = cfg.half_edge_letter(marker[r], r)
        if u.color[r] != color or letter not in letters:
            bad.append((r, cls, u.color[r], letter))
    return bad


# -- shorthand parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"([+-])(p|c(\d+)|s(\d+)(\[([^\]]*)\])?)$")


def parse_asi_shorthand(text: str) -> ASISpec:
    """``+p,-c2,+s0[+p,-p]``: trivial points, curls with sizes, shells."""
    text = text.strip()
    if not text:
        return ASISpec()
    tokens, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            tokens.append(cur)
            cur = ""
            continue
        depth += ch == "["
        depth -= ch == "]"
        cur += ch
    tokens.append(cur)
    return ASISpec(tuple(_parse_token(t.strip(), top=True) for t in tokens))


def _parse_token(tok: str, top: bool) -> Entry:
    m = _TOKEN.match(tok)
    if not m:
        raise MalformedSpec(f"cannot parse attach token {tok!r}")
    sign = 1 if m.group(1) == "+" else -1
    body = m.group(2)
    if body == "p":
        return Entry(sign)
    if body.startswith("c"):
        return _validated(Entry(sign, "curl", int(m.group(3))), top)
    if not top:
        raise MalformedSpec("shells cannot be nested inside shells")
    inner = m.group(6) or ""
    pts = tuple(_parse_token(t.strip(), top=False) for t in inner.split(",") if t.strip())
    return _validated(Entry(sign, "shell", int(m.group(4)), pts), top)


NAMED = {
    "hopf": lambda: asi_build([]),
    "trefoil": lambda: two_bridge([3]),
    "figure8": lambda: two_bridge([2, 2]),
    "whitehead": whitehead,
}


def parse_family(text: str) -> LinkConfiguration:
    """Family shorthand: twobridge:a1,..  pretzel:b1,..  montesinos:k;c11,c12/..
    asi:<tokens>  or one of the names hopf, trefoil, figure8, whitehead."""
    text = text.strip()
    if text in NAMED:
        return NAMED[text]()
    if ":" not in text:
        raise MalformedSpec(f"unknown family {text!r}")
    name, _, arg = text.partition(":")
    try:
        if name == "twobridge":
            return two_bridge([int(x) for x in arg.split(",")])
        if name == "pretzel":
            return pretzel([int(x) for x in arg.split(",")])
        if name == "montesinos":
            k, _, rest = arg.partition(";")
            tangles = [[int(x) for x in t.split(",")] for t in rest.split("/") if t.strip()]
            return montesinos(int(k), tangles)
        if name == "asi":
            return asi_build(parse_asi_shorthand(arg))
    except ValueError as exc:
        if isinstance(exc, ConstructError):
            raise
        raise MalformedSpec(f"bad family parameters in {text!r}: {exc}") from None
    raise MalformedSpec(f"unknown family {name!r}")


def spec_from_json(text: str) -> ASISpec:
    return ASISpec.from_json(json.loads(text))
