"""Bracket engines behind one interface, Jones conversion and cross-checks.

Engine ids: ``recursive`` (state sum, the oracle), ``spanning_tree``,
``double_tree``, ``perfect_matching`` and ``fpoly``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .algebra import CIRCLE, LaurentPoly, NonIntegralExponent, laurent_substitute_A
from .graphs import (
    LETTER_VALUES,
    activity_letters,
    checkerboard_graph,
    dual_graph,
    enumerate_spanning_trees,
)
from .linkcore import LinkConfiguration, LinkDiagram

__all__ = [
    "ENGINES",
    "EngineResult",
    "VerifyReport",
    "bracket_recursive",
    "bracket_spanning_tree",
    "bracket_double_tree",
    "bracket_perfect_matching",
    "jones_from_bracket",
    "verify_all",
    "poly_diff",
]

ENGINES = ("recursive", "spanning_tree", "double_tree", "perfect_matching", "fpoly")


@dataclass(frozen=True)
class EngineResult:
    engine: str
    bracket: LaurentPoly
    fingerprint: str = ""


def _circle_powers(max_loops: int) -> list[LaurentPoly]:
    out = [LaurentPoly({0: 1})]
    for _ in range(max_loops):
        out.append(out[-1] * CIRCLE)
    return out


def bracket_recursive(d: LinkDiagram) -> LaurentPoly:
    """Bracket from the smoothing relation, summed over all 2^n leaves.

    Crossings are resolved in label (index) order; circles at each leaf are
    counted by the loop-count kernel (numba or numpy, see ``_kernels``).
    """
    u = d.universe
    if u is None or u.n == 0:
        loops = d.free_loops if u is None else d.free_loops + 1
        return _circle_powers(max(loops - 1, 0))[max(loops - 1, 0)] if loops else LaurentPoly({0: 1})
    n = u.n
    partner = np.empty(4 * n, dtype=np.int64)
    for (c1, k1), (c2, k2) in u.ends.values():
        partner[4 * c1 + k1] = 4 * c2 + k2
        partner[4 * c2 + k2] = 4 * c1 + k1
    a_tab, b_tab = _kernels.smoothing_tables(np.asarray(d.over, dtype=np.int64))
    loops = _kernels.loop_counts(partner, a_tab, b_tab) + d.free_loops
    masks = np.arange(1 << n, dtype=np.int64)
    nb = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        nb += (masks >> i) & 1
    maxl = int(loops.max())
    counts = np.zeros((n + 1, maxl + 1), dtype=np.int64)
    np.add.at(counts, (nb, loops), 1)
    powers = _circle_powers(maxl)
    total = LaurentPoly()
    for b in range(n + 1):
        for l in range(1, maxl + 1):
            k = int(counts[b, l])
            if k:
                total = total + LaurentPoly({n - 2 * b: k}) * powers[l - 1]
    return total


def _labels(d: LinkDiagram, order: Sequence[int] | None) -> tuple[int, ...]:
    return tuple(order) if order is not None else tuple(range(1, d.n + 1))


def bracket_spanning_tree(d: LinkDiagram, order: Sequence[int] | None = None) -> LaurentPoly:
    """Sum over spanning trees of letter values of every edge's signed letter."""
    u = d.universe
    if u is None or u.n == 0:
        return bracket_recursive(d)
    g = checkerboard_graph(u, _labels(d, order), d.signs)
    total = LaurentPoly()
    for t in enumerate_spanning_trees(g):
        term = LaurentPoly({0: 1})
        for c, letter in activity_letters(g, t).items():
            term = term * LETTER_VALUES[(g.signs[c], letter)]
        total = total + term
    return total * _free(d)


def bracket_double_tree(d: LinkDiagram, order: Sequence[int] | None = None) -> LaurentPoly:
    """Sum over double trees of the internal letters in T and in its dual tree."""
    u = d.universe
    if u is None or u.n == 0:
        return bracket_recursive(d)
    labels = _labels(d, order)
    g = checkerboard_graph(u, labels, d.signs)
    gb = dual_graph(u, labels, d.signs)
    total = LaurentPoly()
    for t in enumerate_spanning_trees(g):
        tbar = frozenset(c for c in g.edges if c not in t)
        la = activity_letters(g, t)
        lb = activity_letters(gb, tbar)
        term = LaurentPoly({0: 1})
        for c in t:
            term = term * LETTER_VALUES[(g.signs[c], la[c])]
        for c in tbar:
            term = term * LETTER_VALUES[(gb.signs[c], lb[c])]
        total = total + term
    return total * _free(d)


def _free(d: LinkDiagram) -> LaurentPoly:
    return CIRCLE ** d.free_loops


def bracket_perfect_matching(cfg: LinkConfiguration, d: LinkDiagram) -> LaurentPoly:
    """Sum over perfect matchings of the balanced graph (lowest-label letters)."""
    from .states import matching_expansion
    return matching_expansion(cfg, d) * _free(d)


def jones_from_bracket(d: LinkDiagram, bracket: LaurentPoly | None = None) -> LaurentPoly:
    """V(t) from the writhe-normalized bracket with A = t^{-1/4}.

    Even-component links carry half-integral powers; those are returned with
    ``scale=2`` (exponents counted in halves of t).
    """
    br = bracket if bracket is not None else bracket_recursive(d)
    w = d.writhe()
    sign = -1 if (3 * w) % 2 else 1
    norm = br * LaurentPoly({-3 * w: sign})
    try:
        return laurent_substitute_A(norm)
    except NonIntegralExponent:
        out = {}
        for e, c in norm.items():
            if e % 2:
                raise
            out[-e // 2] = c
        return LaurentPoly(out, "t", scale=2)


def poly_diff(p: LaurentPoly, q: LaurentPoly) -> list[tuple[int, int, int]]:
    """Per-exponent differences (exponent, coef in p, coef in q)."""
    exps = sorted(set(p.terms) | set(q.terms))
    return [(e, p.coefficient(e), q.coefficient(e)) for e in exps
            if p.coefficient(e) != q.coefficient(e)]


@dataclass
class VerifyReport:
    results: list[EngineResult] = field(default_factory=list)
    skipped: dict[str, str] = field(default_factory=dict)
    divergence: tuple[str, str, list] | None = None

    @property
    def ok(self) -> bool:
        return self.divergence is None

    @property
    def bracket(self) -> LaurentPoly:
        return self.results[0].bracket

    def summary(self) -> str:
        lines = [f"{r.engine:<17}{r.bracket}" for r in self.results]
        for name, why in self.skipped.items():
            lines.append(f"{name:<17}skipped: {why}")
        if self.ok:
            nb = sum(1 for r in self.results if r.engine != "fpoly")
            lines.append(f"{nb} engines agree")
            if any(r.engine == "fpoly" for r in self.results):
                lines.append("fpoly specialization agrees")
        else:
            a, b, diff = self.divergence  # type: ignore[misc]
            lines.append(f"divergence: {b} differs from {a}")
            for e, x, y in diff:
                lines.append(f"  A^{e}: {a}={x} {b}={y}")
        return "\n".join(lines)


def verify_all(d: LinkDiagram, cfg: LinkConfiguration | None = None,
               engines: Sequence[str] = ENGINES) -> VerifyReport:
    """Run every applicable engine and compare exactly against the oracle."""
    from .states import check_ei_property
    rep = VerifyReport()
    fp = d.universe.fingerprint() if d.universe is not None else "circles"
    order = cfg.labels if cfg is not None else None
    for name in engines:
        if name == "recursive":
            val = bracket_recursive(d)
        elif name == "spanning_tree":
            val = bracket_spanning_tree(d, order)
        elif name == "double_tree":
            val = bracket_double_tree(d, order)
        elif name == "perfect_matching":
            if cfg is None:
                rep.skipped[name] = "no distinguished segment"
                continue
            if not check_ei_property(cfg).ok:
                rep.skipped[name] = "configuration is not admissible"
                continue
            val = bracket_perfect_matching(cfg, d)
        elif name == "fpoly":
            from .cluster import PreconditionViolated, bracket_via_fpoly
            if cfg is None or getattr(cfg, "provenance", None) is None:
                rep.skipped[name] = "needs an ASI-built configuration"
                continue
            try:
                val = bracket_via_fpoly(cfg, d)
            except PreconditionViolated as exc:
                rep.skipped[name] = str(exc)
                continue
        else:
            raise ValueError(f"unknown engine {name!r}")
        rep.results.append(EngineResult(name, val, fp))
    if rep.results:
        ref = rep.results[0]
        for r in rep.results[1:]:
            if r.bracket != ref.bracket:
                rep.divergence = (ref.engine, r.engine, poly_diff(ref.bracket, r.bracket))
                break
    return rep
