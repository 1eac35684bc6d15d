import numpy as np
import pytest

from bracketforge.algebra import LaurentPoly
from bracketforge.graphs import (
    LETTER_VALUES,
    EdgeNotInTree,
    NotPerfectMatching,
    activity_letter,
    activity_letters,
    balanced_to_dot,
    build_balanced_overlaid,
    checkerboard_graph,
    dual_graph,
    duality_activity_check,
    enumerate_spanning_trees,
    eta,
    fundamental_cocycle,
    graph_to_dot,
    theta,
)


def kirchhoff(g):
    idx = {v: i for i, v in enumerate(g.vertices)}
    lap = np.zeros((len(idx), len(idx)))
    for a, b in g.edges.values():
        if a != b:
            lap[idx[a], idx[a]] += 1
            lap[idx[b], idx[b]] += 1
            lap[idx[a], idx[b]] -= 1
            lap[idx[b], idx[a]] -= 1
    return int(round(np.linalg.det(lap[1:, 1:]))) if len(idx) > 1 else 1


def test_table_one_values():
    m = LaurentPoly.monomial
    assert LETTER_VALUES[(1, "L")] == m(-3, -1) and LETTER_VALUES[(1, "D")] == m(1)
    assert LETTER_VALUES[(1, "l")] == m(3, -1) and LETTER_VALUES[(1, "d")] == m(-1)
    assert LETTER_VALUES[(-1, "L")] == m(3, -1) and LETTER_VALUES[(-1, "D")] == m(-1)
    assert LETTER_VALUES[(-1, "l")] == m(-3, -1) and LETTER_VALUES[(-1, "d")] == m(1)


def test_tree_count_matches_kirchhoff(small_cfg):
    g = checkerboard_graph(small_cfg.universe, small_cfg.labels)
    trees = enumerate_spanning_trees(g)
    assert len(set(trees)) == len(trees) == kirchhoff(g)
    gb = dual_graph(small_cfg.universe, small_cfg.labels)
    assert len(enumerate_spanning_trees(gb)) == len(trees)


def test_each_tree_spans_without_cycles(small_cfg):
    g = checkerboard_graph(small_cfg.universe, small_cfg.labels)
    for t in enumerate_spanning_trees(g):
        assert len(t) == len(g.vertices) - 1
        parent = {v: v for v in g.vertices}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x
        for c in t:
            a, b = (find(x) for x in g.edges[c])
            assert a != b
            parent[a] = b


def test_activity_duality_on_every_tree(small_cfg):
    u = small_cfg.universe
    g = checkerboard_graph(u, small_cfg.labels)
    gb = dual_graph(u, small_cfg.labels)
    assert all(duality_activity_check(g, gb, t) for t in enumerate_spanning_trees(g))


def test_activity_letter_brute_force(small_cfg):
    """L iff e is the lowest edge reconnecting T - e; l iff lowest in its cycle."""
    g = checkerboard_graph(small_cfg.universe, small_cfg.labels)
    for t in enumerate_spanning_trees(g)[:20]:
        for e in g.edges:
            if e in t:
                repl = [f for f in g.edges if (t - {e}) | {f} in set(enumerate_spanning_trees(g))]
                low = min(repl, key=g.order.__getitem__)
                assert activity_letter(g, t, e) == ("L" if low == e else "D")
            else:
                swaps = [f for f in t if (t - {f}) | {e} in set(enumerate_spanning_trees(g))]
                low = min(swaps + [e], key=g.order.__getitem__)
                assert activity_letter(g, t, e) == ("l" if low == e else "d")


def test_cocycle_needs_a_tree_edge():
    from bracketforge.construct import parse_family
    cfg = parse_family("trefoil")
    g = checkerboard_graph(cfg.universe, cfg.labels)
    t = enumerate_spanning_trees(g)[0]
    outside = next(c for c in g.edges if c not in t)
    with pytest.raises(EdgeNotInTree):
        fundamental_cocycle(g, t, outside)


def test_matchings_and_double_trees_correspond(small_cfg):
    bg = build_balanced_overlaid(small_cfg)
    assert bg.balanced
    ms = bg.perfect_matchings()
    g = checkerboard_graph(small_cfg.universe, small_cfg.labels)
    assert len(ms) == len(enumerate_spanning_trees(g))
    images = set()
    for m in ms:
        t, tbar = eta(small_cfg, m)
        assert theta(small_cfg, t, tbar) == m
        images.add(t)
    assert images == set(enumerate_spanning_trees(g))


def test_eta_rejects_non_matchings(small_cfg):
    with pytest.raises(NotPerfectMatching):
        eta(small_cfg, {0: 0})


def test_square_faces_are_the_transposable_segments(small_cfg):
    bg = build_balanced_overlaid(small_cfg)
    assert sorted(bg.square_faces()) == sorted(small_cfg.transposable_segments())


def test_dot_exports_are_wellformed(small_cfg):
    g = checkerboard_graph(small_cfg.universe, small_cfg.labels)
    t = enumerate_spanning_trees(g)[0]
    dot = graph_to_dot(g, t)
    assert dot.startswith("graph G {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == len(g.edges)
    bdot = balanced_to_dot(build_balanced_overlaid(small_cfg))
    assert bdot.count(" -- ") == len(build_balanced_overlaid(small_cfg).half_edges)
    assert set(activity_letters(g, t).values()) <= {"L", "D", "l", "d"}
