import json

import pytest

from bracketforge.construct import parse_family
from bracketforge.graphs import build_balanced_overlaid
from bracketforge.linkcore import LinkConfiguration, LinkDiagram
from bracketforge.states import (
    NotAdmissible,
    NoTranspositionExists,
    _down,
    _up,
    all_states,
    build_state_lattice,
    check_ei_property,
    half_edge_activity,
    lattice_to_dot,
    minimal_state,
    state_weight,
    states_lattice_polynomial,
    states_to_json,
    transposable_segments,
    weight_ratio,
    weight_ratios,
)


def test_states_are_perfect_matchings(small_cfg):
    u = small_cfg.universe
    states = all_states(small_cfg)
    assert len(states) == len(build_balanced_overlaid(small_cfg).perfect_matchings())
    for st in states:
        assert sorted(st) == list(range(u.n))
        assert len(set(st.values())) == u.n
        assert not set(st.values()) & small_cfg.omitted
        assert all(r in u.corner_region[c] for c, r in st.items())


def test_ei_holds_on_admissible_configurations(small_cfg):
    rep = check_ei_property(small_cfg)
    assert rep.ok and rep.witness is None
    # the constant letter equals the lowest-label rule
    for (c, r), letters in rep.letters.items():
        assert letters == {small_cfg.half_edge_letter(c, r)}


def test_ei_failure_carries_a_witness():
    u = parse_family("trefoil").universe
    bad = LinkConfiguration(u, 0, (1, 3, 2))
    rep = check_ei_property(bad)
    assert not rep.ok
    (c, r), _, first, _, second = rep.witness
    assert {first, second} == {"L", "D"}
    with pytest.raises(NotAdmissible):
        half_edge_activity(bad, c, r, check=True)


def test_lattice_is_bounded_and_graded(small_cfg):
    lat = build_state_lattice(small_cfg)
    assert len(lat.nodes) == len(all_states(small_cfg))
    assert lat.minimal_elements() == [0]
    top = lat.maximum
    assert lat.rank[top] == max(lat.rank)
    assert lat.is_graded()


def test_every_chain_to_a_state_records_the_same_monomial(small_cfg):
    lat = build_state_lattice(small_cfg)
    for i in range(len(lat.nodes)):
        assert lat.chain_monomials(i) == {lat.monomials[i]}


def test_up_and_down_moves_are_inverse(small_cfg):
    segs = transposable_segments(small_cfg)
    for st in all_states(small_cfg):
        for seg in segs:
            nxt = _up(st, seg)
            if nxt is not None:
                assert _down(nxt, seg) == st


def test_minimal_state_admits_no_down_move(small_cfg):
    smin = minimal_state(small_cfg)
    assert all(_down(smin, seg) is None for seg in transposable_segments(small_cfg))


def test_transposable_numbering_is_deterministic(small_cfg):
    segs = transposable_segments(small_cfg)
    assert [s.index for s in segs] == list(range(1, len(segs) + 1))
    assert sorted(s.segment for s in segs) == sorted(small_cfg.transposable_segments())
    u = small_cfg.universe
    for s in segs:
        assert u.color[s.black] == "B" and u.color[s.white] == "W"


def test_matching_count_matches_monomial_sum(small_cfg):
    m = states_lattice_polynomial(small_cfg)
    assert sum(m.terms.values()) == len(all_states(small_cfg))


def test_weight_ratios_are_single_monomials(small_cfg):
    d = LinkDiagram.all_negative(small_cfg.universe)
    ratios = weight_ratios(small_cfg, d)
    lat = build_state_lattice(small_cfg)
    assert all(r.is_monomial() for r in ratios.values())
    for a, b, j in lat.covers:
        assert state_weight(small_cfg, lat.nodes[b], d) == \
            state_weight(small_cfg, lat.nodes[a], d) * ratios[j]


def test_trefoil_lattice_is_a_chain():
    cfg = parse_family("trefoil")
    lat = build_state_lattice(cfg)
    assert lat.monomials == [(0, 0), (1, 0), (1, 1)]
    assert str(states_lattice_polynomial(lat)) == "1 + y1 + y1*y2"
    assert str(weight_ratio(cfg, 1)) == "A^8"
    assert str(weight_ratio(cfg, 2)) == "-A^4"


def test_missing_transposition_raises():
    cfg = parse_family("trefoil")
    with pytest.raises(NoTranspositionExists):
        weight_ratio(cfg, 7)


def test_exports(small_cfg):
    lat = build_state_lattice(small_cfg)
    dot = lattice_to_dot(lat)
    assert dot.startswith("digraph") and dot.count("->") == len(lat.covers)
    data = json.loads(json.dumps(states_to_json(lat)))
    assert len(data["states"]) == len(lat.nodes)
