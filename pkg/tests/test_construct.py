import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracketforge.construct import (
    ASISpec,
    Entry,
    MalformedSpec,
    NonConsecutiveLabels,
    NotAdmissible,
    NotPermitted,
    active_crossings,
    asi_build,
    bigon_extend,
    bigon_reduce,
    bigon_regions,
    brute_force_admissible,
    expected_active_crossings,
    hopf,
    is_admissible_extension,
    montesinos,
    parse_asi_shorthand,
    parse_family,
    permitted_reductions,
    pretzel,
    region_census,
    region_class_violations,
    two_bridge,
)
from bracketforge.engines import bracket_recursive
from bracketforge.linkcore import LinkConfiguration, LinkDiagram
from bracketforge.states import check_ei_property

SHORT = ["hopf", "trefoil", "twobridge:4", "twobridge:2,2", "twobridge:3,2", "twobridge:2,1,2",
         "pretzel:2,2,2", "pretzel:3,1,2", "whitehead", "asi:+c1", "asi:-c2",
         "asi:+s0[-p]", "montesinos:1;1", "montesinos:1;2,1"]


def test_hopf_base():
    h = hopf()
    assert h.n == 2 and h.labels == (1, 2)
    assert len(h.transposable_segments()) == 1
    assert check_ei_property(h).ok
    assert region_census(h).as_dict()["R^u_1"] == 1


@given(st.sampled_from(SHORT), st.data())
@settings(max_examples=60, deadline=None)
def test_local_criterion_matches_brute_force(fam, data):
    cfg = parse_family(fam)
    c = data.draw(st.integers(0, cfg.n - 1))
    kind = data.draw(st.sampled_from("AB"))
    ok, witness = is_admissible_extension(cfg, c, kind)
    assert ok == brute_force_admissible(cfg, c, kind)
    if not ok:
        assert witness in (("L", "L"), ("D", "D"))


def test_rejected_extension_reports_both_letters():
    u = parse_family("trefoil").universe
    cfg = LinkConfiguration(u, 0, (1, 3, 2))
    c3 = cfg.labels.index(3)
    assert is_admissible_extension(cfg, c3, "A") == (False, ("D", "D"))
    with pytest.raises(NotAdmissible) as exc:
        bigon_extend(cfg, c3, "A")
    assert exc.value.witness == ("D", "D")


@pytest.mark.parametrize("fam", SHORT)
def test_admissible_extensions_keep_ei(fam):
    cfg = parse_family(fam)
    for c in range(cfg.n):
        for kind in "AB":
            if is_admissible_extension(cfg, c, kind)[0]:
                ext = bigon_extend(cfg, c, kind)
                assert ext.n == cfg.n + 1
                assert check_ei_property(ext).ok


def _colors_by_boundary(u, drop, skip=None):
    out = {}
    for r, corners in enumerate(u.regions):
        if r != skip:
            segs = {x for c, k in corners for x in (u.crossings[c][k], u.crossings[c][(k + 1) % 4])}
            out[frozenset(segs - drop)] = u.color[r]
    return out


@pytest.mark.parametrize("fam", SHORT)
def test_reduction_undoes_extension(fam):
    cfg = parse_family(fam)
    ref = bracket_recursive(LinkDiagram.all_negative(cfg.universe))
    for c in range(cfg.n):
        for kind in "AB":
            if not is_admissible_extension(cfg, c, kind)[0]:
                continue
            ext = bigon_extend(cfg, c, kind)
            new_labels = set(ext._split_info[2:])
            u = ext.universe
            bigon = next(r for r in bigon_regions(ext)
                         if {ext.labels[x] for x, _ in u.regions[r]} == new_labels)
            back, info = bigon_reduce(ext, bigon)
            assert set(info.labels) == new_labels
            drop = frozenset(info.sides)
            # surviving regions keep their checkerboard color
            assert _colors_by_boundary(u, drop, bigon) == _colors_by_boundary(back.universe, drop)
            assert back.n == cfg.n
            assert sorted(back.labels) == list(range(1, cfg.n + 1))
            assert check_ei_property(back).ok
            assert bracket_recursive(LinkDiagram.all_negative(back.universe)) == ref


def test_reduction_preconditions():
    cfg = parse_family("whitehead")
    u = cfg.universe
    for r in bigon_regions(cfg):
        (c1, _), (c2, _) = u.regions[r]
        if abs(cfg.labels[c1] - cfg.labels[c2]) != 1:
            with pytest.raises(NonConsecutiveLabels):
                bigon_reduce(cfg, r)
        elif cfg.segment in {x for x in u.crossings[c1]} & {x for x in u.crossings[c2]}:
            if r not in permitted_reductions(cfg):
                with pytest.raises(NotPermitted):
                    bigon_reduce(cfg, r)


def test_permitted_reductions_sorted_by_label(small_cfg):
    u = small_cfg.universe
    keys = [min(small_cfg.labels[c] for c, _ in u.regions[r]) for r in permitted_reductions(small_cfg)]
    assert keys == sorted(keys)


@pytest.mark.parametrize("fam, census", [
    ("trefoil", {"R^u_1": 2, "R^l_1": 1}),
    ("asi:+c1", {"R^u_1": 2, "R^l_1": 1, "R^u_2": 1}),
    ("whitehead", {"R^u_1": 2, "R^l_1": 1, "R^u_3": 1, "R^l_3": 1}),
    ("twobridge:2,2", {"R^u_1": 2, "R^l_1": 2, "p_minus": 1}),
    ("asi:-c2", {"R^u_1": 1, "R^l_1": 2, "R^l_2": 2}),
])
def test_region_census(fam, census):
    got = region_census(parse_family(fam)).as_dict()
    assert {k: v for k, v in got.items() if v} == census


def test_census_counts_every_region_off_the_segment(small_cfg):
    c = region_census(small_cfg)
    assert c.total() == len(small_cfg.universe.regions) - 2


def test_region_classes_and_active_crossings(small_cfg):
    assert region_class_violations(small_cfg) == []
    assert active_crossings(small_cfg) == expected_active_crossings(small_cfg)


def test_family_crossing_counts():
    assert two_bridge([5]).n == 5
    assert two_bridge([2, 3, 2]).n == 7
    assert pretzel([2, 3, 2]).n == 7
    assert montesinos(2, [[1, 1], [1]]).n == 7


def test_asi_specs_roundtrip_through_json_and_shorthand():
    spec = parse_asi_shorthand("+p,-c2,+s1[-p,+c1]")
    assert spec.shorthand() == "+p,-c2,+s1[-p,+c1]"
    again = ASISpec.from_json(json.loads(json.dumps(spec.to_json())))
    assert again == spec
    assert asi_build(spec).n == asi_build(again).n


@pytest.mark.parametrize("bad", ["+q", "+c0", "+s0[+s0[]]", "p", "+p,,+p"])
def test_malformed_shorthand(bad):
    with pytest.raises(MalformedSpec):
        parse_asi_shorthand(bad)


@pytest.mark.parametrize("bad", ["twobridge:1", "twobridge:a", "pretzel:3", "montesinos:0;1",
                                 "nosuch:1", "twobridge:0,2", "montesinos:1;"])
def test_malformed_family(bad):
    with pytest.raises(MalformedSpec):
        parse_family(bad)


def test_bad_json_spec():
    with pytest.raises(MalformedSpec):
        ASISpec.from_json({"points": [{"sign": "+", "kind": "loop"}]})
    with pytest.raises(MalformedSpec):
        ASISpec.from_json({"points": [{"kind": "curl"}]})
    assert ASISpec.from_json([{"sign": "-"}]).points == (Entry(-1),)
