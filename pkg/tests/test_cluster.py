import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bracketforge.algebra import LaurentMultiPoly, LaurentPoly
from bracketforge.cluster import (
    ClusterVariable,
    InvalidSequence,
    PreconditionViolated,
    Quiver,
    bracket_specialization_values,
    bracket_via_fpoly,
    build_quiver,
    denominator_vector,
    distinguished_cluster_variable,
    fpolynomial,
    greedy_reduction_sequence,
    gvector,
    initial_seed,
    lemma_specall_check,
    mutate,
    mutate_sequence,
    quiver_after_reduction_check,
    quiver_to_dot,
    reduction_sequences,
    reduction_to_mutation_sequence,
    separation_formula_check,
    census_prefactor,
    variable_to_json,
)
from bracketforge.construct import parse_family, permitted_reductions
from bracketforge.engines import bracket_recursive
from bracketforge.linkcore import LinkDiagram
from bracketforge.states import minimal_state, state_weight, states_lattice_polynomial


@st.composite
def quivers(draw, max_n=4, max_mult=2):
    n = draw(st.integers(1, max_n))
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.integers(-max_mult, max_mult))
            b[i][j], b[j][i] = m, -m
    return Quiver(tuple(map(tuple, b)))


@given(quivers(max_n=5, max_mult=3), st.data())
def test_quiver_mutation_is_an_involution(q, data):
    k = data.draw(st.integers(0, q.n - 1))
    assert q.mutate(k).mutate(k) == q
    assert q.mutate(k).is_skew_symmetric()


@given(quivers(max_n=3, max_mult=1), st.data())
@settings(max_examples=40, deadline=None)
def test_seed_mutation_is_an_involution(q, data):
    seq = data.draw(st.lists(st.integers(0, q.n - 1), max_size=3))
    seed = mutate_sequence(initial_seed(q), seq)
    k = data.draw(st.integers(0, q.n - 1))
    back = mutate(mutate(seed, k), k)
    assert back.cluster == seed.cluster
    assert back.coefficients == seed.coefficients
    assert back.quiver == seed.quiver


@given(quivers(max_n=3, max_mult=1), st.data())
@settings(max_examples=40, deadline=None)
def test_every_mutation_stays_laurent_and_separates(q, data):
    seq = data.draw(st.lists(st.integers(0, q.n - 1), min_size=1, max_size=4))
    seed = initial_seed(q)
    for k in seq:
        old = seed
        seed = mutate(seed, k)  # raises if a quotient is not Laurent
        # exchange relation holds exactly
        prod = seed.cluster[k] * old.cluster[k]
        assert all(c > 0 for c in prod.terms.values())
        v = ClusterVariable(seed.cluster[k], q.n)
        assert separation_formula_check(v, q)
        assert fpolynomial(v).is_polynomial()


def test_rank_two_exchange():
    q = Quiver(((0, 1), (-1, 0)))
    s = mutate(initial_seed(q), 0)
    x1, x2 = (LaurentMultiPoly.gen(i, 4) for i in range(2))
    y1 = LaurentMultiPoly.gen(2, 4)
    assert s.cluster[0] * x1 == y1 + x2
    v = ClusterVariable(s.cluster[0], 2)
    assert str(fpolynomial(v)) == "1 + y1"
    assert gvector(v) == (-1, 1)
    assert denominator_vector(v) == (1, 0)


def test_rank_two_pentagon():
    q = Quiver(((0, 1), (-1, 0)))
    s = mutate_sequence(initial_seed(q), [0, 1, 0, 1, 0])
    start = initial_seed(q)
    assert set(s.cluster) == set(start.cluster)
    assert len({str(fpolynomial(ClusterVariable(x, 2)))
                for x in mutate_sequence(start, [0, 1, 0]).cluster}) == 2


def test_quiver_is_skew_symmetric_on_transposable_segments(small_cfg):
    q = build_quiver(small_cfg)
    assert q.is_skew_symmetric()
    assert len(q.segments) == len(small_cfg.transposable_segments())
    dot = quiver_to_dot(q)
    assert dot.count("->") == sum(m for _, _, m in q.arrows())


def test_cluster_identities_for_every_reduction_sequence(small_cfg):
    m = states_lattice_polynomial(small_cfg)
    for rd in reduction_sequences(small_cfg, limit=4):
        dv = distinguished_cluster_variable(small_cfg, rd)
        assert dv.f == m
        assert all(x == 1 for x in dv.d)
        assert sorted(reduction_to_mutation_sequence(small_cfg, rd)) == list(range(len(dv.g)))


def test_prefactor_is_the_minimal_state_weight(small_cfg):
    d = LinkDiagram.all_negative(small_cfg.universe)
    assert census_prefactor(small_cfg) == state_weight(small_cfg, minimal_state(small_cfg), d)


def test_specialization_reproduces_the_bracket(small_cfg):
    d = LinkDiagram.all_negative(small_cfg.universe)
    assert bracket_via_fpoly(small_cfg, d) == bracket_recursive(d)
    assert lemma_specall_check(small_cfg, d)
    vals = bracket_specialization_values(small_cfg)
    allowed = {LaurentPoly({8: 1}), LaurentPoly({-8: 1}), LaurentPoly({4: -1}), LaurentPoly({-4: -1})}
    assert set(vals.values()) <= allowed


def test_quiver_after_every_permitted_reduction(small_cfg):
    assert all(quiver_after_reduction_check(small_cfg, r) for r in permitted_reductions(small_cfg))


def test_specialization_preconditions():
    cfg = parse_family("trefoil")
    mixed = LinkDiagram.with_signs(cfg.universe, [-1, 1, -1])
    with pytest.raises(PreconditionViolated):
        bracket_via_fpoly(cfg, mixed)
    with pytest.raises(PreconditionViolated):
        bracket_via_fpoly(cfg, LinkDiagram.all_negative(parse_family("whitehead").universe))


def test_hopf_variable():
    dv = distinguished_cluster_variable(parse_family("hopf"))
    assert str(dv.f) == "1 + y1"
    assert dv.g == (-1,) and dv.d == (1,) and dv.h == (-1,)
    data = json.loads(json.dumps(variable_to_json(dv)))
    assert data["F"] == "1 + y1" and data["mutations"] == [1]


def test_greedy_sequence_ends_at_hopf(small_cfg):
    rd = greedy_reduction_sequence(small_cfg)
    segs = rd.segments()
    assert len(segs) == len(set(segs)) == len(small_cfg.transposable_segments())


def test_reduction_sequences_reject_bad_input():
    from bracketforge.cluster import ReductionSequence
    cfg = parse_family("trefoil")
    with pytest.raises(InvalidSequence):
        reduction_to_mutation_sequence(cfg, ReductionSequence((), 999))
