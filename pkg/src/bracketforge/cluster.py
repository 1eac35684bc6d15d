"""Quivers of configurations, seed mutation with principal coefficients, and
the F-polynomial route to the bracket.

Cluster variables are kept as exact Laurent polynomials in 2N variables:
the initial cluster x_1..x_N followed by the coefficient generators
y_1..y_N. Vertex i of every quiver is the transposable segment with y
index i + 1 (see ``states.transposable_segments``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    LaurentMultiPoly,
    LaurentPoly,
    MultiPoly,
    NotDivisible,
    TropicalElement,
    tropical_one_plus,
)
from .construct import (
    ConstructError,
    active_crossings,
    bigon_reduce,
    permitted_reductions,
    region_census,
)
from .linkcore import LinkConfiguration, LinkDiagram, LinkError
from .states import (
    build_state_lattice,
    minimal_state,
    state_weight,
    states_lattice_polynomial,
    transposable_segments,
    weight_ratios,
)

__all__ = [
    "ClusterError",
    "InvalidSequence",
    "TheoremViolation",
    "PreconditionViolated",
    "LaurentPhenomenonViolated",
    "Quiver",
    "Seed",
    "ClusterVariable",
    "build_quiver",
    "initial_seed",
    "mutate",
    "mutate_sequence",
    "reduction_sequences",
    "greedy_reduction_sequence",
    "reduction_to_mutation_sequence",
    "distinguished_cluster_variable",
    "gvector",
    "hvector",
    "denominator_vector",
    "fpolynomial",
    "bracket_specialization_values",
    "bracket_via_fpoly",
    "census_prefactor",
    "lemma_specall_check",
    "quiver_after_reduction_check",
    "sequence_renaming",
    "quiver_to_dot",
    "variable_to_json",
]


class ClusterError(LinkError):
    pass


class InvalidSequence(ClusterError):
    pass


class TheoremViolation(ClusterError):
    pass


class PreconditionViolated(ClusterError):
    pass


class LaurentPhenomenonViolated(ClusterError):
    pass


# -- quivers ----------------------------------------------------------------------

@dataclass(frozen=True)
class Quiver:
    """Skew-symmetric exchange matrix; ``b[i][j]`` = arrows i->j minus j->i."""

    b: tuple[tuple[int, ...], ...]
    segments: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.b)

    def arrows(self) -> list[tuple[int, int, int]]:
        return [(i, j, self.b[i][j]) for i in range(self.n) for j in range(self.n)
                if self.b[i][j] > 0]

    def is_skew_symmetric(self) -> bool:
        return all(self.b[i][j] == -self.b[j][i] for i in range(self.n) for j in range(self.n))

    def mutate(self, k: int) -> "Quiver":
        n = self.n
        b = self.b
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == k or j == k:
                    out[i][j] = -b[i][j]
                else:
                    out[i][j] = b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2
        return Quiver(tuple(tuple(r) for r in out), self.segments)

    def delete(self, vertices: Sequence[int]) -> "Quiver":
        keep = [i for i in range(self.n) if i not in set(vertices)]
        return Quiver(tuple(tuple(self.b[i][j] for j in keep) for i in keep),
                      tuple(self.segments[i] for i in keep) if self.segments else ())


def build_quiver(cfg: LinkConfiguration) -> Quiver:
    """Arrow s_b -> s_a whenever s_a follows s_b counterclockwise around a
    crossing across a retained region; opposite arrows cancel."""
    u = cfg.universe
    segs = transposable_segments(cfg)
    idx = {s.segment: s.index - 1 for s in segs}
    n = len(segs)
    b = [[0] * n for _ in range(n)]
    for c in range(u.n):
        for k in range(4):
            if u.corner_region[c][k] in cfg.omitted:
                continue
            sb, sa = u.crossings[c][k], u.crossings[c][(k + 1) % 4]
            if sb in idx and sa in idx and sb != sa:
                b[idx[sb]][idx[sa]] += 1
                b[idx[sa]][idx[sb]] -= 1
    return Quiver(tuple(tuple(r) for r in b), tuple(s.segment for s in segs))


# -- seeds ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Seed:
    quiver: Quiver
    coefficients: tuple[TropicalElement, ...]
    cluster: tuple[LaurentMultiPoly, ...]

    @property
    def n(self) -> int:
        return self.quiver.n


def _names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{i + 1}" for i in range(n))


def initial_seed(q: Quiver) -> Seed:
    n = q.n
    names = _names(n)
    cluster = tuple(LaurentMultiPoly.gen(i, 2 * n, names) for i in range(n))
    coeffs = tuple(TropicalElement.gen(i, n) for i in range(n))
    return Seed(q, coeffs, cluster)


def _y_monomial(exps: Sequence[int], n: int) -> LaurentMultiPoly:
    return LaurentMultiPoly.monomial((0,) * n + tuple(exps), 2 * n, _names(n))


def mutate(seed: Seed, k: int, check_laurent: bool = True) -> Seed:
    """Mutation in direction k (0-based) of quiver, coefficients and cluster."""
    n = seed.n
    b = seed.quiver.b
    yk = seed.coefficients[k]
    denom = tropical_one_plus(yk)
    p_plus = tuple(a - m for a, m in zip(yk.exponents, denom.exponents))
    p_minus = tuple(-m for m in denom.exponents)
    plus = _y_monomial(p_plus, n)
    minus = _y_monomial(p_minus, n)
    for i in range(n):
        if b[i][k] > 0:
            plus = plus * seed.cluster[i] ** b[i][k]
        elif b[i][k] < 0:
            minus = minus * seed.cluster[i] ** (-b[i][k])
    try:
        new_x = (plus + minus).exact_div(seed.cluster[k])
    except NotDivisible:
        raise LaurentPhenomenonViolated(f"mutation at {k + 1} left a non-Laurent quotient") from None
    if check_laurent and any(e < 0 for key in new_x.terms for e in key[n:]):
        raise LaurentPhenomenonViolated("coefficient part acquired negative exponents")
    coeffs = []
    for j in range(n):
        if j == k:
            coeffs.append(yk.inverse())
        else:
            bkj = b[k][j]
            coeffs.append(seed.coefficients[j] * yk ** max(bkj, 0) * denom ** (-bkj))
    cluster = list(seed.cluster)
    cluster[k] = new_x
    return Seed(seed.quiver.mutate(k), tuple(coeffs), tuple(cluster))


def mutate_sequence(seed: Seed, ks: Sequence[int]) -> Seed:
    """Apply mutations in the order given (first element first)."""
    for k in ks:
        seed = mutate(seed, k)
    return seed


# -- cluster variables -------------------------------------------------------------

@dataclass(frozen=True)
class ClusterVariable:
    expansion: LaurentMultiPoly
    n: int

    @property
    def f(self) -> MultiPoly:
        return fpolynomial(self)

    @property
    def g(self) -> tuple[int, ...]:
        return gvector(self)

    @property
    def d(self) -> tuple[int, ...]:
        return denominator_vector(self)


def fpolynomial(v: ClusterVariable) -> MultiPoly:
    n = v.n
    terms: dict[tuple, int] = {}
    for key, c in v.expansion.terms.items():
        y = key[n:]
        terms[y] = terms.get(y, 0) + c
    return MultiPoly(terms, n, tuple(f"y{i + 1}" for i in range(n)))


def gvector(v: ClusterVariable) -> tuple[int, ...]:
    """x-exponents of the unique term whose y-part is constant."""
    n = v.n
    hits = [key[:n] for key in v.expansion.terms if not any(key[n:])]
    if len(hits) != 1:
        raise TheoremViolation(f"{len(hits)} y-free terms; the g-vector is not defined")
    return tuple(hits[0])


def denominator_vector(v: ClusterVariable) -> tuple[int, ...]:
    mins = v.expansion.min_exponents()[:v.n]
    return tuple(max(0, -m) for m in mins)


def hvector(v: ClusterVariable, q: Quiver) -> tuple[int, ...]:
    """Tropical evaluation of F at y_j -> x_j^{-1} prod_{j->k} x_k (initial arrows)."""
    n = v.n
    images = []
    for j in range(n):
        e = [0] * n
        e[j] -= 1
        for k in range(n):
            if q.b[j][k] > 0:
                e[k] += q.b[j][k]
        images.append(e)
    best: list[int] | None = None
    for key in fpolynomial(v).terms:
        vec = [sum(key[j] * images[j][i] for j in range(n)) for i in range(n)]
        best = vec if best is None else [min(a, b) for a, b in zip(best, vec)]
    return tuple(best or [0] * n)


def yhat(q: Quiver) -> list[LaurentMultiPoly]:
    """Exchange ratios y_j prod_k x_k^{b_kj} in the 2N-variable ring."""
    n = q.n
    out = []
    for j in range(n):
        e = [0] * (2 * n)
        e[n + j] = 1
        for k in range(n):
            e[k] += q.b[k][j]
        out.append(LaurentMultiPoly.monomial(e, 2 * n, _names(n)))
    return out


def separation_formula_check(v: ClusterVariable, q: Quiver) -> bool:
    """x = F(yhat) x^g, since F|_P = 1 for principal coefficients here."""
    n = v.n
    f = fpolynomial(v)
    ring = LaurentMultiPoly.one(2 * n, _names(n))
    lifted = LaurentMultiPoly({k: c for k, c in f.terms.items()}, n)
    images = yhat(q)
    val = lifted.substitute(images) if f.terms else ring * 0
    g = gvector(v)
    return val * LaurentMultiPoly.monomial(tuple(g) + (0,) * n, 2 * n, _names(n)) == v.expansion


# -- reduction sequences ----------------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    bigon_labels: tuple[int, int]
    reduced: tuple[int, ...]  # reduced transposable segment ids


@dataclass(frozen=True)
class ReductionSequence:
    steps: tuple[ReductionStep, ...]
    final_segment: int  # the Hopf transposable segment s_q

    def segments(self) -> tuple[int, ...]:
        """The sequence s_q, ..., s_k (last reduced segments on the left)."""
        out: list[int] = []
        for st in self.steps:
            out = list(st.reduced) + out
        return (self.final_segment, *out)


def _finish(cfg: LinkConfiguration) -> int:
    if cfg.n != 2:
        raise InvalidSequence("reduction sequence does not end at the Hopf universe")
    trans = cfg.transposable_segments()
    if len(trans) != 1:
        raise InvalidSequence("Hopf universe must have one transposable segment")
    return trans[0]


def _reduce_by_labels(cfg: LinkConfiguration, labels: tuple[int, int]):
    for r in permitted_reductions(cfg):
        u = cfg.universe
        ls = tuple(sorted(cfg.labels[c] for c, _ in u.regions[r]))
        if ls == tuple(sorted(labels)):
            return bigon_reduce(cfg, r)
    raise InvalidSequence(f"no permitted bigon with labels {labels}")


def greedy_reduction_sequence(cfg: LinkConfiguration) -> ReductionSequence:
    """Always reduce the permitted bigon with the smallest labels."""
    steps = []
    cur = cfg
    while cur.n > 2:
        opts = permitted_reductions(cur)
        if not opts:
            raise InvalidSequence("no permitted bigon reduction is available")
        cur, red = bigon_reduce(cur, opts[0])
        steps.append(ReductionStep(red.labels, red.reduced_transposable))
    return ReductionSequence(tuple(steps), _finish(cur))


def reduction_sequences(cfg: LinkConfiguration, limit: int = 8) -> list[ReductionSequence]:
    """Up to ``limit`` distinct reduction sequences by depth-first search."""
    out: list[ReductionSequence] = []
    seen: set[tuple] = set()

    def rec(cur: LinkConfiguration, steps: list[ReductionStep]) -> None:
        if len(out) >= limit:
            return
        if cur.n == 2:
            rs = ReductionSequence(tuple(steps), _finish(cur))
            key = rs.segments()
            if key not in seen:
                seen.add(key)
                out.append(rs)
            return
        for r in permitted_reductions(cur):
            nxt, red = bigon_reduce(cur, r)
            rec(nxt, steps + [ReductionStep(red.labels, red.reduced_transposable)])

    rec(cfg, [])
    if not out:
        raise InvalidSequence("configuration admits no reduction sequence")
    return out


def reduction_to_mutation_sequence(cfg: LinkConfiguration, rd: ReductionSequence) -> list[int]:
    """0-based vertices in application order (the rightmost entry first)."""
    idx = {s.segment: s.index - 1 for s in transposable_segments(cfg)}
    seq = rd.segments()
    if len(set(seq)) != len(seq):
        raise InvalidSequence("a segment appears twice in the reduction sequence")
    try:
        return [idx[s] for s in reversed(seq)]
    except KeyError as exc:
        raise InvalidSequence(f"segment {exc.args[0]} is not transposable") from None


def sequence_renaming(cfg: LinkConfiguration, rd: ReductionSequence) -> list[int]:
    """perm[i] = position (0-based) of y_{i+1}'s segment in rd; s_q gets 0.

    This is the numbering in which the mutation sequence reads mu_1 o ... o mu_N.
    """
    idx = {s.segment: s.index - 1 for s in transposable_segments(cfg)}
    perm = [0] * len(idx)
    for pos, seg in enumerate(rd.segments()):
        perm[idx[seg]] = pos
    return perm


def _marker_counts(cfg: LinkConfiguration) -> list[int]:
    smin = minimal_state(cfg)
    out = []
    for s in transposable_segments(cfg):
        k = sum(smin[c] in (s.black, s.white) for c in (s.tail, s.head))
        out.append(k)
    return out


@dataclass(frozen=True)
class DistinguishedVariable:
    variable: ClusterVariable
    vertex: int
    f: MultiPoly
    g: tuple[int, ...]
    h: tuple[int, ...]
    d: tuple[int, ...]
    mutations: tuple[int, ...]


def distinguished_cluster_variable(cfg: LinkConfiguration, rd: ReductionSequence | None = None,
                                   check: bool = True) -> DistinguishedVariable:
    """Variable at s_q after the mutation sequence of ``rd``; asserts
    g_j = 1 - k(s_j), F = M and d_j = 1 unless ``check`` is False."""
    rd = rd or greedy_reduction_sequence(cfg)
    q = build_quiver(cfg)
    ks = reduction_to_mutation_sequence(cfg, rd)
    seed = mutate_sequence(initial_seed(q), ks)
    vq = ks[-1]
    var = ClusterVariable(seed.cluster[vq], q.n)
    f = fpolynomial(var)
    g = gvector(var)
    out = DistinguishedVariable(var, vq, f, g, hvector(var, q), denominator_vector(var), tuple(ks))
    if check:
        m = states_lattice_polynomial(cfg)
        if f != m:
            raise TheoremViolation(f"F-polynomial {f} differs from the lattice polynomial {m}")
        expect_g = tuple(1 - k for k in _marker_counts(cfg))
        if g != expect_g:
            raise TheoremViolation(f"g-vector {g} differs from 1 - k(s_j) = {expect_g}")
        if any(x != 1 for x in out.d):
            raise TheoremViolation(f"denominator vector {out.d} is not all ones")
    return out


# -- the bracket from F ------------------------------------------------------------

def _check_negative_alternating(cfg: LinkConfiguration, d: LinkDiagram | None) -> LinkDiagram:
    if d is None:
        return LinkDiagram.all_negative(cfg.universe)
    if d.universe != cfg.universe:
        raise PreconditionViolated("diagram and configuration have different universes")
    if any(s != -1 for s in d.signs):
        raise PreconditionViolated("specialization needs every crossing negative")
    if not d.is_alternating():
        raise PreconditionViolated("specialization needs an alternating diagram")
    return d


def bracket_specialization_values(cfg: LinkConfiguration, d: LinkDiagram | None = None
                                  ) -> dict[int, LaurentPoly]:
    """0-based vertex -> value read off the oriented segment and active crossings."""
    _check_negative_alternating(cfg, d)
    active = set(active_crossings(cfg))
    out = {}
    for s in transposable_segments(cfg):
        lt, lh = cfg.labels[s.tail], cfg.labels[s.head]
        if lt < lh:
            out[s.index - 1] = LaurentPoly({8: 1}) if lt == 1 else LaurentPoly({4: -1})
        else:
            out[s.index - 1] = LaurentPoly({-8: 1}) if s.head in active else LaurentPoly({-4: -1})
    return out


def census_prefactor(cfg: LinkConfiguration) -> LaurentPoly:
    """The minimal-state weight predicted by the region census."""
    try:
        c = region_census(cfg)
    except ConstructError as exc:
        raise PreconditionViolated(str(exc)) from None
    out = LaurentPoly({c.u3 + c.l1 - c.p_minus - 1 - c.u1: 1})
    out = out * LaurentPoly({3: -1}) ** (c.l2 + c.l3)
    out = out * LaurentPoly({-3: -1}) ** (c.p_minus + 1 + c.u2)
    return out


def bracket_via_fpoly(cfg: LinkConfiguration, d: LinkDiagram | None = None,
                      rd: ReductionSequence | None = None) -> LaurentPoly:
    """Census prefactor times the specialized F-polynomial of the distinguished variable."""
    if getattr(cfg, "provenance", None) is None:
        raise PreconditionViolated("needs a configuration with a construction record")
    d = _check_negative_alternating(cfg, d)
    values = bracket_specialization_values(cfg, d)
    dv = distinguished_cluster_variable(cfg, rd, check=False)
    return census_prefactor(cfg) * dv.f.specialize(values) * (LaurentPoly({2: -1, -2: -1}) ** d.free_loops)


def lemma_specall_check(cfg: LinkConfiguration, d: LinkDiagram | None = None) -> bool:
    from .engines import bracket_recursive
    d = d or LinkDiagram.all_negative(cfg.universe)
    lat = build_state_lattice(cfg)
    ratios = weight_ratios(cfg, d, lat)
    m = states_lattice_polynomial(lat)
    n = len(lat.segments)
    values = {j - 1: r for j, r in ratios.items()}
    for i in range(n):
        values.setdefault(i, LaurentPoly({0: 1}))
    lhs = state_weight(cfg, lat.nodes[0], d) * m.specialize(values)
    return lhs == bracket_recursive(d)


def quiver_after_reduction_check(cfg: LinkConfiguration, bigon: int) -> bool:
    """Mutate at the reduced transposable segments and delete them; compare."""
    red_cfg, red = bigon_reduce(cfg, bigon)
    q = build_quiver(cfg)
    idx = {seg: i for i, seg in enumerate(q.segments)}
    verts = [idx[s] for s in red.reduced_transposable]
    for v in verts:
        q = q.mutate(v)
    q = q.delete(verts)
    target = build_quiver(red_cfg)
    # align by segment ids, which survive the reduction
    pos = {seg: i for i, seg in enumerate(target.segments)}
    if sorted(pos) != sorted(q.segments):
        return False
    order = [pos[s] for s in q.segments]
    return all(q.b[i][j] == target.b[order[i]][order[j]]
               for i in range(q.n) for j in range(q.n))


# -- export -------------------------------------------------------------------------

def quiver_to_dot(q: Quiver) -> str:
    lines = ["digraph quiver {"]
    for i in range(q.n):
        lines.append(f'  v{i + 1} [label="y{i + 1}"];')
    for i, j, m in q.arrows():
        for _ in range(m):
            lines.append(f"  v{i + 1} -> v{j + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def variable_to_json(dv: DistinguishedVariable) -> dict:
    return {
        "vertex": dv.vertex + 1,
        "mutations": [k + 1 for k in dv.mutations],
        "F": str(dv.f),
        "F_terms": dv.f.to_json(),
        "g": list(dv.g),
        "h": list(dv.h),
        "d": list(dv.d),
    }
