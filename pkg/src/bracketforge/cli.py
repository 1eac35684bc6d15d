"""Command-line front end: ``bracketforge <verb> (--family F | --input FILE)``.

Exit status is 0 on success, 1 when a verification check fails and 2 on
bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import construct, engines
from .algebra import LaurentPoly
from .cluster import (
    ClusterError,
    LaurentPhenomenonViolated,
    TheoremViolation,
    bracket_via_fpoly,
    build_quiver,
    distinguished_cluster_variable,
    lemma_specall_check,
    quiver_after_reduction_check,
    quiver_to_dot,
    reduction_sequences,
    variable_to_json,
)
from .linkcore import (
    LinkConfiguration,
    LinkDiagram,
    LinkError,
    diagram_from_json,
    resolve_convention,
)
from .states import (
    build_state_lattice,
    check_ei_property,
    lattice_to_dot,
    state_weight,
    states_lattice_polynomial,
    states_to_json,
)

ENGINE_FLAGS = {
    "recursive": "recursive",
    "tree": "spanning_tree",
    "double": "double_tree",
    "matching": "perfect_matching",
    "fpoly": "fpoly",
}

MONTESINOS_SAMPLE = (
    "montesinos:1;1",
    "montesinos:2;1/1",
    "montesinos:1;2,1",
    "montesinos:2;1,1/1",
    "montesinos:1;1,1,1",
    "montesinos:2;2,1/1,1",
)


class InputError(Exception):
    pass


# -- input ------------------------------------------------------------------------

def load_input(args) -> tuple[LinkDiagram, LinkConfiguration | None]:
    conv = resolve_convention(args.convention)
    if args.family:
        cfg = construct.parse_family(args.family)
        return LinkDiagram.all_negative(cfg.universe, conv), cfg
    try:
        with open(args.input) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.input} is not valid JSON: {exc}") from None
    if isinstance(data, dict) and "crossings" in data:
        return diagram_from_json(data, conv)
    cfg = construct.asi_build(construct.ASISpec.from_json(data))
    return LinkDiagram.all_negative(cfg.universe, conv), cfg


def _need_cfg(cfg: LinkConfiguration | None) -> LinkConfiguration:
    if cfg is None:
        raise InputError("this verb needs a distinguished segment (family or ASI spec input)")
    return cfg


# -- verbs ------------------------------------------------------------------------

def _bracket_with(engine: str, d: LinkDiagram, cfg: LinkConfiguration | None) -> LaurentPoly:
    if engine == "recursive":
        return engines.bracket_recursive(d)
    order = cfg.labels if cfg is not None else None
    if engine == "spanning_tree":
        return engines.bracket_spanning_tree(d, order)
    if engine == "double_tree":
        return engines.bracket_double_tree(d, order)
    if engine == "perfect_matching":
        return engines.bracket_perfect_matching(_need_cfg(cfg), d)
    return bracket_via_fpoly(_need_cfg(cfg), d)


def cmd_bracket(args, d, cfg, out) -> int:
    if args.engine == "all":
        rep = engines.verify_all(d, cfg)
        if not rep.ok:
            out.write(rep.summary() + "\n")
            return 1
        val = rep.bracket
    else:
        val = _bracket_with(ENGINE_FLAGS[args.engine], d, cfg)
    if args.out == "json":
        out.write(json.dumps({"bracket": str(val), "terms": val.to_json()}) + "\n")
    else:
        out.write(f"{val}\n")
    return 0


def cmd_jones(args, d, cfg, out) -> int:
    engine = "recursive" if args.engine == "all" else ENGINE_FLAGS[args.engine]
    v = engines.jones_from_bracket(d, _bracket_with(engine, d, cfg))
    if args.out == "json":
        out.write(json.dumps({"jones": str(v), "terms": v.to_json(), "writhe": d.writhe()}) + "\n")
    else:
        out.write(f"{v}\n")
    return 0


def cmd_states(args, d, cfg, out) -> int:
    lat = build_state_lattice(_need_cfg(cfg))
    if args.out == "dot":
        out.write(lattice_to_dot(lat))
    elif args.out == "json":
        out.write(json.dumps(states_to_json(lat), sort_keys=True) + "\n")
    else:
        m = states_lattice_polynomial(lat)
        out.write(f"{len(lat.nodes)} states, {len(lat.segments)} transposable segments\n")
        for i, node in enumerate(lat.nodes):
            mono = lat.monomials[i]
            text = "*".join(f"y{j + 1}" if e == 1 else f"y{j + 1}^{e}"
                            for j, e in enumerate(mono) if e) or "1"
            out.write(f"rank {lat.rank[i]}  {text:<20} weight {state_weight(cfg, node, d)}\n")
        out.write(f"M = {m}\n")
    return 0


def cmd_fpoly(args, d, cfg, out) -> int:
    dv = distinguished_cluster_variable(_need_cfg(cfg))
    if args.out == "json":
        out.write(json.dumps(variable_to_json(dv), sort_keys=True) + "\n")
    elif args.out == "dot":
        out.write(quiver_to_dot(build_quiver(cfg)))
    else:
        out.write(f"{dv.f}\n")
    return 0


def cmd_quiver(args, d, cfg, out) -> int:
    q = build_quiver(_need_cfg(cfg))
    if args.out == "dot":
        out.write(quiver_to_dot(q))
    elif args.out == "json":
        out.write(json.dumps({"segments": list(q.segments), "b": [list(r) for r in q.b]}) + "\n")
    else:
        for i, j, m in q.arrows():
            out.write(f"y{i + 1} -> y{j + 1}" + (f" x{m}" if m > 1 else "") + "\n")
    return 0


def cmd_verify(args, d, cfg, out) -> int:
    names = engines.ENGINES if args.engine == "all" else ("recursive", ENGINE_FLAGS[args.engine])
    rep = engines.verify_all(d, cfg, tuple(dict.fromkeys(names)))
    if args.out == "json":
        out.write(json.dumps({
            "ok": rep.ok,
            "results": {r.engine: str(r.bracket) for r in rep.results},
            "skipped": rep.skipped,
        }, sort_keys=True) + "\n")
    else:
        out.write(rep.summary() + "\n")
    return 0 if rep.ok else 1


# -- corpus ----------------------------------------------------------------------

def _compositions(total: int):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def corpus_instances(limit: int = 10, montesinos: Sequence[str] = MONTESINOS_SAMPLE) -> list[str]:
    """Family strings in canonical order: 2-bridge, pretzel, then Montesinos."""
    out = []
    for t in range(2, limit + 1):
        out += ["twobridge:" + ",".join(map(str, c)) for c in _compositions(t)]
    for t in range(2, limit + 1):
        out += ["pretzel:" + ",".join(map(str, c)) for c in _compositions(t) if len(c) >= 2]
    return out + list(montesinos)


def sign_alternates(p: LaurentPoly) -> bool:
    """Coefficients at e and e + 4 have opposite signs when both are nonzero."""
    t = p.terms
    return all(t[e] * t[e + 4] < 0 for e in t if e + 4 in t)


@dataclass
class InstanceResult:
    family: str
    crossings: int = 0
    checks: dict[str, bool] = field(default_factory=dict)
    note: str = ""
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())


CHECKS = ("engines", "ei", "identities", "specall", "quiver", "census", "active", "alternation")


def check_instance(family: str, n_sequences: int = 2) -> InstanceResult:
    t0 = time.perf_counter()
    res = InstanceResult(family)
    try:
        cfg = construct.parse_family(family)
    except LinkError as exc:
        res.note = f"{type(exc).__name__}: {exc}"
        return res
    res.crossings = cfg.n
    d = LinkDiagram.all_negative(cfg.universe)
    rep = engines.verify_all(d, cfg)
    res.checks["engines"] = rep.ok and not rep.skipped and len(rep.results) == len(engines.ENGINES)
    if not res.checks["engines"]:
        res.note = rep.summary().splitlines()[-1]
    res.checks["ei"] = check_ei_property(cfg).ok
    try:
        for rd in reduction_sequences(cfg, limit=n_sequences):
            distinguished_cluster_variable(cfg, rd)
        res.checks["identities"] = True
    except ClusterError as exc:
        res.checks["identities"] = False
        res.note = str(exc)
    res.checks["specall"] = lemma_specall_check(cfg, d)
    res.checks["quiver"] = all(quiver_after_reduction_check(cfg, b)
                               for b in construct.permitted_reductions(cfg))
    res.checks["census"] = not construct.region_class_violations(cfg)
    res.checks["active"] = construct.active_crossings(cfg) == construct.expected_active_crossings(cfg)
    res.checks["alternation"] = sign_alternates(rep.bracket)
    res.seconds = time.perf_counter() - t0
    return res


def corpus_run(limit: int = 10, montesinos: Sequence[str] = MONTESINOS_SAMPLE,
               jobs: int = 1) -> list[InstanceResult]:
    """Run every corpus check; results come back in canonical instance order."""
    fams = corpus_instances(limit, montesinos)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(check_instance, fams, chunksize=8))
    return [check_instance(f) for f in fams]


def format_corpus(results: Sequence[InstanceResult], timings: bool = False) -> str:
    head = f"{'instance':<24}{'n':>3}  " + " ".join(f"{c:<11}" for c in CHECKS)
    lines = [head]
    for r in results:
        cells = " ".join(f"{('pass' if r.checks.get(c) else 'FAIL'):<11}" for c in CHECKS)
        line = f"{r.family:<24}{r.crossings:>3}  {cells}"
        if timings:
            line += f" {r.seconds:.3f}s"
        if r.note and not r.ok:
            line += f"  {r.note}"
        lines.append(line.rstrip())
    npass = sum(r.ok for r in results)
    lines.append(f"{npass}/{len(results)} instances pass every check")
    return "\n".join(lines)


def cmd_corpus(args, out) -> int:
    results = corpus_run(args.limit, jobs=args.jobs)
    if args.out == "json":
        out.write(json.dumps([{"family": r.family, "crossings": r.crossings,
                               "checks": r.checks, "note": r.note} for r in results],
                             sort_keys=True) + "\n")
    else:
        out.write(format_corpus(results) + "\n")
    return 0 if all(r.ok for r in results) else 1


# -- entry point ------------------------------------------------------------------

VERBS = {
    "bracket": cmd_bracket,
    "jones": cmd_jones,
    "states": cmd_states,
    "fpoly": cmd_fpoly,
    "quiver": cmd_quiver,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bracketforge",
                                description="Kauffman brackets through four engines and a cluster specialization.")
    p.add_argument("verb", choices=[*VERBS, "corpus"])
    src = p.add_mutually_exclusive_group()
    src.add_argument("--family", help="twobridge:a1,..  pretzel:b1,..  montesinos:k;c11,c12/..  "
                                      "asi:<tokens>  or hopf/trefoil/figure8/whitehead")
    src.add_argument("--input", help="JSON link spec or ASI spec")
    p.add_argument("--engine", default="all", choices=[*ENGINE_FLAGS, "all"])
    p.add_argument("--out", default="text", choices=("text", "json", "dot"))
    p.add_argument("--convention", choices=("standard", "mirror"),
                   help="crossing sign reading (default: $BRACKETFORGE_CONVENTION or standard)")
    p.add_argument("--limit", type=int, default=10, help="corpus crossing-sum limit")
    p.add_argument("--jobs", type=int, default=1, help="corpus worker processes")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        if args.verb == "corpus":
            return cmd_corpus(args, out)
        if not args.family and not args.input:
            raise InputError("give exactly one of --family or --input")
        d, cfg = load_input(args)
        return VERBS[args.verb](args, d, cfg, out)
    except (TheoremViolation, LaurentPhenomenonViolated) as exc:
        sys.stderr.write(f"bracketforge: verification failed: {exc}\n")
        return 1
    except (InputError, LinkError) as exc:
        sys.stderr.write(f"bracketforge: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
