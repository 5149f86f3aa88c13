"""Command-line front end. Every command prints one JSON report.

Exit codes: 0 success, 1 property violated, 2 input error, 3 unknown.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from pathlib import Path as FsPath

from kplab import bundled, degrees as dg
from kplab.algebra import gen_p, gen_s, gen_s_star
from kplab.boundary import (
    NotEventuallyPeriodic,
    NotLocallyConvex,
    boundary_paths,
    is_aperiodic,
    is_cofinal,
)
from kplab.bratteli import (
    HypothesisError,
    matrix_iso,
    orders,
    parse_bratteli,
    serialize_bratteli,
    truncate_depth,
)
from kplab.desourcify import build_truncated, interior_report
from kplab.expr import ExprError, parse_expr
from kplab.ideals import (
    NotSaturatedHereditary,
    contains,
    enumerate_sat_her,
    ideal_from_set,
    is_simple,
)
from kplab.kgraph import GraphError, GraphFormatError, build_graph, parse_graph, serialize_graph
from kplab.representation import oracle_diff
from kplab.rings import RingError, parse_ring
from kplab.sampling import random_element

OK, VIOLATED, INPUT_ERROR, UNKNOWN = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- helpers -------------------------------------------------------------------

def _read(path):
    p = FsPath(path)
    if not p.exists():
        alt = bundled(path)
        if alt.is_file():
            return alt.read_text(encoding="utf-8")
        raise InputError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def _graph(path):
    return build_graph(parse_graph(_read(path)))


def _degree(text, k):
    try:
        d = dg.parse(text, k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if any(x < 0 for x in d):
        raise InputError(f"degree {text} has a negative entry")
    return d


def _threads():
    raw = os.environ.get("KP_LAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"KP_LAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"KP_LAB_THREADS must be a positive integer, got {raw!r}")
    return n


def _fingerprint(text):
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _report(command, args, fingerprint, result, warnings=()):
    return {
        "schema": 1,
        "command": command,
        "args": args,
        "graph": fingerprint,
        "result": result,
        "warnings": list(warnings),
    }


# -- commands --------------------------------------------------------------------

def cmd_validate(a):
    try:
        g = _graph(a.graph)
    except GraphError as exc:
        return VIOLATED, {"valid": False, "error": str(exc)}, None, []
    ok, wit = g.is_locally_convex()
    res = {
        "valid": True,
        "k": g.k,
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "squares": len(g.squares),
        "locally_convex": ok,
        "canonical": serialize_graph(g),
    }
    return OK, res, g.fingerprint(), []


def _lc_witness(wit):
    v, i, j, lam, mu = wit
    return {"vertex": v, "colors": [i + 1, j + 1], "paths": [str(lam), str(mu)]}


def cmd_check(a):
    g = _graph(a.graph)
    wanted = [n for n in ("local_convex", "aperiodic", "cofinal") if getattr(a, n)]
    wanted = wanted or ["local_convex", "aperiodic", "cofinal"]
    res, warnings, status = {}, [], OK
    ok, wit = g.is_locally_convex()
    if "local_convex" in wanted:
        res["local_convex"] = {"holds": ok, "witness": _lc_witness(wit) if wit else None}
        if not ok:
            status = VIOLATED
    if not ok and ("aperiodic" in wanted or "cofinal" in wanted):
        warnings.append("graph is not locally convex; boundary-path predicates skipped")
        for n in ("aperiodic", "cofinal"):
            if n in wanted:
                res[n] = {"holds": None}
        return VIOLATED, res, g.fingerprint(), warnings
    unknown = False
    if "aperiodic" in wanted:
        bound = _degree(a.bound, g.k) if a.bound else None
        ap = is_aperiodic(g, bound)
        entry = {"holds": {"yes": True, "no": False}.get(ap.status), "status": ap.status,
                 "bound": dg.fmt(ap.bound), "reason": ap.reason or None}
        if ap.counterexample:
            v, al, be, x = ap.counterexample
            entry["counterexample"] = {"vertex": v, "alpha": str(al), "beta": str(be), "x": str(x)}
        else:
            entry["witnesses"] = {v: str(x) for v, x in ap.witnesses.items()}
        res["aperiodic"] = entry
        if ap.status == "no":
            status = VIOLATED
        elif ap.status == "unknown":
            unknown = True
            warnings.append(f"aperiodicity unknown: {ap.reason}")
    if "cofinal" in wanted:
        try:
            cof, wit = is_cofinal(g)
            res["cofinal"] = {"holds": cof, "witness": {"x": str(wit[0]), "vertex": wit[1]} if wit else None}
            if not cof:
                status = VIOLATED
        except NotEventuallyPeriodic as exc:
            res["cofinal"] = {"holds": None, "reason": str(exc)}
            unknown = True
            warnings.append(f"cofinality unknown: {exc}")
    if status == OK and unknown:
        status = UNKNOWN
    return status, res, g.fingerprint(), warnings


def cmd_paths(a):
    g = _graph(a.graph)
    if a.vertex not in g.vertices:
        raise InputError(f"unknown vertex {a.vertex}")
    if a.boundary:
        try:
            xs = boundary_paths(g, a.vertex)
        except NotEventuallyPeriodic as exc:
            return UNKNOWN, {"vertex": a.vertex, "boundary": None}, g.fingerprint(), [str(exc)]
        except NotLocallyConvex as exc:
            return VIOLATED, {"vertex": a.vertex, "boundary": None, "error": str(exc)}, g.fingerprint(), []
        return OK, {"vertex": a.vertex, "boundary": [x.to_json() | {"path": str(x)} for x in xs]}, \
            g.fingerprint(), []
    n = _degree(a.degree, g.k)
    ps = g.paths_le(a.vertex, n) if a.le else g.paths_of_degree(a.vertex, n)
    res = {"vertex": a.vertex, "degree": list(n), "le": a.le,
           "paths": [{"path": str(p), "source": p.source, "degree": list(p.degree)} for p in ps]}
    return OK, res, g.fingerprint(), []


def cmd_minext(a):
    g = _graph(a.graph)
    try:
        lam, mu = g.path(a.lam.replace(".", " ").split()), g.path(a.mu.replace(".", " ").split())
    except GraphError as exc:
        raise InputError(str(exc)) from None
    pairs = g.min_common_ext(lam, mu)
    return OK, {"lambda": str(lam), "mu": str(mu),
                "pairs": [[str(x), str(y)] for x, y in pairs]}, g.fingerprint(), []


def _ring(text):
    try:
        return parse_ring(text)
    except RingError as exc:
        raise InputError(str(exc)) from None


def cmd_eval(a):
    g = _graph(a.graph)
    ring = _ring(a.ring)
    e = parse_expr(a.expr, g, ring)
    return OK, {"ring": str(ring), "expr": a.expr, **e.to_json(), "zero": e.is_zero()}, g.fingerprint(), []


def cmd_hs_lattice(a):
    g = _graph(a.graph)
    lat = enumerate_sat_her(g)
    return OK, lat.to_json() | {"count": len(lat.sets)}, g.fingerprint(), []


def cmd_ideal_member(a):
    g = _graph(a.graph)
    ring = _ring(a.ring)
    H = [v for v in a.set.split(",") if v]
    try:
        J = ideal_from_set(g, ring, H)
    except (NotSaturatedHereditary, GraphError) as exc:
        raise InputError(str(exc)) from None
    e = parse_expr(a.expr, g, ring)
    member = contains(J, e)
    res = {"set": sorted(J.vertices, key=g.vertices.index), "expr": a.expr, "member": member,
           "element": e.to_json()}
    return (OK if member else VIOLATED), res, g.fingerprint(), []


def cmd_simple(a):
    g = _graph(a.graph)
    ring = _ring(a.ring)
    d = is_simple(g, ring)
    verdict = {"yes": "simple", "no": f"not simple: {d.reason}",
               "unknown": f"unknown: {d.reason}"}[d.status]
    res = {"ring": str(ring), "verdict": verdict, **d.to_json()}
    code = {"yes": OK, "no": VIOLATED, "unknown": UNKNOWN}[d.status]
    return code, res, g.fingerprint(), ([d.reason] if d.status == "unknown" else [])


def cmd_desourcify(a):
    g = _graph(a.graph)
    box = _degree(a.bound, g.k)
    tr = build_truncated(g, box)
    text = serialize_graph(tr.graph)
    if a.graph_out:
        FsPath(a.graph_out).write_text(text, encoding="utf-8")
    problems = interior_report(tr)
    res = {"box": list(box), "graph": text, "iota": tr.iota_map(), "vertices": tr.table(),
           "interior_problems": problems}
    return (VIOLATED if problems else OK), res, g.fingerprint(), []


def cmd_bratteli(a):
    text = _read(a.spec)
    spec = parse_bratteli(text)
    if a.depth is not None:
        spec = truncate_depth(spec, a.depth)
    g = spec.graph()
    fp = _fingerprint(serialize_bratteli(spec))
    if a.action == "build":
        return OK, {"graph": serialize_graph(g), "orders": orders(spec),
                    "depth": spec.depth}, fp, []
    ring = _ring(a.ring)
    try:
        iso = matrix_iso(spec, ring)
    except HypothesisError as exc:
        return VIOLATED, {"error": str(exc)}, fp, []
    base = iso.base
    gens = []
    for v in g.vertices:
        gens.append((f"p({v})", gen_p(g, base, v)))
    for e in g.edges:
        gens.append((f"s({e})", gen_s(g, base, e)))
        gens.append((f"star(s({e}))", gen_s_star(g, base, e)))
    images = {name: iso.apply(x).to_json() for name, x in gens}
    res = {"ring": str(iso.laurent), "dagger": iso.units.dagger, "index": list(iso.index),
           "images": images}
    return OK, res, fp, []


def cmd_oracle_diff(a):
    g = _graph(a.graph)
    ring = _ring(a.ring)
    bound = _degree(a.bound, g.k)
    rng = random.Random(a.seed)
    pairs = [(random_element(g, ring, rng, bound), random_element(g, ring, rng, bound))
             for _ in range(a.pairs)]
    try:
        problems = oracle_diff(g, ring, pairs, a.radius)
    except NotEventuallyPeriodic as exc:
        return UNKNOWN, {"error": str(exc)}, g.fingerprint(), [str(exc)]
    return (VIOLATED if problems else OK), {"pairs": a.pairs, "problems": problems}, g.fingerprint(), []


# -- parser ------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="kplab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_arg(sp):
        sp.add_argument("graph_pos", nargs="?", metavar="GRAPH")
        sp.add_argument("--graph", dest="graph_opt", metavar="GRAPH")

    s = sub.add_parser("validate", help="parse and check the k-graph axioms")
    graph_arg(s)
    s = sub.add_parser("check", help="local convexity, aperiodicity, cofinality")
    graph_arg(s)
    s.add_argument("--local-convex", dest="local_convex", action="store_true")
    s.add_argument("--aperiodic", action="store_true")
    s.add_argument("--cofinal", action="store_true")
    s.add_argument("--bound", help="degree bound reported with the aperiodicity result")
    s = sub.add_parser("paths", help="list paths or boundary paths from a vertex")
    graph_arg(s)
    s.add_argument("--vertex", required=True)
    s.add_argument("--degree", default="0")
    s.add_argument("--le", action="store_true", help="list the non-extendable paths below the degree")
    s.add_argument("--boundary", action="store_true")
    s = sub.add_parser("minext", help="minimal common extensions of two paths")
    graph_arg(s)
    s.add_argument("--lam", required=True)
    s.add_argument("--mu", required=True)
    s = sub.add_parser("eval", help="evaluate an algebra expression to normal form")
    graph_arg(s)
    s.add_argument("--ring", default="QQ")
    s.add_argument("expr", nargs="?")
    s = sub.add_parser("hs-lattice", help="saturated hereditary vertex sets")
    graph_arg(s)
    s = sub.add_parser("ideal-member", help="membership in the ideal of a vertex set")
    graph_arg(s)
    s.add_argument("--ring", default="QQ")
    s.add_argument("--set", required=True)
    s.add_argument("--expr", required=True)
    s = sub.add_parser("simple", help="basic simplicity and simplicity")
    graph_arg(s)
    s.add_argument("--ring", default="QQ")
    s = sub.add_parser("desourcify", help="excess-bounded window of the source-free graph")
    graph_arg(s)
    s.add_argument("--bound", required=True)
    s.add_argument("--graph-out", help="also write the truncated graph to this file")
    s = sub.add_parser("bratteli", help="rank-2 Bratteli diagrams")
    s.add_argument("action", choices=["build", "iso"])
    s.add_argument("spec")
    s.add_argument("--depth", type=int)
    s.add_argument("--ring", default="Laurent(QQ)")
    s = sub.add_parser("oracle-diff", help="compare the engine with the boundary-path representation")
    graph_arg(s)
    s.add_argument("--ring", default="ZZ")
    s.add_argument("--pairs", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=int, default=6)
    s.add_argument("--bound", default="2,2")
    return p


COMMANDS = {
    "validate": cmd_validate, "check": cmd_check, "paths": cmd_paths, "minext": cmd_minext,
    "eval": cmd_eval, "hs-lattice": cmd_hs_lattice, "ideal-member": cmd_ideal_member,
    "simple": cmd_simple, "desourcify": cmd_desourcify, "bratteli": cmd_bratteli,
    "oracle-diff": cmd_oracle_diff,
}


def run(argv):
    """Return ``(exit_code, report_dict)`` without printing."""
    parser = build_parser()
    try:
        a, extra = parser.parse_known_args(argv)
        # argparse will not fill GRAPH EXPR when an option sits between them
        for name in ("graph_pos", "expr"):
            if extra and getattr(a, name, "") is None and not extra[0].startswith("-"):
                setattr(a, name, extra.pop(0))
        if extra:
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        if a.command == "eval" and a.expr is None and a.graph_opt:
            a.expr, a.graph_pos = a.graph_pos, None
        if a.command == "eval" and a.expr is None:
            parser.error("eval: the following arguments are required: expr")
    except SystemExit as exc:
        return (INPUT_ERROR if exc.code else OK), None
    if hasattr(a, "graph_pos"):
        a.graph = a.graph_opt or a.graph_pos
        if not a.graph:
            return INPUT_ERROR, _report(a.command, {}, None, None, ["missing graph file"])
    args = {k: v for k, v in sorted(vars(a).items())
            if v is not None and v is not False and k not in ("command", "graph_pos", "graph_opt")}
    try:
        _threads()
        code, result, fp, warnings = COMMANDS[a.command](a)
    except (InputError, GraphFormatError, GraphError, ExprError, RingError, OSError,
            UnicodeDecodeError) as exc:
        return INPUT_ERROR, _report(a.command, args, None, None, [f"input error: {exc}"])
    return code, _report(a.command, args, fp, result, warnings)


def main(argv=None):
    code, report = run(sys.argv[1:] if argv is None else argv)
    if report is not None:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
