"""Hereditary and saturated vertex sets, the basic graded ideals they generate,
and the simplicity predicates."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from kplab import degrees as dg
from kplab.algebra import AlgebraElem, gen_p, spanning
from kplab.boundary import NotEventuallyPeriodic, is_aperiodic, is_cofinal
from kplab.kgraph import GraphError
from kplab.rings import QQ, Echelon


class NotSaturatedHereditary(ValueError):
    pass


def _ordered(graph, vs):
    return tuple(sorted(vs, key=graph.vertices.index))


def _check_vertices(graph, S):
    S = frozenset(S)
    bad = S - set(graph.vertices)
    if bad:
        raise GraphError(f"unknown vertices {sorted(bad)}")
    return S


def is_hereditary(graph, H):
    return all(e.source in H for e in graph.edges.values() if e.range in H)


def is_saturated(graph, H):
    """No v outside H has s(vΛ^{≤e_i}) ⊆ H for some color i."""
    for v in graph.vertices:
        if v in H:
            continue
        for i in range(graph.k):
            if all(p.source in H for p in graph.paths_le(v, dg.unit(graph.k, i))):
                return False
    return True


def hereditary_closure(graph, S):
    H = set(_check_vertices(graph, S))
    todo = list(H)
    while todo:
        v = todo.pop()
        for i in range(graph.k):
            for e in graph.edges_at(v, i):
                if e.source not in H:
                    H.add(e.source)
                    todo.append(e.source)
    return frozenset(H)


def saturated_closure(graph, S):
    """Least saturated hereditary superset of S."""
    H = hereditary_closure(graph, S)
    k = graph.k
    while True:
        grow = {v for v in graph.vertices if v not in H
                and any(all(p.source in H for p in graph.paths_le(v, dg.unit(k, i)))
                        for i in range(k))}
        if not grow:
            return H
        H = hereditary_closure(graph, H | grow)


@dataclass
class Lattice:
    graph: object
    sets: list  # saturated hereditary sets, ordered by size then vertex order
    hasse: list  # covering pairs (i, j) with sets[i] ⊂ sets[j]

    def join(self, a, b):
        return saturated_closure(self.graph, a | b)

    def meet(self, a, b):
        m = a & b
        if m not in self.sets:
            raise AssertionError(f"intersection {sorted(m)} is not saturated hereditary")
        return m

    def to_json(self):
        g = self.graph
        return {
            "sets": [list(_ordered(g, s)) for s in self.sets],
            "hasse": [list(p) for p in self.hasse],
        }


def enumerate_sat_her(graph):
    """All saturated hereditary subsets with their Hasse diagram.

    Every such set is the join of the closures of its singletons, so the
    lattice is generated from those closures under joins.
    """
    g = graph
    found = {frozenset()}
    seeds = {saturated_closure(g, {v}) for v in g.vertices}
    frontier = set(seeds)
    while frontier:
        found |= frontier
        frontier = {saturated_closure(g, a | b) for a in found for b in seeds} - found
    idx = {v: i for i, v in enumerate(g.vertices)}
    sets = sorted(found, key=lambda s: (len(s), sorted(idx[v] for v in s)))
    hasse = []
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if a < b and not any(a < c < b for c in sets):
                hasse.append((i, j))
    lat = Lattice(g, sets, hasse)
    for a, b in itertools.combinations(sets, 2):
        lat.meet(a, b)
    return lat


# -- ideals --------------------------------------------------------------------

@dataclass(frozen=True)
class IdealHandle:
    """The basic graded ideal generated by {p_v : v ∈ H}."""
    graph: object
    ring: object
    vertices: frozenset

    def contains(self, a):
        return contains(self, a)


def ideal_from_set(graph, ring, H):
    H = _check_vertices(graph, H)
    if not (is_hereditary(graph, H) and is_saturated(graph, H)):
        raise NotSaturatedHereditary(f"{sorted(H)} is not saturated and hereditary")
    return IdealHandle(graph, ring, H)


def contains(J, a: AlgebraElem):
    """Every normal-form term of a has its common source in the generating set."""
    if a.graph is not J.graph or a.ring != J.ring:
        raise ValueError("element and ideal live over different graphs or rings")
    return all(alpha.source in J.vertices for (alpha, _) in a.terms)


def spanning_elements(graph, ring, bound, sources=None):
    """s_α s_{β*} for all α, β with d(α), d(β) <= bound and a common source."""
    by_src = {}
    for p in graph.paths_up_to(bound):
        if sources is None or p.source in sources:
            by_src.setdefault(p.source, []).append(p)
    return [spanning(graph, ring, a, b)
            for v in graph.vertices for a in by_src.get(v, ()) for b in by_src.get(v, ())]


def _coords(elems, level):
    rows = []
    for e in elems:
        rows.append(dict(e.raise_level(level).terms))
    return rows


@dataclass
class ClosureReport:
    vertices: tuple
    generated: int  # rank of the brute-force closure
    described: int  # rank of the spanning description
    missing: list = field(default_factory=list)  # described elements outside the closure
    stray: list = field(default_factory=list)  # closure elements failing contains()
    outside: list = field(default_factory=list)  # p_w, w ∉ H, wrongly inside the closure

    @property
    def ok(self):
        return not (self.missing or self.stray or self.outside)


def brute_force_closure(graph, H, bound, ring=QQ):
    """Compare the bounded two-sided ideal generated by {p_v : v ∈ H} with its span description.

    Products x·p_v·y over spanning x, y of degree <= bound are row-reduced at
    a common level. Every described element must lie in that span, every
    product must pass ``contains``, and p_w for w outside H must not.
    """
    H = _check_vertices(graph, H)
    J = IdealHandle(graph, ring, H)
    span = spanning_elements(graph, ring, bound)
    gens = [gen_p(graph, ring, v) for v in _ordered(graph, H)]
    products = [x * p * y for p in gens for x in span for y in span]
    products = [z for z in products if not z.is_zero()]
    described = spanning_elements(graph, ring, bound, sources=H)
    outsiders = [gen_p(graph, ring, w) for w in graph.vertices if w not in H]
    every = products + described + outsiders
    level = dg.join(dg.zero(graph.k), *(e.level for e in every))

    ech = Echelon(ring)
    for row in _coords(products, level):
        ech.add(row)
    rep = ClosureReport(_ordered(graph, H), len(ech), 0)
    desc = Echelon(ring)
    for e, row in zip(described, _coords(described, level)):
        desc.add(row)
        if row not in ech:
            rep.missing.append(repr(e))
    rep.described = len(desc)
    rep.stray = [repr(z) for z in products if not contains(J, z)]
    for w, row in zip((w for w in graph.vertices if w not in H), _coords(outsiders, level)):
        if row in ech:
            rep.outside.append(w)
    return rep


# -- simplicity ------------------------------------------------------------

@dataclass
class Decision:
    status: str  # "yes", "no" or "unknown"
    reason: str = ""
    parts: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == "yes"

    def to_json(self):
        return {"status": self.status, "reason": self.reason, "parts": self.parts}


def _cofinality(graph):
    try:
        ok, wit = is_cofinal(graph)
    except NotEventuallyPeriodic as exc:
        return "unknown", str(exc)
    if ok:
        return "yes", ""
    x, v = wit
    return "no", f"{v} reaches no vertex of {x}"


def is_basically_simple(graph):
    cof, why = _cofinality(graph)
    ap = is_aperiodic(graph)
    parts = {"cofinal": cof, "aperiodic": ap.status}
    if cof == "no":
        return Decision("no", f"cofinality fails: {why}", parts)
    if ap.status == "no":
        return Decision("no", ap.reason, parts)
    if cof == "unknown" or ap.status == "unknown":
        return Decision("unknown", why or ap.reason, parts)
    return Decision("yes", "cofinal and aperiodic", parts)


def is_simple(graph, ring):
    basic = is_basically_simple(graph)
    parts = {**basic.parts, "field": ring.is_field}
    if basic.status == "no":
        return Decision("no", basic.reason, parts)
    if not ring.is_field:
        return Decision("no", f"{ring} is not a field", parts)
    return Decision(basic.status, basic.reason, parts)


# -- lattice correspondence --------------------------------------------------

@dataclass
class CorrespondenceReport:
    lattice: Lattice
    failures: list = field(default_factory=list)
    closures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def to_json(self):
        g = self.lattice.graph
        return {
            **self.lattice.to_json(),
            "ideals": len(self.lattice.sets),
            "closure_ranks": [[list(c.vertices), c.generated, c.described] for c in self.closures],
            "failures": self.failures,
            "ok": self.ok,
            "vertices": list(g.vertices),
        }


def lattice_correspondence_check(graph, ring, bound=None):
    """Check that H ↦ J_H is an order embedding on the saturated hereditary sets."""
    bound = tuple(bound) if bound is not None else dg.ones(graph.k)
    lat = enumerate_sat_her(graph)
    rep = CorrespondenceReport(lat)
    ideals = [ideal_from_set(graph, ring, H) for H in lat.sets]
    for J1, J2 in itertools.permutations(ideals, 2):
        inside = all(contains(J2, gen_p(graph, ring, v)) for v in J1.vertices)
        if inside != (J1.vertices <= J2.vertices):
            rep.failures.append(f"containment of J{sorted(J1.vertices)} in J{sorted(J2.vertices)}"
                                f" is {inside}, sets say {J1.vertices <= J2.vertices}")
    field_ring = ring if ring.is_field else QQ
    for H in lat.sets:
        c = brute_force_closure(graph, H, bound, field_ring)
        rep.closures.append(c)
        if not c.ok:
            rep.failures.append(f"brute-force closure of {sorted(H)} disagrees: "
                                f"missing={c.missing[:3]} stray={c.stray[:3]} outside={c.outside}")
    return rep


__all__ = [
    "NotSaturatedHereditary", "is_hereditary", "is_saturated", "hereditary_closure",
    "saturated_closure", "Lattice", "enumerate_sat_her", "IdealHandle", "ideal_from_set",
    "contains", "spanning_elements", "brute_force_closure", "ClosureReport", "Decision",
    "is_basically_simple", "is_simple", "lattice_correspondence_check",
]
