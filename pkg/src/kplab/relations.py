"""Exhaustive checks of the Kumjian-Pask relations up to a degree bound.

Two families are checked. The ``engine`` family is the universal one,
computed with the normal-form arithmetic. The ``boundary`` family acts by
matrices on boundary paths and shares no multiplication code with the
engine, so a broken square table shows up there.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from kplab import degrees as dg
from kplab.algebra import gen_p, gen_s, gen_s_star, sum_elems
from kplab.boundary import BoundaryError, NotEventuallyPeriodic
from kplab.representation import BoundaryRep

RELATIONS = ("KP1", "KP2", "KP3'", "KP4'", "KP4'-color")


@dataclass
class RelationReport:
    family: str
    checked: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    skipped: str = ""

    @property
    def ok(self):
        return not self.failures and not self.skipped

    def to_json(self):
        return {
            "family": self.family,
            "checked": dict(sorted(self.checked.items())),
            "failures": self.failures,
            "skipped": self.skipped or None,
        }


class _Engine:
    def __init__(self, graph, ring):
        self.g, self.ring = graph, ring

    def P(self, v):
        return gen_p(self.g, self.ring, v)

    def S(self, lam):
        return gen_s(self.g, self.ring, lam)

    def S_star(self, lam):
        return gen_s_star(self.g, self.ring, lam)

    def zero(self):
        return sum_elems(self.g, self.ring, [])

    def total(self, items):
        return sum_elems(self.g, self.ring, items)


class _Matrices:
    def __init__(self, graph, ring):
        self.g, self.ring = graph, ring
        self.rep = BoundaryRep(graph, ring, graded=False)

    def P(self, v):
        return self.rep.P(v)

    def S(self, lam):
        return self.rep.S(lam)

    def S_star(self, lam):
        return self.rep.S_star(lam)

    def zero(self):
        return self.rep._matrix({})

    def total(self, items):
        out = self.zero()
        for m in items:
            out = out + m
        return out


def _run(report, fam, graph, bound):
    g = graph
    paths = g.paths_up_to(bound)

    def check(rel, lhs, rhs, detail):
        report.checked[rel] += 1
        try:
            same = lhs() == rhs()
        except BoundaryError as exc:
            same = False
            detail = f"{detail} ({exc})"
        if not same:
            report.failures.append(f"{rel}: {detail}")

    for v in g.vertices:
        for w in g.vertices:
            check("KP1", lambda: fam.P(v) * fam.P(w),
                  lambda: fam.P(v) if v == w else fam.zero(), f"p_{v} p_{w}")

    for lam in paths:
        if lam.is_vertex:
            continue
        check("KP2", lambda: fam.P(lam.range) * fam.S(lam), lambda: fam.S(lam), f"p_r s_{lam}")
        check("KP2", lambda: fam.S(lam) * fam.P(lam.source), lambda: fam.S(lam), f"s_{lam} p_s")
        check("KP2", lambda: fam.P(lam.source) * fam.S_star(lam), lambda: fam.S_star(lam),
              f"p_s s_{lam}*")
        check("KP2", lambda: fam.S_star(lam) * fam.P(lam.range), lambda: fam.S_star(lam),
              f"s_{lam}* p_r")
        for mu in paths:
            if mu.is_vertex or mu.range != lam.source or not dg.le(dg.add(lam.degree, mu.degree), bound):
                continue
            lm = g.compose(lam, mu)
            check("KP2", lambda: fam.S(lam) * fam.S(mu), lambda: fam.S(lm), f"s_{lam} s_{mu}")
            check("KP2", lambda: fam.S_star(mu) * fam.S_star(lam), lambda: fam.S_star(lm),
                  f"s_{mu}* s_{lam}*")

    for n in dg.box(tuple(bound)):
        if dg.is_zero(n):
            continue
        for v in g.vertices:
            le = g.paths_le(v, n)
            for lam in le:
                for mu in le:
                    check("KP3'", lambda: fam.S_star(lam) * fam.S(mu),
                          lambda: fam.P(lam.source) if lam == mu else fam.zero(),
                          f"s_{lam}* s_{mu} at n={n}")
            check("KP4'", lambda: fam.P(v), lambda: fam.total(fam.S(x) * fam.S_star(x) for x in le),
                  f"p_{v} at n={n}")

    for v in g.vertices:
        for i in range(g.k):
            if not g.edges_at(v, i):
                continue
            le = g.paths_le(v, dg.unit(g.k, i))
            check("KP4'-color", lambda: fam.P(v),
                  lambda: fam.total(fam.S(x) * fam.S_star(x) for x in le),
                  f"p_{v} color {i + 1}")


def _bound(graph, bound):
    bound = tuple(bound) if bound is not None else dg.ones(graph.k)
    if len(bound) != graph.k:
        raise ValueError(f"bound {bound} has {len(bound)} coordinates, the graph has rank {graph.k}")
    return bound


def verify_family(graph, fam, bound=None, name="custom"):
    """Check the relations for any object with P, S, S_star, zero and total methods."""
    bound = _bound(graph, bound)
    report = RelationReport(name)
    _run(report, fam, graph, bound)
    return report


def verify_kp_relations(graph, ring, bound=None, family="engine"):
    """Check (KP1), (KP2), (KP3′), (KP4′) and its per-color form up to ``bound``."""
    bound = _bound(graph, bound)
    report = RelationReport(family)
    if family == "engine":
        fam = _Engine(graph, ring)
    elif family == "boundary":
        try:
            fam = _Matrices(graph, ring)
        except NotEventuallyPeriodic as exc:
            report.skipped = f"boundary paths not representable: {exc}"
            return report
    else:
        raise ValueError(f"unknown family {family!r}")
    _run(report, fam, graph, bound)
    return report
