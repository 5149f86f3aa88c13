"""Removing sources: a source-free k-graph containing a locally convex one.

A vertex of the new graph is a pair ``(w, c)``: a vertex w of the old graph
and an excess degree c that has been "spent" past a source. A path is a triple
``(λ, c, δ)``: an old path λ, the excess c at its range and its total degree
δ >= d(λ). Both are complete invariants of the representative classes
``[x; m]`` and ``[x; (m, n)]`` built from boundary paths x, so equality is
plain tuple equality. The module also builds finite excess-bounded windows
of the new graph as ordinary ``KGraph`` objects, so the algebra engine can
run on them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from kplab import degrees as dg
from kplab.algebra import AlgebraElem, spanning
from kplab.boundary import space
from kplab.ideals import is_hereditary, is_saturated
from kplab.kgraph import Edge, GraphError, KGraph, Path


class MarginError(ValueError):
    """A check would read past the edge of the truncation box."""


class TransportError(ValueError):
    pass


@dataclass(frozen=True)
class DVertex:
    base: str
    excess: tuple

    def __str__(self):
        return self.base if dg.is_zero(self.excess) else f"{self.base}[{','.join(map(str, self.excess))}]"


@dataclass(frozen=True)
class TriplePath:
    seg: Path
    excess: tuple
    degree: tuple

    @property
    def range(self):
        return DVertex(self.seg.range, self.excess)

    @property
    def source(self):
        return DVertex(self.seg.source, self.end_excess)

    @property
    def end_excess(self):
        return dg.sub(dg.add(self.excess, self.degree), self.seg.degree)

    def __str__(self):
        return f"({self.seg}, {list(self.excess)}, {list(self.degree)})"


def realizable(graph, w, c):
    """Some boundary path from w has degree 0 on supp(c).

    In a locally convex graph every boundary path from w has degree 0 exactly
    in the colors with no edges at w, so this is supp(c) ⊆ dead(w).
    """
    return dg.support(c) <= graph.dead_colors(w)


def is_valid(graph, t: TriplePath):
    if not dg.le(t.seg.degree, t.degree):
        return False
    if any(t.seg.degree[i] for i in dg.support(t.excess)):
        return False
    return realizable(graph, t.seg.range, t.excess) and realizable(graph, t.seg.source, t.end_excess)


def _check(graph, t):
    if not is_valid(graph, t):
        raise GraphError(f"invalid triple {t}")
    return t


def iota(lam: Path) -> TriplePath:
    return TriplePath(lam, dg.zero(len(lam.degree)), lam.degree)


def pi(t: TriplePath) -> TriplePath:
    return iota(t.seg)


def dvertex_path(graph, v: DVertex) -> TriplePath:
    return _check(graph, TriplePath(graph.vertex_path(v.base), tuple(v.excess), dg.zero(graph.k)))


def d_compose(graph, t1, t2):
    if t1.source != t2.range:
        raise GraphError(f"cannot compose {t1} and {t2}: {t1.source} != {t2.range}")
    return TriplePath(graph.compose(t1.seg, t2.seg), t1.excess, dg.add(t1.degree, t2.degree))


def d_factor(graph, t, m):
    m = tuple(m)
    if not dg.le(m, t.degree):
        raise GraphError(f"cannot factor {t} at {m}")
    cut = dg.meet(m, t.seg.degree)
    head, tail = graph.factor(t.seg, cut)
    first = TriplePath(head, t.excess, m)
    second = TriplePath(tail, dg.sub(dg.add(t.excess, m), cut), dg.sub(t.degree, m))
    return first, second


def d_paths(graph, v: DVertex, n):
    """vΛ̃^n: triples (λ, c, n) starting at v."""
    n = tuple(n)
    if not realizable(graph, v.base, v.excess):
        raise GraphError(f"vertex {v} is not realizable")
    cap = tuple(0 if v.excess[i] else n[i] for i in range(graph.k))
    out = []
    for m in dg.box(cap):
        for lam in graph.paths_of_degree(v.base, m):
            t = TriplePath(lam, tuple(v.excess), n)
            if is_valid(graph, t):
                out.append(t)
    return out


# -- raw representatives ------------------------------------------------------

def raw_vertex(sp, x, m):
    """The invariant (w, c) of [x; m]."""
    cut = dg.meet(m, x.degree)
    return DVertex(sp.vertex_at(x, cut), dg.sub(m, cut))


def raw_triple(sp, x, m, n):
    """The invariant triple of [x; (m, n)]."""
    a, b = dg.meet(m, x.degree), dg.meet(n, x.degree)
    return TriplePath(sp.segment(x, a, b), dg.sub(m, a), dg.sub(n, m))


def raw_compose(sp, r1, r2):
    """[x(0, n∧d(x)) σ^{p∧d(y)}(y); (m, n + q − p)] with the degree additive."""
    (x, m, n), (y, p, q) = r1, r2
    head = sp.initial(x, dg.meet(n, x.degree))
    z = sp.compose_finite(head, sp.shift(y, dg.meet(p, y.degree)))
    return z, m, dg.sub(dg.add(n, q), p)


def raw_factor(r, m2):
    x, m, n = r
    mid = dg.add(m, m2)
    return (x, m, mid), (x, mid, n)


def raw_oracle_check(graph, box, limit=4000, samples=None, seed=0):
    """Compare the triple encoding with raw representatives [x; (m, n)], n <= box.

    Compositions are checked for the first ``limit`` composable pairs, or for
    ``samples`` random composable pairs when that is given.

    Returns a list of problem strings (empty when everything agrees).
    """
    sp = space(graph)
    box = tuple(box)
    problems = []
    reps = []
    for x in sp.all():
        for n in dg.box(box):
            for m in dg.box(n):
                reps.append((x, m, n))
    triples = {}
    for r in reps:
        t = raw_triple(sp, *r)
        triples[r] = t
        if not is_valid(graph, t):
            problems.append(f"raw {r[0]};({r[1]},{r[2]}) gives invalid triple {t}")
        if t.range != raw_vertex(sp, r[0], r[1]) or t.source != raw_vertex(sp, r[0], r[2]):
            problems.append(f"endpoints of {t} disagree with the raw vertices")
        # ι(Λ) is exactly the classes [x; (0, n)] with n <= d(x)
        if dg.is_zero(r[1]) and (t == iota(t.seg)) != dg.le(r[2], r[0].degree):
            problems.append(f"image-of-iota test fails for {r[0]};(0,{r[2]})")
        for m2 in dg.box(dg.sub(r[2], r[1])):
            f1, f2 = raw_factor(r, m2)
            if (triples.get(f1) or raw_triple(sp, *f1), raw_triple(sp, *f2)) != d_factor(graph, t, m2):
                problems.append(f"factor of {t} at {m2} disagrees")
    seen_vertices = {raw_vertex(sp, x, m) for (x, m, _) in reps}
    want = {DVertex(w, c) for w in graph.vertices for c in dg.box(box) if realizable(graph, w, c)}
    if seen_vertices != want:
        problems.append(f"realizable vertices differ: raw-only {sorted(map(str, seen_vertices - want))}, "
                        f"predicate-only {sorted(map(str, want - seen_vertices))}")
    by_range = {}
    for r in reps:
        by_range.setdefault(triples[r].range, []).append(r)
    composable = lambda r1: by_range.get(triples[r1].source, ())
    if samples is None:
        pairs = itertools.islice(((r1, r2) for r1 in reps for r2 in composable(r1)), limit)
    else:
        rng = random.Random(seed)
        starts = [r for r in reps if composable(r)]
        pairs = []
        for _ in range(samples):
            r1 = rng.choice(starts)
            pairs.append((r1, rng.choice(composable(r1))))
    for r1, r2 in pairs:
        try:
            got = raw_triple(sp, *raw_compose(sp, r1, r2))
        except GraphError as exc:
            problems.append(f"compose of {triples[r1]} and {triples[r2]} fails on raw data: {exc}")
            continue
        if got != d_compose(graph, triples[r1], triples[r2]):
            problems.append(f"compose of {triples[r1]} and {triples[r2]} disagrees")
    return problems


# -- truncation ------------------------------------------------------------------

@dataclass
class Truncation:
    base: KGraph
    box: tuple
    graph: KGraph
    vertex_of: dict  # truncated vertex id -> DVertex
    vertex_id: dict
    edge_of: dict  # truncated edge id -> TriplePath
    edge_id: dict = field(default_factory=dict)

    def iota_vertex(self, w):
        return self.vertex_id[DVertex(w, dg.zero(self.base.k))]

    def iota_path(self, lam):
        return self.to_path(iota(lam))

    def to_triple(self, p: Path) -> TriplePath:
        t = dvertex_path(self.base, self.vertex_of[p.range])
        for e in p.edges:
            t = d_compose(self.base, t, self.edge_of[e])
        return t

    def to_path(self, t: TriplePath) -> Path:
        g = self.base
        ids = []
        while not dg.is_zero(t.degree):
            i = next(i for i in range(g.k) if t.degree[i])
            e, t = d_factor(g, t, dg.unit(g.k, i))
            if e not in self.edge_id:
                raise MarginError(f"{e} leaves the box {self.box}")
            ids.append(self.edge_id[e])
        if not ids and t.range not in self.vertex_id:
            raise MarginError(f"{t.range} lies outside the box {self.box}")
        return self.graph.path(ids) if ids else self.graph.vertex_path(self.vertex_id[t.range])

    def is_interior(self, v, margin=None):
        """Excess plus margin stays strictly inside the box."""
        c = self.vertex_of[v].excess
        margin = margin or dg.zero(self.base.k)
        return all(a + m < b for a, m, b in zip(c, margin, self.box))

    def table(self):
        return {v: {"base": d.base, "excess": list(d.excess)} for v, d in self.vertex_of.items()}

    def iota_map(self):
        return {**{w: self.iota_vertex(w) for w in self.base.vertices},
                **{e: self.edge_id[iota(self.base.path(e))] for e in self.base.edges}}


def _vertex_name(d):
    return str(d)


def _edge_name(g, t):
    i = next(i for i in range(g.k) if t.degree[i])
    suffix = "" if dg.is_zero(t.excess) else f"[{','.join(map(str, t.excess))}]"
    if t.seg.is_vertex:
        return f"{t.seg.range}+{i + 1}{suffix}"
    return f"{t.seg.edges[0]}{suffix}"


def build_truncated(graph, box):
    """The part of the source-free graph with every excess <= box, as a KGraph."""
    g, box = graph, tuple(box)
    verts = [DVertex(w, c) for c in dg.box(box) for w in g.vertices if realizable(g, w, c)]
    vid = {d: _vertex_name(d) for d in verts}
    if len(set(vid.values())) != len(vid) or (set(vid.values()) - set(g.vertices)) & set(g.edges):
        raise GraphError("vertex naming collision in the truncation")
    inside = set(verts)
    edges, eid = {}, {}
    for d in verts:
        for i in range(g.k):
            for t in d_paths(g, d, dg.unit(g.k, i)):
                if t.source in inside:
                    name = _edge_name(g, t)
                    if name in edges or name in vid.values():
                        raise GraphError(f"edge naming collision at {name}")
                    edges[name], eid[t] = t, name
    squares = []
    for a, ta in edges.items():
        ia = next(i for i in range(g.k) if ta.degree[i])
        for j in range(ia + 1, g.k):
            for tb in d_paths(g, ta.source, dg.unit(g.k, j)):
                if tb not in eid:
                    continue
                t = d_compose(g, ta, tb)
                b2, a2 = d_factor(g, t, dg.unit(g.k, j))
                squares.append((a, eid[tb], eid[b2], eid[a2]))
    kg = KGraph(g.k, [vid[d] for d in verts],
                [Edge(n, next(i for i in range(g.k) if t.degree[i]), vid[t.range], vid[t.source])
                 for n, t in edges.items()],
                squares)
    return Truncation(g, box, kg, {v: d for d, v in vid.items()}, vid, edges, eid)


def interior_report(tr: Truncation):
    """No sources inside, d_paths counts match, and the singleton property at ι-vertices."""
    g, kg = tr.base, tr.graph
    problems = []
    for v, d in tr.vertex_of.items():
        if not tr.is_interior(v):
            continue
        for i in range(g.k):
            if not kg.edges_at(v, i):
                problems.append(f"interior vertex {v} has no edge of color {i + 1}")
        for n in dg.box(dg.sub(tr.box, d.excess)):
            ds = d_paths(g, d, n)
            if len(ds) != len(kg.paths_of_degree(v, n)):
                problems.append(f"path count at {v}, degree {n} disagrees")
            if dg.is_zero(d.excess) and any(t.seg.is_vertex for t in ds) and len(ds) != 1:
                problems.append(f"{v} at degree {n} has a vertex-segment path but {len(ds)} paths")
    return problems


def min_ext_check(graph, bound, tr=None):
    """Minimal common extensions of ι-paths agree with the ι-image of those in the old graph."""
    bound = tuple(bound)
    tr = tr or build_truncated(graph, dg.add(bound, dg.ones(graph.k)))
    if not dg.le(bound, tr.box):
        raise MarginError(f"bound {bound} exceeds the box {tr.box}")
    problems, pairs = [], 0
    paths = graph.paths_up_to(bound)
    for lam, mu in itertools.combinations_with_replacement(paths, 2):
        if lam.range != mu.range:
            continue
        pairs += 1
        want = {(tr.iota_path(a), tr.iota_path(b)) for a, b in graph.min_common_ext(lam, mu)}
        got = set(tr.graph.min_common_ext(tr.iota_path(lam), tr.iota_path(mu)))
        if want != got:
            problems.append(f"minimal extensions of ({lam}, {mu}) disagree")
    return pairs, problems


# -- algebras ---------------------------------------------------------------------

def fits(tr, elem):
    """The element's level keeps every normal-form source strictly inside the box."""
    return dg.le(dg.add(elem.level, dg.ones(tr.base.k)), tr.box)


def embed_algebra(tr: Truncation, a: AlgebraElem) -> AlgebraElem:
    """p_v ↦ q_{ι(v)}, s_λ ↦ t_{ι(λ)}, computed term by term at the same level."""
    if a.graph is not tr.base:
        raise ValueError("element does not live over the truncated graph's base")
    if not fits(tr, a):
        raise MarginError(f"level {a.level} too large for the box {tr.box}")
    raw = {(tr.iota_path(al), tr.iota_path(be)): c for (al, be), c in a.terms.items()}
    return AlgebraElem.from_raw(tr.graph, a.ring, raw, a.level)


def in_corner(tr, e: AlgebraElem):
    """All terms t_α t_{β*} have r(α), r(β) in ι of the old vertices."""
    ex = tr.vertex_of
    return all(dg.is_zero(ex[a.range].excess) and dg.is_zero(ex[b.range].excess)
               for (a, b) in e.terms)


@dataclass
class MoritaReport:
    factored: int = 0
    products: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def morita_spans_check(graph, ring, bound, tr=None, samples=200, seed=0):
    """Every spanning t_α t_{β*} is some m·n, and products n·m land in the ι-corner."""
    bound = tuple(bound)
    k = graph.k
    tr = tr or build_truncated(graph, tuple(3 * b + 1 for b in bound))
    kg = tr.graph
    rep = MoritaReport()
    near = [p for p in kg.paths_up_to(bound) if dg.le(tr.vertex_of[p.range].excess, bound)]
    by_src = {}
    for p in near:
        by_src.setdefault(p.source, []).append(p)
    for v, ps in by_src.items():
        d = tr.vertex_of[v]
        if not dg.le(dg.add(d.excess, bound), dg.sub(tr.box, dg.ones(k))):
            raise MarginError(f"box {tr.box} too small for bound {bound}")
        if dg.is_zero(d.excess):
            lam = kg.vertex_path(v)
        else:
            lam = tr.to_path(TriplePath(graph.vertex_path(d.base), dg.zero(k), d.excess))
        for al, be in itertools.product(ps, repeat=2):
            m = spanning(kg, ring, al, lam)
            n = spanning(kg, ring, lam, be)
            rep.factored += 1
            if not (m * n).equals(spanning(kg, ring, al, be)):
                rep.failures.append(f"t_{al} t_{be}* is not m·n through {lam}")
    M = [(a, b) for a in near for b in near
         if a.source == b.source and dg.is_zero(tr.vertex_of[b.range].excess)]
    rng = random.Random(seed)
    for _ in range(min(samples, len(M) ** 2)):
        (a1, b1), (a2, b2) = rng.choice(M), rng.choice(M)
        prod = spanning(kg, ring, b1, a1) * spanning(kg, ring, a2, b2)
        rep.products += 1
        if not in_corner(tr, prod):
            rep.failures.append(f"n·m for ({b1},{a1}) ({a2},{b2}) leaves the corner")
    return rep


# -- ideals ------------------------------------------------------------------------

def ideal_transport(tr: Truncation, H):
    """A saturated hereditary set of the truncation mapped to the old vertices."""
    kg = tr.graph
    H = frozenset(H)
    if not (is_hereditary(kg, H) and is_saturated(kg, H)):
        raise TransportError("set is not saturated and hereditary in the truncation")
    via_iota = {w for w in tr.base.vertices if tr.iota_vertex(w) in H}
    via_pi = {tr.vertex_of[v].base for v in H}
    if via_iota != via_pi:
        raise TransportError("set touches the truncation boundary: "
                             f"ι-pullback {sorted(via_iota)} but projection {sorted(via_pi)}")
    G = frozenset(via_iota)
    if pullback(tr, G) != H:
        raise TransportError("transport is not inverted by the pullback")
    return G


def pullback(tr: Truncation, G):
    """All (w, c) in the truncation with w in G."""
    return frozenset(v for v, d in tr.vertex_of.items() if d.base in G)


__all__ = [
    "DVertex", "TriplePath", "MarginError", "TransportError", "realizable", "is_valid",
    "iota", "pi", "dvertex_path", "d_compose", "d_factor", "d_paths", "raw_vertex",
    "raw_triple", "raw_compose", "raw_factor", "raw_oracle_check", "Truncation",
    "build_truncated", "interior_report", "min_ext_check", "fits", "embed_algebra",
    "in_corner", "MoritaReport", "morita_spans_check", "ideal_transport", "pullback",
]
