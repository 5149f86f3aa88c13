"""Rank-2 Bratteli diagrams of finite depth and their matrix pictures.

A diagram is given level by level. Each level is a union of red cycles.
Blue edges run from level n+1 down to level n. The square data is a
permutation F of the blue edges: for a blue edge e and the red edge f with
s(f) = r(e), the square is ``f e = F(e) h`` with h the red edge with
s(h) = s(e).

Spec file format::

    level 0: cycle u
    level 1: cycle w1 w2
    blue e: u -> w1, F(e)=e2

``a -> b`` means range a, source b. In a cycle line ``v1 v2 ... vm`` the
red edge ``r_vj`` has range vj and source v(j+1), wrapping around.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from kplab import degrees as dg
from kplab.algebra import AlgebraElem, gen_p, gen_s, gen_s_star, one, spanning, sum_elems
from kplab.kgraph import Edge, GraphError, GraphFormatError, KGraph
from kplab.relations import verify_family
from kplab.rings import Echelon, LaurentRing, Laurent, RingMatrix


class HypothesisError(ValueError):
    """The single-source-cycle hypothesis of the matrix picture fails."""


class DecompositionError(AssertionError):
    """A corner element is not a Laurent polynomial in the cycle (must not happen)."""


BLUE, RED = 0, 1

_LEVEL = re.compile(r"level\s+(\d+)\s*:\s*cycle\s+(.+)")
_BLUE = re.compile(r"blue\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*,\s*F\((\S+)\)\s*=\s*(\S+)")


@dataclass
class BratteliSpec:
    cycles: list = field(default_factory=list)  # (level, (v1, ..., vm))
    blue: dict = field(default_factory=dict)  # id -> (range, source)
    F: dict = field(default_factory=dict)
    _graph: KGraph | None = field(default=None, repr=False, compare=False)

    @property
    def depth(self):
        return max((n for n, _ in self.cycles), default=0)

    def level_of(self, v):
        for n, cyc in self.cycles:
            if v in cyc:
                return n
        raise GraphError(f"unknown vertex {v}")

    def cycle_of(self, v):
        for _, cyc in self.cycles:
            if v in cyc:
                return cyc
        raise GraphError(f"unknown vertex {v}")

    def vertices(self, level=None):
        return [v for n, cyc in self.cycles if level is None or n == level for v in cyc]

    def pred(self, v):
        cyc = self.cycle_of(v)
        return cyc[cyc.index(v) - 1]

    def red_edge(self, v):
        """The red edge with range v."""
        return f"r_{v}"

    def graph(self):
        if self._graph is None:
            self._graph = build_bratteli(self)
        return self._graph


def parse_bratteli(text: str) -> BratteliSpec:
    spec = BratteliSpec()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LEVEL.fullmatch(line)
        if m:
            spec.cycles.append((int(m.group(1)), tuple(m.group(2).split())))
            continue
        m = _BLUE.fullmatch(line)
        if m:
            e, r, s, e1, e2 = m.groups()
            if e1 != e:
                raise GraphFormatError(f"F({e1}) given on the line of blue edge {e}", no, 1)
            if e in spec.blue:
                raise GraphFormatError(f"duplicate blue edge {e}", no, 1)
            spec.blue[e] = (r, s)
            spec.F[e] = e2
            continue
        raise GraphFormatError(f"cannot parse {line!r}", no, 1)
    if not spec.cycles:
        raise GraphFormatError("no levels given", 1, 1)
    return spec


def serialize_bratteli(spec: BratteliSpec) -> str:
    out = [f"level {n}: cycle {' '.join(c)}" for n, c in spec.cycles]
    out += [f"blue {e}: {r} -> {s}, F({e})={spec.F[e]}" for e, (r, s) in spec.blue.items()]
    return "\n".join(out) + "\n"


def _validate(spec):
    seen = {}
    for n, cyc in spec.cycles:
        for v in cyc:
            if v in seen:
                raise GraphError(f"vertex {v} lies on two red cycles")
            seen[v] = n
    for e, (r, s) in spec.blue.items():
        for v in (r, s):
            if v not in seen:
                raise GraphError(f"blue edge {e} has unknown endpoint {v}")
        if seen[s] != seen[r] + 1:
            raise GraphError(f"blue edge {e} must run from level {seen[r] + 1} to level {seen[r]}")
    if sorted(spec.F) != sorted(spec.blue) or sorted(spec.F.values()) != sorted(spec.blue):
        raise GraphError("F is not a bijection of the blue edges")
    for e, (r, s) in spec.blue.items():
        fr, fs = spec.blue[spec.F[e]]
        if fr != spec.pred(r) or fs != spec.pred(s):
            raise GraphError(
                f"F({e}) = {spec.F[e]} is inconsistent with the cycles: the square "
                f"{spec.red_edge(spec.pred(r))} {e} = F({e}) {spec.red_edge(spec.pred(s))} needs "
                f"a blue edge {spec.pred(r)} -> {spec.pred(s)}")


def build_bratteli(spec: BratteliSpec) -> KGraph:
    _validate(spec)
    verts = spec.vertices()
    edges = [Edge(e, BLUE, r, s) for e, (r, s) in spec.blue.items()]
    for _, cyc in spec.cycles:
        for j, v in enumerate(cyc):
            edges.append(Edge(spec.red_edge(v), RED, v, cyc[(j + 1) % len(cyc)]))
    squares = []
    for e, (r, s) in spec.blue.items():
        squares.append((spec.red_edge(spec.pred(r)), e, spec.F[e], spec.red_edge(spec.pred(s))))
    return KGraph(2, verts, edges, squares)


def truncate_depth(spec: BratteliSpec, N: int) -> BratteliSpec:
    """The diagram of depth N: levels 0..N and the blue edges among them."""
    _validate(spec)
    cyc = [(n, c) for n, c in spec.cycles if n <= N]
    keep = {e: rs for e, rs in spec.blue.items() if spec.level_of(rs[1]) <= N}
    return BratteliSpec(cyc, keep, {e: spec.F[e] for e in keep})


def orders(spec: BratteliSpec) -> dict:
    """o(e): the least l > 0 with F^l(e) = e."""
    out = {}
    for e in spec.blue:
        l, x = 1, spec.F[e]
        while x != e:
            x, l = spec.F[x], l + 1
        out[e] = l
    return out


# -- matrix units ----------------------------------------------------------------

def _red_path(spec, g, start, length):
    """The red path of the given length with range ``start``."""
    if length == 0:
        return g.vertex_path(start)
    ids, v = [], start
    for _ in range(length):
        ids.append(spec.red_edge(v))
        v = g.edges[ids[-1]].source
    return g.path(ids)


@dataclass
class MatrixUnits:
    spec: BratteliSpec
    ring: object
    dagger: str
    cycle: tuple  # source cycle, rotated to start at the dagger vertex
    Y: list
    theta: dict

    @property
    def graph(self):
        return self.spec.graph()

    def mu(self, power=1):
        """The red cycle at the dagger vertex traversed ``power`` times."""
        return _red_path(self.spec, self.graph, self.dagger, power * len(self.cycle))

    def check(self):
        problems = []
        Y, th = self.Y, self.theta
        for a in Y:
            for b in Y:
                for s in Y:
                    for t in Y:
                        lhs = th[(a, b)] * th[(s, t)]
                        ok = lhs.equals(th[(a, t)]) if b == s else lhs.is_zero()
                        if not ok:
                            problems.append(f"θ({a},{b})θ({s},{t})")
        total = sum_elems(self.graph, self.ring, [th[(a, a)] for a in Y])
        if not total.equals(one(self.graph, self.ring)):
            problems.append("diagonal units do not sum to 1")
        return problems


def _sources(g):
    return [v for v in g.vertices if not g.edges_at(v, BLUE)]


def matrix_units(spec: BratteliSpec, ring) -> MatrixUnits:
    g = spec.graph()
    S = _sources(g)
    cycles = {spec.cycle_of(v) for v in S}
    if len(cycles) != 1 or set(next(iter(cycles))) != set(S):
        raise HypothesisError("blue sources do not form a single red cycle; decompose first")
    dagger = min(S)
    cyc = spec.cycle_of(dagger)
    j = cyc.index(dagger)
    cyc = cyc[j:] + cyc[:j]
    pos = {v: i for i, v in enumerate(cyc)}
    m = len(cyc)
    Y = sorted((p for v in g.vertices for n in range(spec.depth + 1)
                for p in g.paths_of_degree(v, (n, 0)) if p.source in pos), key=g.path_key)
    theta = {}
    for a in Y:
        for b in Y:
            i, k = pos[a.source], pos[b.source]
            lo, hi = min(i, k), max(i, k)
            # the red path between the two sources that avoids the dagger's edge
            nu = _red_path(spec, g, cyc[lo], hi - lo) if lo > 0 else _red_path(spec, g, cyc[hi], (m - hi) % m)
            if nu.range == a.source and nu.source == b.source:
                theta[(a, b)] = spanning(g, ring, g.compose(a, nu), b)
            else:
                theta[(a, b)] = spanning(g, ring, a, g.compose(b, nu))
    return MatrixUnits(spec, ring, dagger, cyc, Y, theta)


# -- the matrix isomorphism -------------------------------------------------------

class MatrixIso:
    """a ↦ (L(θ(†,α) a θ(β,†)))_{α,β}, L the Laurent coordinate of the dagger corner."""

    def __init__(self, spec, ring):
        if ring.kind != "Laurent":
            ring = LaurentRing(ring)
        self.laurent = ring
        self.base = ring.base
        self.units = matrix_units(spec, self.base)
        self.graph = self.units.graph
        self.index = tuple(str(a) for a in self.units.Y)

    # corner coordinates

    def _power(self, i):
        g, ring = self.graph, self.base
        if i == 0:
            return gen_p(g, ring, self.units.dagger)
        if i > 0:
            return gen_s(g, ring, self.units.mu(i))
        return gen_s_star(g, ring, self.units.mu(-i))

    def to_laurent(self, c: AlgebraElem) -> Laurent:
        d = self.units.dagger
        m = len(self.units.cycle)
        if any(a.range != d or b.range != d for a, b in c.terms):
            raise DecompositionError("element does not lie in the dagger corner")
        coeffs = {}
        for deg in c.graded_degrees():
            if deg[0] != 0 or deg[1] % m:
                raise DecompositionError(f"corner element has graded degree {deg}")
            i = deg[1] // m
            comp = c.graded_component(deg)
            ref = self._power(i)
            lvl = dg.join(comp.level, ref.level)
            comp, ref = comp.raise_level(lvl), ref.raise_level(lvl)
            key = ref.sorted_terms()[0][0]
            r = comp.terms.get(key, self.base.zero())
            if not comp.equals(ref.scale(r)):
                raise DecompositionError(f"degree {deg} part is not a multiple of s_μ^{i}")
            coeffs[i] = r
        return Laurent(self.base, coeffs)

    def from_laurent(self, L: Laurent) -> AlgebraElem:
        return sum_elems(self.graph, self.base,
                         [self._power(i).scale(c) for i, c in L.coeffs.items()])

    def apply(self, a: AlgebraElem) -> RingMatrix:
        th, Y, d = self.units.theta, self.units.Y, self.units.dagger
        dag = self.graph.vertex_path(d)
        entries = {}
        for al in Y:
            left = th[(dag, al)] * a
            if left.is_zero():
                continue
            for be in Y:
                L = self.to_laurent(left * th[(be, dag)])
                if L != 0:
                    entries[(str(al), str(be))] = L
        return RingMatrix(self.laurent, self.index, entries)

    def unapply(self, M: RingMatrix) -> AlgebraElem:
        th, d = self.units.theta, self.units.dagger
        dag = self.graph.vertex_path(d)
        by_name = {str(a): a for a in self.units.Y}
        parts = []
        for (i, j), L in M.entries.items():
            parts.append(th[(by_name[i], dag)] * self.from_laurent(L) * th[(dag, by_name[j])])
        return sum_elems(self.graph, self.base, parts)


def matrix_iso(spec, ring) -> MatrixIso:
    return MatrixIso(spec, ring)


class CornerIso:
    """The restriction of the matrix isomorphism to P·KP·P, P the sum of level-0 vertex projections."""

    def __init__(self, spec, ring):
        self.iso = MatrixIso(spec, ring)
        g, base = self.iso.graph, self.iso.base
        self.spec = spec
        self.P = sum_elems(g, base, [gen_p(g, base, v) for v in spec.vertices(0)])
        self.X = tuple(str(a) for a in self.iso.units.Y if spec.level_of(a.range) == 0)

    def apply(self, a):
        full = self.iso.apply(self.P * a * self.P)
        outside = [ij for ij in full.entries if ij[0] not in self.X or ij[1] not in self.X]
        if outside:
            raise DecompositionError(f"compressed element has entries outside the corner: {outside[:3]}")
        return RingMatrix(self.iso.laurent, self.X, dict(full.entries))


def level_zero_corner(spec, ring) -> CornerIso:
    return CornerIso(spec, ring)


# -- direct-sum decomposition -------------------------------------------------------

@dataclass
class Summand:
    cycle: tuple
    vertices: tuple  # vertices that reach the cycle
    subgraph: KGraph
    unit: AlgebraElem  # P_i


class _Compressed:
    """Q_v = P q_v P, T_λ = P t_λ P on a subgraph, as a family for relation checks."""

    def __init__(self, big, sub, ring, P):
        self.big, self.sub, self.ring, self.Pi = big, sub, ring, P

    def _c(self, x):
        return self.Pi * x * self.Pi

    def _lift(self, lam):
        return lam.range if lam.is_vertex else self.big.path(list(lam.edges))

    def P(self, v):
        return self._c(gen_p(self.big, self.ring, v))

    def S(self, lam):
        return self._c(gen_s(self.big, self.ring, self._lift(lam)))

    def S_star(self, lam):
        return self._c(gen_s_star(self.big, self.ring, self._lift(lam)))

    def zero(self):
        return sum_elems(self.big, self.ring, [])

    def total(self, items):
        return sum_elems(self.big, self.ring, items)


@dataclass
class Decomposition:
    spec: BratteliSpec
    ring: object
    summands: list
    level: tuple

    def split(self, a):
        """Pieces of a, one per summand, read off at a level whose β all end at blue sources."""
        a = a.raise_level(dg.join(a.level, self.level))
        out = []
        for s in self.summands:
            terms = {k: c for k, c in a.terms.items() if k[1].source in s.cycle}
            out.append(AlgebraElem(a.graph, a.ring, a.level, terms))
        return out

    def check(self, bound=(1, 1)):
        g, ring = self.spec.graph(), self.ring
        problems = []
        units = [s.unit for s in self.summands]
        if not sum_elems(g, ring, units).equals(one(g, ring)):
            problems.append("summand units do not add up to 1")
        for i, P in enumerate(units):
            if not (P * P).equals(P):
                problems.append(f"unit {i} is not idempotent")
            for j, Q in enumerate(units):
                if i != j and not (P * Q).is_zero():
                    problems.append(f"units {i} and {j} are not orthogonal")
        for i, s in enumerate(self.summands):
            rep = verify_family(s.subgraph, _Compressed(g, s.subgraph, ring, s.unit), bound,
                                name=f"summand {i}")
            problems += [f"summand {i}: {f}" for f in rep.failures]
        return problems


def decompose_summands(spec: BratteliSpec, ring) -> Decomposition:
    g = spec.graph()
    S = _sources(g)
    cycles = []
    for v in S:
        c = spec.cycle_of(v)
        if c not in cycles:
            cycles.append(c)
    summands = []
    for cyc in cycles:
        V = tuple(v for v in g.vertices if any(g.reaches(v, w) for w in cyc))
        edges = [e for e in g.edges.values() if e.range in V and e.source in V]
        ids = {e.id for e in edges}
        sq = [q for q in g.squares if all(x in ids for x in q)]
        sub = KGraph(2, V, edges, sq)
        blue_in = [p for v in V for n in range(spec.depth + 1)
                   for p in g.paths_of_degree(v, (n, 0)) if p.source in cyc]
        unit = sum_elems(g, ring, [spanning(g, ring, p, p) for p in blue_in])
        summands.append(Summand(cyc, V, sub, unit))
    return Decomposition(spec, ring, summands, (spec.depth, 0))


# -- a witness against local matriciality --------------------------------------------

def cycle_powers_rank(spec, ring, vertex=None, count=8):
    """Rank of s_μ, s_{μ^2}, ..., s_{μ^count} for the red cycle μ at ``vertex``."""
    g = spec.graph()
    v = vertex or g.vertices[0]
    m = len(spec.cycle_of(v))
    elems = [gen_s(g, ring, _red_path(spec, g, v, i * m)) for i in range(1, count + 1)]
    lvl = dg.join(*(e.level for e in elems))
    ech = Echelon(ring)
    for e in elems:
        ech.add(dict(e.raise_level(lvl).terms))
    return len(ech)


__all__ = [
    "HypothesisError", "DecompositionError", "BratteliSpec", "parse_bratteli",
    "serialize_bratteli", "build_bratteli", "truncate_depth", "orders", "MatrixUnits",
    "matrix_units", "MatrixIso", "matrix_iso", "CornerIso", "level_zero_corner", "Summand",
    "Decomposition", "decompose_summands", "cycle_powers_rank",
]
