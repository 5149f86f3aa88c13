"""Boundary paths of locally convex k-graphs, and the predicates built on them.

In a locally convex graph a boundary path from ``v`` is the same thing as an
infinite walk of *steps*: from the current vertex ``z`` take a path in
``zΛ^{≤(1,...,1)}``. Every such step has degree equal to the indicator of
the colors still alive at ``z``; a vertex with no live colors ends the walk.
So boundary paths are enumerable whenever every cycle of the step graph
reachable from ``v`` is a simple cycle without exits. Outside that class we
raise ``NotEventuallyPeriodic`` instead of approximating.

A boundary path is stored by its step sequence: prefix steps plus an
optional repeating block of cycle steps, both minimal by construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from kplab import degrees as dg
from kplab.kgraph import GraphError, KGraph, Path


class NotEventuallyPeriodic(Exception):
    """The boundary paths from some vertex are not finitely many periodic walks."""


class NotLocallyConvex(ValueError):
    pass


class BoundaryError(RuntimeError):
    """Identification of a boundary path failed (inconsistent square data)."""


@dataclass(frozen=True)
class BPath:
    range: str
    steps: tuple
    cycle: tuple = ()
    prefix: Path = field(compare=False, default=None)
    loop: Path | None = field(compare=False, default=None)
    degree: tuple = field(compare=False, default=())

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.range, self.steps, self.cycle))
            object.__setattr__(self, "_hash", h)
            return h

    @property
    def is_finite(self):
        return not self.cycle

    def __str__(self):
        head = ".".join(str(s) for s in self.steps) or self.range
        if self.cycle:
            return f"{head}({'.'.join(str(s) for s in self.cycle)})^inf"
        return head

    def __repr__(self):
        return f"BPath({self})"

    def to_json(self):
        return {
            "range": self.range,
            "prefix": str(self.prefix),
            "cycle": str(self.loop) if self.loop is not None else None,
            "degree": dg.fmt(self.degree),
        }


@dataclass
class Aperiodicity:
    status: str  # "yes", "no" or "unknown"
    witnesses: dict = field(default_factory=dict)
    counterexample: tuple | None = None  # (v, alpha, beta, x)
    reason: str = ""
    bound: tuple = ()

    def __bool__(self):
        return self.status == "yes"


class BoundarySpace:
    """Lazily enumerated boundary paths of one graph, with shifts and prefixes."""

    def __init__(self, graph: KGraph):
        ok, wit = graph.is_locally_convex()
        if not ok:
            raise NotLocallyConvex(f"graph is not locally convex at {wit[0]}")
        self.g = graph
        self._at = {}
        self._sep = {}
        self._index = {}
        self._shift = {}
        self._init = {}

    def steps(self, v):
        if not self.g.live_colors(v):
            return ()
        return self.g.paths_le(v, dg.ones(self.g.k))

    def _make(self, v, steps, cycle):
        g = self.g
        prefix = g.compose_all(g.vertex_path(v), *steps)
        loop = g.compose_all(*cycle) if cycle else None
        deg = prefix.degree
        if loop is not None:
            deg = tuple(dg.INF if b else a for a, b in zip(deg, loop.degree))
        return BPath(v, tuple(steps), tuple(cycle), prefix, loop, deg)

    def _check_finite(self, v):
        reach, todo = {v}, [v]
        while todo:
            z = todo.pop()
            for st in self.steps(z):
                if st.source not in reach:
                    reach.add(st.source)
                    todo.append(st.source)
        for z in sorted(reach, key=self.g.vertices.index):
            if len(self.steps(z)) > 1 and self._on_cycle(z):
                raise NotEventuallyPeriodic(
                    f"boundary paths from {v} branch on a cycle through {z}")

    def _on_cycle(self, z):
        seen, todo = set(), [st.source for st in self.steps(z)]
        while todo:
            x = todo.pop()
            if x == z:
                return True
            if x in seen:
                continue
            seen.add(x)
            todo.extend(st.source for st in self.steps(x))
        return False

    def at(self, v):
        """All boundary paths with range ``v``, in deterministic order."""
        hit = self._at.get(v)
        if hit is not None:
            return hit
        if v not in self.g.vertices:
            raise GraphError(f"unknown vertex {v}")
        self._check_finite(v)
        out = []

        def walk(z, trail, pos):
            if z in pos:
                j = pos[z]
                out.append(self._make(v, trail[:j], trail[j:]))
                return
            sts = self.steps(z)
            if not sts:
                out.append(self._make(v, trail, ()))
                return
            pos = {**pos, z: len(trail)}
            for st in sts:
                walk(st.source, trail + [st], pos)

        walk(v, [], {})
        self._at[v] = tuple(out)
        return self._at[v]

    def all(self):
        return [x for v in self.g.vertices for x in self.at(v)]

    # -- prefixes ---------------------------------------------------------

    def _unroll(self, x):
        yield from x.steps
        if x.cycle:
            yield from itertools.cycle(x.cycle)

    def initial(self, x, n):
        """The finite path x(0, n)."""
        n = tuple(n)
        if not dg.le(n, x.degree):
            raise GraphError(f"{n} exceeds the degree of {x}")
        key = (x, n)
        hit = self._init.get(key)
        if hit is not None:
            return hit
        g = self.g
        acc = g.vertex_path(x.range)
        if not dg.le(n, acc.degree):
            for st in self._unroll(x):
                acc = g.compose(acc, st)
                if dg.le(n, acc.degree):
                    break
        hit = self._init[key] = g.factor(acc, n)[0]
        return hit

    def segment(self, x, m, n):
        return self.g.factor(self.initial(x, n), m)[1]

    def vertex_at(self, x, n):
        return self.initial(x, n).source

    # -- identification ---------------------------------------------------

    def separator(self, v):
        """A degree N such that x ↦ x(0, N ∧ d(x)) is injective on boundary paths from v."""
        hit = self._sep.get(v)
        if hit is not None:
            return hit
        paths = self.at(v)
        N = dg.zero(self.g.k)
        for x, y in itertools.combinations(paths, 2):
            span = (max(len(x.steps), len(y.steps))
                    + max(1, len(x.cycle)) * max(1, len(y.cycle)) + 1)
            xs = list(itertools.islice(self._unroll(x), span))
            ys = list(itertools.islice(self._unroll(y), span))
            cum = dg.zero(self.g.k)
            for i in range(span):
                a = xs[i] if i < len(xs) else None
                b = ys[i] if i < len(ys) else None
                step = a if a is not None else b
                if step is not None:
                    cum = dg.add(cum, step.degree)
                if a != b:
                    break
            else:
                raise BoundaryError(f"could not separate {x} from {y}")
            N = dg.join(N, cum)
        self._sep[v] = N
        self._index[v] = {self._key(x, N): x for x in paths}
        if len(self._index[v]) != len(paths):
            raise BoundaryError(f"separator at {v} is not injective")
        return N

    def _key(self, x, N):
        return self.initial(x, dg.meet(N, x.degree))

    def compose_finite(self, lam, x):
        """The boundary path λx."""
        if lam.source != x.range:
            raise GraphError(f"cannot compose {lam} with a boundary path at {x.range}")
        if lam.is_vertex:
            return x
        v = lam.range
        N = self.separator(v)
        zdeg = dg.add(lam.degree, x.degree)
        target = dg.meet(N, zdeg)
        reach = dg.meet(dg.join(target, lam.degree), zdeg)
        head = self.g.compose(lam, self.initial(x, dg.sub(reach, lam.degree)))
        key = self.g.factor(head, target)[0]
        hit = self._index[v].get(key)
        if hit is None or hit.degree != zdeg:
            raise BoundaryError(f"no boundary path from {v} matches {lam}·{x}")
        return hit

    def shift(self, x, m):
        """σ^m(x)."""
        m = tuple(m)
        key = (x, m)
        hit = self._shift.get(key)
        if hit is not None:
            return hit
        lam = self.initial(x, m)
        for y in self.at(lam.source):
            try:
                if self.compose_finite(lam, y) == x:
                    self._shift[key] = y
                    return y
            except BoundaryError:
                continue
        raise BoundaryError(f"shift of {x} by {m} not found")

    def shift_color(self, x, i):
        if x.degree[i] < 1:
            return None
        return self.shift(x, dg.unit(self.g.k, i))

    def reach(self, x, colors):
        """{σ^a x : supp(a) ⊆ colors}, mapped to one degree a for each."""
        found = {x: dg.zero(self.g.k)}
        todo = [x]
        while todo:
            y = todo.pop(0)
            for i in sorted(colors):
                z = self.shift_color(y, i)
                if z is not None and z not in found:
                    found[z] = dg.add(found[y], dg.unit(self.g.k, i))
                    todo.append(z)
        return found

    def check_boundary(self, x):
        """Literal check of the sources-to-sources condition on a window of x."""
        k = self.g.k
        cap = tuple(
            int(p + 2 * q) if d == dg.INF else int(d)
            for p, q, d in zip(x.prefix.degree,
                               x.loop.degree if x.loop else dg.zero(k), x.degree))
        for n in dg.box(cap):
            z = self.vertex_at(x, n)
            for i in range(k):
                if n[i] == x.degree[i] and self.g.edges_at(z, i):
                    return False
        return True


def space(graph: KGraph) -> BoundarySpace:
    sp = graph._memo.get("boundary")
    if sp is None:
        sp = graph._memo["boundary"] = BoundarySpace(graph)
    return sp


def boundary_paths(graph, v):
    return space(graph).at(v)


def shift(graph, x, m):
    return space(graph).shift(x, m)


def compose_finite(graph, lam, x):
    return space(graph).compose_finite(lam, x)


def default_bound(graph):
    """|edges| · lcm(cycle lengths of boundary paths) in every coordinate."""
    n = max(1, len(graph.edges))
    try:
        lengths = [len(x.loop.edges) for x in space(graph).all() if x.loop is not None]
    except NotEventuallyPeriodic:
        lengths = []
    return (n * math.lcm(*lengths) if lengths else n,) * graph.k


def _bad_paths(sp):
    """Map each boundary path x with αx = βx for some α ≠ β to a witness (y, a, b)."""
    k = sp.g.k
    colors = range(k)
    subsets = [frozenset(s) for r in range(1, k + 1) for s in itertools.combinations(colors, r)]
    bad = {}
    for y in sp.all():
        for S in subsets:
            rest = frozenset(colors) - S
            plain = sp.reach(y, rest)
            for i in sorted(S):
                step = sp.shift_color(y, i)
                if step is None:
                    continue
                for x, a in sp.reach(step, S).items():
                    if x in plain and x not in bad:
                        bad[x] = (y, dg.add(a, dg.unit(k, i)), plain[x])
    return bad


def is_aperiodic(graph, bound=None):
    """Decide whether every vertex v has a boundary path x at v with
    alpha x != beta x for all distinct alpha, beta ending at v.

    Exact whenever boundary paths are finitely representable; otherwise the
    answer is ``unknown``.
    """
    bound = tuple(bound) if bound is not None else default_bound(graph)
    try:
        sp = space(graph)
        sp.all()
    except NotEventuallyPeriodic as exc:
        return Aperiodicity("unknown", reason=str(exc), bound=bound)
    bad = _bad_paths(sp)
    out = Aperiodicity("yes", bound=bound)
    for v in graph.vertices:
        good = [x for x in sp.at(v) if x not in bad]
        if good:
            out.witnesses[v] = good[0]
            continue
        x = sp.at(v)[0]
        y, a, b = bad[x]
        alpha, beta = sp.initial(y, a), sp.initial(y, b)
        return Aperiodicity("no", counterexample=(v, alpha, beta, x),
                            reason=f"aperiodicity fails at {v}", bound=bound)
    return out


def finite_path_aperiodicity(graph, bound):
    """Bounded search for the finite-path form of aperiodicity (source-free graphs).

    For all v and m ≠ n ≤ bound, look for λ ∈ vΛ with d(λ) = (m ∨ n) + bound
    whose two shifted segments differ. Finding all witnesses gives ``yes``;
    a missing witness only gives ``unknown`` since larger λ might still work.
    """
    if any(graph.dead_colors(v) for v in graph.vertices):
        raise ValueError("finite-path criterion needs a graph without sources")
    bound = tuple(bound)
    g = graph
    for v in g.vertices:
        for m in dg.box(bound):
            for n in dg.box(bound):
                if m >= n:
                    continue
                j = dg.join(m, n)
                top = dg.add(j, bound)
                ext = dg.sub(top, j)
                if not any(g.segment(lam, m, dg.add(m, ext)) != g.segment(lam, n, dg.add(n, ext))
                           for lam in g.paths_of_degree(v, top)):
                    return "unknown"
    return "yes"


def is_cofinal(graph):
    """Return ``(True, None)`` or ``(False, (x, v))`` where v reaches no vertex of x."""
    sp = space(graph)
    U = sp.all()
    visited = {}
    for x in U:
        visited[x] = {y.range for y in sp.reach(x, range(graph.k))}
    for v in graph.vertices:
        for x in U:
            if not any(graph.reaches(v, w) for w in visited[x]):
                return False, (x, v)
    return True, None
