"""Finite k-graphs presented as colored graphs plus commuting squares.

A path is stored in canonical form: its edges listed from range to source
with all color-0 edges first, then color-1, and so on. Any composable
sequence of edges can be brought to canonical form by swapping adjacent
bicolored pairs through the square table.

Colors are 0-based internally and 1-based in the text format and in reports.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass, field

from kplab import degrees as dg

ID_RE = re.compile(r"^[A-Za-z0-9_+\-\[\],~^']+$")


class GraphError(ValueError):
    """A graph description violates the k-graph axioms."""


class GraphFormatError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True)
class Path:
    range: str
    source: str
    degree: tuple
    edges: tuple = ()

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((self.range, self.edges))
            object.__setattr__(self, "_hash", h)
            return h

    @property
    def is_vertex(self):
        return not self.edges

    def __str__(self):
        return ".".join(self.edges) if self.edges else self.range

    def __repr__(self):
        return f"Path({self})"


@dataclass
class GraphSpec:
    k: int
    vertices: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    squares: list = field(default_factory=list)


class KGraph:
    """An immutable finite k-graph.

    ``squares`` is a list of 4-tuples ``(e1, e2, e3, e4)`` meaning that the
    composable pairs ``e1 e2`` and ``e3 e4`` are the same path.
    """

    def __init__(self, k, vertices, edges, squares=(), *, validate=True):
        self.k = k
        self.vertices = tuple(vertices)
        self.edges = {e.id: e for e in edges}
        self.squares = tuple(tuple(sq) for sq in squares)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._eindex = {e: i for i, e in enumerate(self.edges)}
        if validate:
            self._check_basic(edges)
        self._out = {v: [[] for _ in range(k)] for v in self.vertices}
        for e in self.edges.values():
            self._out[e.range][e.color].append(e)
        self._swap = {}
        for a, b, c, d in self.squares:
            self._swap[(a, b)] = (c, d)
            self._swap[(c, d)] = (a, b)
        self._memo = {}
        if validate:
            self._check_squares()
            if k >= 3:
                self._check_cubes()

    # -- validation -------------------------------------------------------

    def _check_basic(self, edges):
        if self.k < 1:
            raise GraphError("rank must be at least 1")
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise GraphError(f"duplicate vertex {v}")
            seen.add(v)
        for e in edges:
            if e.id in seen:
                raise GraphError(f"duplicate id {e.id}")
            seen.add(e.id)
            if not 0 <= e.color < self.k:
                raise GraphError(f"edge {e.id} has color {e.color + 1} outside 1..{self.k}")
            for end in (e.range, e.source):
                if end not in self._vindex:
                    raise GraphError(f"edge {e.id} has dangling endpoint {end}")

    def _check_squares(self):
        E = self.edges
        count = {}
        for sq in self.squares:
            a, b, c, d = sq
            label = f"square {a} {b} = {c} {d}"
            for x in sq:
                if x not in E:
                    raise GraphError(f"{label}: unknown edge {x}")
            ea, eb, ec, ed = (E[x] for x in sq)
            if ea.color == eb.color:
                raise GraphError(f"{label}: {a} and {b} have the same color")
            if ec.color != eb.color or ed.color != ea.color:
                raise GraphError(f"{label}: colors do not swap")
            if ea.source != eb.range or ec.source != ed.range:
                raise GraphError(f"{label}: a side is not composable")
            if ea.range != ec.range or eb.source != ed.source:
                raise GraphError(f"{label}: sides have different endpoints")
            for pair in ((a, b), (c, d)):
                count[pair] = count.get(pair, 0) + 1
        for a in E.values():
            for b in E.values():
                if a.source == b.range and a.color != b.color:
                    n = count.get((a.id, b.id), 0)
                    if n == 0:
                        raise GraphError(f"unmatched composable pair ({a.id},{b.id})")
                    if n > 1:
                        raise GraphError(f"duplicate square for composable pair ({a.id},{b.id})")

    def _check_cubes(self):
        E = self.edges

        def swap(seq, i):
            seq = list(seq)
            seq[i], seq[i + 1] = self._swap[(seq[i], seq[i + 1])]
            return seq

        for a in E.values():
            for b in self._all_out(a.source):
                if b.color >= a.color:
                    continue
                for c in self._all_out(b.source):
                    if c.color >= b.color:
                        continue
                    seq = (a.id, b.id, c.id)
                    one = swap(swap(swap(seq, 0), 1), 0)
                    two = swap(swap(swap(seq, 1), 0), 1)
                    if one != two:
                        raise GraphError(f"cube condition fails for {a.id} {b.id} {c.id}")

    def _all_out(self, v):
        for es in self._out[v]:
            yield from es

    # -- basic queries ----------------------------------------------------

    def edges_at(self, v, color):
        """Edges of the given color with range ``v``."""
        return tuple(self._out[v][color])

    def dead_colors(self, v):
        return frozenset(i for i in range(self.k) if not self._out[v][i])

    def live_colors(self, v):
        return frozenset(range(self.k)) - self.dead_colors(v)

    def sources(self):
        return {v: self.dead_colors(v) for v in self.vertices}

    def vertex_path(self, v):
        if v not in self._vindex:
            raise GraphError(f"unknown vertex {v}")
        return Path(v, v, dg.zero(self.k))

    def path_key(self, p):
        """Sort key: (degree, edge declaration indices, range index)."""
        return (p.degree, tuple(self._eindex[e] for e in p.edges), self._vindex[p.range])

    def _make(self, rng, seq):
        deg = [0] * self.k
        for e in seq:
            deg[self.edges[e].color] += 1
        src = self.edges[seq[-1]].source if seq else rng
        return Path(rng, src, tuple(deg), tuple(seq))

    def _reorder(self, seq, keys):
        seq, keys = list(seq), list(keys)
        changed = True
        while changed:
            changed = False
            for i in range(len(seq) - 1):
                if keys[i] > keys[i + 1]:
                    pair = (seq[i], seq[i + 1])
                    if pair not in self._swap:
                        raise GraphError(f"no square for composable pair ({pair[0]},{pair[1]})")
                    seq[i], seq[i + 1] = self._swap[pair]
                    keys[i], keys[i + 1] = keys[i + 1], keys[i]
                    changed = True
        return seq

    def path(self, items):
        """Canonical path from a vertex id or a composable edge-id sequence."""
        if isinstance(items, str):
            items = [items]
        items = list(items)
        if len(items) == 1 and items[0] in self._vindex:
            return self.vertex_path(items[0])
        for x in items:
            if x not in self.edges:
                raise GraphError(f"unknown edge {x}")
        if not items:
            raise GraphError("empty path")
        for a, b in zip(items, items[1:]):
            if self.edges[a].source != self.edges[b].range:
                raise GraphError(f"edges {a} and {b} are not composable")
        seq = self._reorder(items, [self.edges[e].color for e in items])
        return self._make(self.edges[items[0]].range, seq)

    # -- composition and factorisation ------------------------------------

    def compose(self, p, q):
        if p.source != q.range:
            raise GraphError(f"cannot compose {p} and {q}: source {p.source} != range {q.range}")
        if p.is_vertex:
            return q
        if q.is_vertex:
            return p
        key = ("compose", p, q)
        hit = self._memo.get(key)
        if hit is None:
            seq = p.edges + q.edges
            seq = self._reorder(seq, [self.edges[e].color for e in seq])
            hit = self._memo[key] = self._make(p.range, seq)
        return hit

    def compose_all(self, *paths):
        out = paths[0]
        for p in paths[1:]:
            out = self.compose(out, p)
        return out

    def factor(self, p, m):
        """Split ``p`` as ``(mu, nu)`` with ``d(mu) = m``."""
        m = tuple(m)
        if not dg.le(m, p.degree):
            raise GraphError(f"cannot factor {p} at {m}: exceeds degree {p.degree}")
        if dg.is_zero(m):
            return self.vertex_path(p.range), p
        if m == p.degree:
            return p, self.vertex_path(p.source)
        key = ("factor", p, m)
        hit = self._memo.get(key)
        if hit is None:
            seen = [0] * self.k
            keys = []
            for e in p.edges:
                c = self.edges[e].color
                keys.append((0 if seen[c] < m[c] else 1, c))
                seen[c] += 1
            seq = self._reorder(p.edges, keys)
            cut = sum(m)
            first = self._make(p.range, seq[:cut])
            second = self._make(first.source, seq[cut:])
            hit = self._memo[key] = (first, second)
        return hit

    def segment(self, p, m, n):
        """The path ``p(m, n)``."""
        return self.factor(self.factor(p, n)[0], m)[1]

    # -- enumeration ------------------------------------------------------

    def paths_of_degree(self, v, n):
        """vΛ^n in deterministic order."""
        n = tuple(n)
        key = ("deg", v, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = []

        def walk(vertex, color, left, acc):
            while color < self.k and left == 0:
                color += 1
                left = n[color] if color < self.k else 0
            if color >= self.k:
                out.append(self._make(v, acc))
                return
            for e in self._out[vertex][color]:
                walk(e.source, color, left - 1, acc + [e.id])

        if v not in self._vindex:
            raise GraphError(f"unknown vertex {v}")
        walk(v, 0, n[0] if self.k else 0, [])
        hit = self._memo[key] = tuple(out)
        return hit

    def paths_le(self, v, n):
        """vΛ^{≤n}: paths that cannot be extended inside the degree box n."""
        n = tuple(n)
        key = ("le", v, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = []
        for m in dg.box(n):
            for lam in self.paths_of_degree(v, m):
                dead = self.dead_colors(lam.source)
                if all(m[i] == n[i] or i in dead for i in range(self.k)):
                    out.append(lam)
        hit = self._memo[key] = tuple(out)
        return hit

    def paths_up_to(self, bound):
        """All paths with degree <= bound, grouped by range in vertex order."""
        out = []
        for v in self.vertices:
            for m in dg.box(tuple(bound)):
                out.extend(self.paths_of_degree(v, m))
        return out

    def min_common_ext(self, lam, mu):
        """Λ^min(λ, μ) as a tuple of pairs (α, β) with λα = μβ."""
        if lam.range != mu.range:
            return ()
        key = ("min", lam, mu)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        j = dg.join(lam.degree, mu.degree)
        out = []
        for alpha in self.paths_of_degree(lam.source, dg.sub(j, lam.degree)):
            head, beta = self.factor(self.compose(lam, alpha), mu.degree)
            if head == mu:
                out.append((alpha, beta))
        hit = self._memo[key] = tuple(out)
        return hit

    # -- predicates -------------------------------------------------------

    def is_locally_convex(self):
        """Return ``(True, None)`` or ``(False, (v, i, j, λ, μ))`` with 0-based colors."""
        for v in self.vertices:
            for i, j in itertools.combinations(range(self.k), 2):
                for a in self._out[v][i]:
                    for b in self._out[v][j]:
                        if not self._out[a.source][j] or not self._out[b.source][i]:
                            return False, (v, i, j, self.path(a.id), self.path(b.id))
        return True, None

    def reaches(self, v, w):
        """True when some path has range v and source w."""
        seen, todo = {v}, [v]
        while todo:
            x = todo.pop()
            if x == w:
                return True
            for e in self._all_out(x):
                if e.source not in seen:
                    seen.add(e.source)
                    todo.append(e.source)
        return False

    def fingerprint(self):
        return hashlib.sha256(serialize_graph(self).encode()).hexdigest()[:16]

    def __repr__(self):
        return f"KGraph(k={self.k}, vertices={len(self.vertices)}, edges={len(self.edges)})"


def build_graph(spec: GraphSpec) -> KGraph:
    return KGraph(spec.k, spec.vertices, spec.edges, spec.squares)


def omega_graph(k, m):
    """The finite grid k-graph Ω_{k,m}: one path for each pair p <= q <= m."""
    m = tuple(m)
    if len(m) != k:
        raise ValueError("degree length must equal k")

    def name(p):
        if all(a < 10 for a in p):
            return "".join(str(a) for a in p)
        return "p" + "_".join(str(a) for a in p)

    points = list(dg.box(m))
    edges, squares = [], []
    for p in points:
        for i in range(k):
            q = dg.add(p, dg.unit(k, i))
            if dg.le(q, m):
                edges.append(Edge(f"c{i + 1}_{name(p)}", i, name(p), name(q)))
    for p in points:
        for i, j in itertools.combinations(range(k), 2):
            pi, pj = dg.add(p, dg.unit(k, i)), dg.add(p, dg.unit(k, j))
            pij = dg.add(pi, dg.unit(k, j))
            if dg.le(pij, m):
                squares.append((f"c{i + 1}_{name(p)}", f"c{j + 1}_{name(pi)}",
                                f"c{j + 1}_{name(p)}", f"c{i + 1}_{name(pj)}"))
    return KGraph(k, [name(p) for p in points], edges, squares)


# -- text format -----------------------------------------------------------

def parse_graph(text: str) -> GraphSpec:
    spec = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(t.group(), t.start() + 1) for t in re.finditer(r"\S+", line)]
        if not toks:
            continue
        words = [t for t, _ in toks]

        def fail(msg, idx=0):
            raise GraphFormatError(msg, lineno, toks[min(idx, len(toks) - 1)][1])

        def ident(idx):
            if not ID_RE.match(words[idx]) or words[idx] == "->":
                fail(f"bad identifier {words[idx]!r}", idx)
            return words[idx]

        head = words[0]
        if spec is None:
            if head != "kgraph":
                fail("missing kgraph header")
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                fail("expected 'kgraph <k>' with k >= 1", 1)
            spec = GraphSpec(int(words[1]))
        elif head == "kgraph":
            fail("repeated kgraph header")
        elif head == "vertex":
            if len(words) != 2:
                fail("expected 'vertex <id>'")
            spec.vertices.append(ident(1))
        elif head == "edge":
            if len(words) != 7 or words[2] != "color" or words[5] != "->":
                fail("expected 'edge <id> color <i> <range> -> <source>'")
            if not words[3].isdigit() or not 1 <= int(words[3]) <= spec.k:
                fail(f"unknown color index {words[3]}", 3)
            spec.edges.append(Edge(ident(1), int(words[3]) - 1, ident(4), ident(6)))
        elif head == "square":
            if len(words) != 6 or words[3] != "=":
                fail("expected 'square <e1> <e2> = <e3> <e4>'")
            spec.squares.append((ident(1), ident(2), ident(4), ident(5)))
        else:
            fail(f"unknown declaration {head!r}")
    if spec is None:
        raise GraphFormatError("missing kgraph header", 1, 1)
    return spec


def serialize_graph(g) -> str:
    """Canonical text for a KGraph or GraphSpec."""
    edges = g.edges.values() if isinstance(g, KGraph) else g.edges
    lines = [f"kgraph {g.k}"]
    lines += [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e.id} color {e.color + 1} {e.range} -> {e.source}" for e in edges]
    lines += [f"square {a} {b} = {c} {d}" for a, b, c, d in g.squares]
    return "\n".join(lines) + "\n"


def load_graph(path) -> KGraph:
    with open(path, encoding="utf-8") as fh:
        return build_graph(parse_graph(fh.read()))
