"""Matrix representation on boundary paths, used as an independent oracle.

The module has basis ``(x, g)`` for boundary paths x and integer vectors g in a
window ``[-R, R]^k``. ``s_λ`` sends ``(x, g)`` to ``(λx, g + d(λ))`` and
``s_{μ*}`` sends ``(μy, g)`` to ``(y, g - d(μ))``. The g-marker keeps
elements of different graded degree apart. With ``graded=False`` the marker
is dropped and one gets the plain boundary-path family.
"""

from __future__ import annotations

import itertools

from kplab import degrees as dg
from kplab.boundary import space
from kplab.rings import RingMatrix


class WindowOverflow(ValueError):
    pass


class BoundaryRep:
    def __init__(self, graph, ring, radius=6, graded=True):
        self.graph, self.ring = graph, ring
        self.sp = space(graph)
        self.paths = self.sp.all()
        self.radius = radius if graded else 0
        self.graded = graded
        k = graph.k
        if graded:
            self.window = list(itertools.product(range(-radius, radius + 1), repeat=k))
        else:
            self.window = [dg.zero(k)]
        self.index = tuple((x, g) for x in self.paths for g in self.window)
        self._pos = {x: i for i, x in enumerate(self.index)}
        self._inwin = set(self.window)
        self._moves_memo = {}

    def _moves(self, alpha, beta):
        """Pairs (x, z) with x = βy and z = αy."""
        hit = self._moves_memo.get((alpha, beta))
        if hit is None:
            hit = self._moves_memo[(alpha, beta)] = list(self._find_moves(alpha, beta))
        return hit

    def _find_moves(self, alpha, beta):
        sp = self.sp
        for x in self.paths:
            if x.range != beta.range or not dg.le(beta.degree, x.degree):
                continue
            if sp.initial(x, beta.degree) != beta:
                continue
            y = sp.shift(x, beta.degree)
            if alpha.source != y.range:
                continue
            yield x, sp.compose_finite(alpha, y)

    def _accumulate(self, out, alpha, beta, c):
        shift = dg.sub(alpha.degree, beta.degree) if self.graded else dg.zero(self.graph.k)
        zero = self.ring.zero()
        for x, z in self._moves(alpha, beta):
            for g in self.window:
                h = dg.add(g, shift)
                if h in self._inwin:
                    key = ((z, h), (x, g))
                    out[key] = out.get(key, zero) + c

    def _matrix(self, out):
        out = {ij: c for ij, c in out.items() if c != 0}
        return RingMatrix._trusted(self.ring, self.index, out, self._pos)

    def term(self, alpha, beta, coeff=1):
        """Matrix of coeff · s_α s_{β*}."""
        out = {}
        self._accumulate(out, alpha, beta, self.ring.coerce(coeff))
        return self._matrix(out)

    def apply(self, a):
        out = {}
        for (alpha, beta), c in a.terms.items():
            self._accumulate(out, alpha, beta, c)
        return self._matrix(out)

    def P(self, v):
        p = self.graph.vertex_path(v)
        return self.term(p, p)

    def S(self, lam):
        return self.term(lam, self.graph.vertex_path(lam.source))

    def S_star(self, lam):
        return self.term(self.graph.vertex_path(lam.source), lam)

    def interior(self, margin):
        """Columns whose marker stays at least ``margin`` inside the window."""
        if not self.graded:
            return list(self.index)
        lim = self.radius - margin
        if lim < 0:
            raise WindowOverflow(f"window radius {self.radius} too small for spread {margin}")
        return [(x, g) for (x, g) in self.index if max((abs(t) for t in g), default=0) <= lim]

    def columns(self, M, cols):
        cols = set(cols)
        return {ij: c for ij, c in M.entries.items() if ij[1] in cols}


def oracle_diff(graph, ring, pairs, radius=6):
    """Compare engine arithmetic with the representation on element pairs.

    Returns a list of human-readable disagreements (empty when all agree).
    """
    rep = BoundaryRep(graph, ring, radius)
    problems = []
    for n, (a, b) in enumerate(pairs):
        ma, mb = rep.apply(a), rep.apply(b)
        ab = a * b
        cols = rep.interior(a.spread() + b.spread())
        if rep.columns(rep.apply(a + b), cols) != rep.columns(ma + mb, cols):
            problems.append(f"pair {n}: additivity")
        if rep.columns(rep.apply(ab), cols) != rep.columns(ma * mb, cols):
            problems.append(f"pair {n}: multiplicativity")
        same = rep.columns(ma, cols) == rep.columns(mb, cols)
        if same != a.equals(b):
            problems.append(f"pair {n}: equality disagrees (engine {a.equals(b)}, oracle {same})")
        if (not rep.columns(ma, cols)) != a.is_zero():
            problems.append(f"pair {n}: zero test disagrees")
    return problems
