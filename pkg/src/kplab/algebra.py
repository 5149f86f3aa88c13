"""Exact arithmetic in Kumjian-Pask algebras via a fixed-level normal form.

An element is a finite sum of terms ``r · s_α s_{β*}`` with ``s(α) = s(β)``
and every β in ``Λ^{≤n}`` for the element's level ``n``. At a fixed level
the spanning pairs are linearly independent, so two elements are equal
exactly when their term maps agree after raising both to a common level.
"""

from __future__ import annotations

from kplab import degrees as dg
from kplab.boundary import space
from kplab.kgraph import GraphError, KGraph, Path


class SeparationNotFound(Exception):
    """No separating degree exists for ck_reduce within the search bound."""


class AlgebraElem:
    __slots__ = ("graph", "ring", "level", "terms")

    def __init__(self, graph: KGraph, ring, level, terms):
        self.graph = graph
        self.ring = ring
        self.level = tuple(level)
        self.terms = terms

    # -- construction -----------------------------------------------------

    @classmethod
    def from_raw(cls, graph, ring, raw, level=None):
        """Normalize ``{(α, β): r}`` with arbitrary β at ``level`` (default: join of d(β))."""
        k = graph.k
        if level is None:
            level = dg.join(dg.zero(k), *(b.degree for (_, b) in raw)) if raw else dg.zero(k)
        level = tuple(level)
        out = {}
        zero = ring.zero()
        for (a, b), c in raw.items():
            if a.source != b.source:
                raise GraphError(f"term ({a}, {b}) has mismatched sources")
            if not dg.le(b.degree, level):
                raise ValueError(f"{b} does not fit under level {level}")
            for lam in graph.paths_le(b.source, dg.sub(level, b.degree)):
                key = (graph.compose(a, lam), graph.compose(b, lam))
                out[key] = out.get(key, zero) + c
        terms = {key: c for key, c in out.items() if c != 0}
        return cls(graph, ring, level, terms)

    def _check(self, other):
        if not isinstance(other, AlgebraElem):
            raise TypeError(f"expected an algebra element, got {type(other).__name__}")
        if other.graph is not self.graph or other.ring != self.ring:
            raise ValueError("elements live in different algebras")

    # -- structure --------------------------------------------------------

    def raise_level(self, n):
        n = tuple(n)
        if not dg.le(self.level, n):
            raise ValueError(f"cannot lower level {self.level} to {n}")
        if n == self.level:
            return self
        return AlgebraElem.from_raw(self.graph, self.ring, self.terms, n)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, AlgebraElem):
            return self + self.scalar(other)
        self._check(other)
        n = dg.join(self.level, other.level)
        a, b = self.raise_level(n), other.raise_level(n)
        out = dict(a.terms)
        for key, c in b.terms.items():
            out[key] = out.get(key, self.ring.zero()) + c
        return AlgebraElem(self.graph, self.ring, n, {k: c for k, c in out.items() if c != 0})

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElem(self.graph, self.ring, self.level,
                           {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r):
        r = self.ring.coerce(r)
        terms = {k: r * c for k, c in self.terms.items()}
        return AlgebraElem(self.graph, self.ring, self.level, {k: c for k, c in terms.items() if c != 0})

    def scalar(self, r):
        """The element r·1."""
        return one(self.graph, self.ring).scale(r)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElem):
            return self.scale(other)
        self._check(other)
        g = self.graph
        raw = {}
        zero = self.ring.zero()
        for (a, b), c in self.terms.items():
            for (lam, mu), d in other.terms.items():
                for sig, tau in g.min_common_ext(b, lam):
                    key = (g.compose(a, sig), g.compose(mu, tau))
                    raw[key] = raw.get(key, zero) + c * d
        raw = {k: c for k, c in raw.items() if c != 0}
        return AlgebraElem.from_raw(g, self.ring, raw)

    def __rmul__(self, r):
        return self.scale(r)

    def star(self):
        raw = {(b, a): c for (a, b), c in self.terms.items()}
        return AlgebraElem.from_raw(self.graph, self.ring, raw)

    def equals(self, other):
        self._check(other)
        n = dg.join(self.level, other.level)
        return self.raise_level(n).terms == other.raise_level(n).terms

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    # -- grading ----------------------------------------------------------

    @staticmethod
    def term_degree(key):
        a, b = key
        return dg.sub(a.degree, b.degree)

    def graded_degrees(self):
        return sorted({self.term_degree(k) for k in self.terms})

    def graded_component(self, g):
        g = tuple(g)
        return AlgebraElem(self.graph, self.ring, self.level,
                           {k: c for k, c in self.terms.items() if self.term_degree(k) == g})

    def spread(self):
        """Largest absolute graded-degree coordinate among the terms."""
        return max((abs(x) for k in self.terms for x in self.term_degree(k)), default=0)

    # -- output -----------------------------------------------------------

    def sorted_terms(self):
        key = self.graph.path_key
        return sorted(self.terms.items(), key=lambda kv: (key(kv[0][0]), key(kv[0][1])))

    def to_json(self):
        return {
            "level": list(self.level),
            "terms": [[str(a), str(b), self.ring.to_json(c)] for (a, b), c in self.sorted_terms()],
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        body = " + ".join(f"{self.ring.fmt(c)}*s[{a}]s*[{b}]" for (a, b), c in self.sorted_terms())
        return f"{body} @ {self.level}"


# -- generators ------------------------------------------------------------

def _as_path(graph, x):
    return x if isinstance(x, Path) else graph.path(x)


def gen_p(graph, ring, v):
    p = graph.vertex_path(v)
    return AlgebraElem(graph, ring, dg.zero(graph.k), {(p, p): ring.one()})


def gen_s(graph, ring, lam):
    lam = _as_path(graph, lam)
    src = graph.vertex_path(lam.source)
    return AlgebraElem(graph, ring, dg.zero(graph.k), {(lam, src): ring.one()})


def gen_s_star(graph, ring, lam):
    lam = _as_path(graph, lam)
    src = graph.vertex_path(lam.source)
    return AlgebraElem.from_raw(graph, ring, {(src, lam): ring.one()}, lam.degree)


def spanning(graph, ring, alpha, beta, coeff=1):
    """r · s_α s_{β*}."""
    alpha, beta = _as_path(graph, alpha), _as_path(graph, beta)
    return AlgebraElem.from_raw(graph, ring, {(alpha, beta): ring.coerce(coeff)}, beta.degree)


def zero(graph, ring):
    return AlgebraElem(graph, ring, dg.zero(graph.k), {})


def one(graph, ring):
    return sum_elems(graph, ring, [gen_p(graph, ring, v) for v in graph.vertices])


def sum_elems(graph, ring, elems):
    total = zero(graph, ring)
    for e in elems:
        total = total + e
    return total


def ghost_product_at_level(graph, ring, lam, mu, n):
    """s_{λ*} s_μ as the sum of s_α s_{β*} over λα = μβ in Λ^{≤n}.

    Independent of the multiplication in ``AlgebraElem``: it enumerates
    r(λ)Λ^{≤n} directly instead of using minimal common extensions.
    """
    lam, mu, n = _as_path(graph, lam), _as_path(graph, mu), tuple(n)
    if not (dg.le(lam.degree, n) and dg.le(mu.degree, n)):
        raise ValueError(f"level {n} is below the degrees of {lam} and {mu}")
    raw = {}
    if lam.range == mu.range:
        for rho in graph.paths_le(lam.range, n):
            if not (dg.le(lam.degree, rho.degree) and dg.le(mu.degree, rho.degree)):
                continue
            h1, alpha = graph.factor(rho, lam.degree)
            h2, beta = graph.factor(rho, mu.degree)
            if h1 == lam and h2 == mu:
                raw[(alpha, beta)] = ring.one()
    return AlgebraElem.from_raw(graph, ring, raw, dg.sub(n, mu.degree))


# -- coefficient probe and the reduction -------------------------------

def probe(a, mu, nu):
    """Return ``(r, s_{μ*} a s_ν)`` where r is the 0-graded coefficient at p_{s(μ)}."""
    g, ring = a.graph, a.ring
    mu, nu = _as_path(g, mu), _as_path(g, nu)
    if nu not in g.paths_le(nu.range, a.level):
        raise ValueError(f"{nu} is not in Λ^{{≤{a.level}}}")
    full = gen_s_star(g, ring, mu) * a * gen_s(g, ring, nu)
    flat = full.graded_component(dg.zero(g.k))
    if flat.is_zero():
        return ring.zero(), full
    unit = gen_p(g, ring, mu.source).raise_level(flat.level)
    first = next(iter(unit.sorted_terms()))[0]
    r = flat.terms.get(first, ring.zero())
    if not flat.equals(unit.scale(r)):
        raise AssertionError("0-graded part of the probe is not a multiple of p_{s(μ)}")
    return r, full


def _separation(sp, alpha, mu, y):
    """Least degree m (by total, then lexicographic) with (αy)(0,m) ≠ (μy)(0,m)."""
    k = sp.g.k
    ay, my = sp.compose_finite(alpha, y), sp.compose_finite(mu, y)
    loop = y.loop.degree if y.loop is not None else dg.zero(k)
    cap = dg.add(dg.join(alpha.degree, mu.degree), dg.add(y.prefix.degree, dg.add(loop, loop)))
    cap = tuple(int(c) for c in dg.meet(cap, ay.degree, my.degree))
    for m in sorted(dg.box(cap), key=lambda m: (sum(m), m)):
        if sp.initial(ay, m) != sp.initial(my, m):
            return m
    raise SeparationNotFound(f"no degree separates {alpha}·y from {mu}·y for y = {y}")


def ck_reduce(a, mu, nu, y=None):
    """Find (σ, τ) with s_{σ*} a s_τ = r_{μ,ν} p_{s(σ)}.

    ``y`` is a boundary path at s(μ); when omitted every boundary path
    there is tried in turn.
    """
    g, ring = a.graph, a.ring
    mu, nu = _as_path(g, mu), _as_path(g, nu)
    if (mu, nu) not in a.terms:
        raise ValueError(f"({mu}, {nu}) is not a term of the element")
    r = a.terms[(mu, nu)]
    rivals = [al for (al, be) in a.terms if be == nu and al.degree != mu.degree]
    if not rivals:
        sigma, tau = mu, nu
    else:
        sp = space(g)
        candidates = [y] if y is not None else list(sp.at(mu.source))
        for cand in candidates:
            try:
                ms = [_separation(sp, al, mu, cand) for al in rivals]
            except SeparationNotFound:
                continue
            m = dg.join(*ms)
            seg = sp.initial(cand, dg.meet(m, cand.degree))
            sigma, tau = g.compose(mu, seg), g.compose(nu, seg)
            break
        else:
            raise SeparationNotFound(f"no boundary path at {mu.source} separates the term ({mu}, {nu})")
    got = gen_s_star(g, ring, sigma) * a * gen_s(g, ring, tau)
    if not got.equals(gen_p(g, ring, sigma.source).scale(r)):
        raise AssertionError(f"reduction check failed for ({sigma}, {tau})")
    return sigma, tau
