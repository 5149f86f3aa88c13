"""Random inputs for property checks: graphs and algebra elements."""

from __future__ import annotations

import itertools
import random

from kplab.algebra import AlgebraElem
from kplab.kgraph import Edge, KGraph


def random_element(graph, ring, rng: random.Random, bound=(2, 2), terms=3, coeffs=(-3, 3)):
    """A random sum of spanning elements r·s_α s_{β*} with d(α), d(β) <= bound."""
    by_source = {}
    for p in graph.paths_up_to(bound):
        by_source.setdefault(p.source, []).append(p)
    sources = sorted(by_source, key=graph.vertices.index)
    raw = {}
    for _ in range(rng.randint(1, terms)):
        pool = by_source[rng.choice(sources)]
        a, b = rng.choice(pool), rng.choice(pool)
        c = rng.randint(*coeffs) or 1
        raw[(a, b)] = raw.get((a, b), 0) + c
    raw = {key: ring.coerce(c) for key, c in raw.items()}
    return AlgebraElem.from_raw(graph, ring, {k: c for k, c in raw.items() if c != 0})


def _random_one_graph(rng, names, max_edges):
    edges = []
    for n in range(rng.randint(1, max_edges)):
        edges.append((rng.choice(names), rng.choice(names)))
    return edges


def random_product_graph(rng: random.Random, max_vertices=6, max_edges=3):
    """A random locally convex 2-graph: a product of two 1-graphs with twisted squares.

    The blue and red 1-skeletons come from two random 1-graphs E, F; the
    square bijection inside each (range, source) class is then randomly
    permuted, which still gives a valid 2-graph.
    """
    while True:
        ne = rng.randint(1, 3)
        nf = rng.randint(1, 3)
        if ne * nf <= max_vertices:
            break
    E = [f"a{i}" for i in range(ne)]
    F = [f"b{j}" for j in range(nf)]
    eb = _random_one_graph(rng, E, max_edges)
    fr = _random_one_graph(rng, F, max_edges)
    verts = [f"{x}{y}" for x in E for y in F]
    edges = []
    for n, (r, s) in enumerate(eb):
        for y in F:
            edges.append(Edge(f"B{n}{y}", 0, f"{r}{y}", f"{s}{y}"))
    for n, (r, s) in enumerate(fr):
        for x in E:
            edges.append(Edge(f"R{n}{x}", 1, f"{x}{r}", f"{x}{s}"))
    # untwisted squares: blue (e, r(f)) red (s(e), f) = red (r(e), f) blue (e, s(f))
    groups = {}
    for (n, (er, es)), (m, (fr_, fs)) in itertools.product(enumerate(eb), enumerate(fr)):
        left = (f"B{n}{fr_}", f"R{m}{es}")
        right = (f"R{m}{er}", f"B{n}{fs}")
        groups.setdefault((f"{er}{fr_}", f"{es}{fs}"), []).append((left, right))
    squares = []
    for key in sorted(groups):
        pairs = groups[key]
        rights = [r for _, r in pairs]
        rng.shuffle(rights)
        for (left, _), right in zip(pairs, rights):
            squares.append(left + right)
    return KGraph(2, verts, edges, squares)


def random_composable(graph, rng, bound):
    """A random composable pair (λ, μ) with degrees <= bound."""
    paths = graph.paths_up_to(bound)
    while True:
        lam = rng.choice(paths)
        cands = [p for p in paths if p.range == lam.source]
        if cands:
            return lam, rng.choice(cands)


__all__ = ["random_element", "random_product_graph", "random_composable"]
