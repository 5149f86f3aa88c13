import random

import pytest
from hypothesis import given, settings, strategies as st

import kplab.desourcify as ds
from kplab import degrees as dg
from kplab.algebra import gen_p, gen_s
from kplab.desourcify import (
    DVertex,
    MarginError,
    TransportError,
    TriplePath,
    build_truncated,
    d_compose,
    d_factor,
    d_paths,
    dvertex_path,
    embed_algebra,
    ideal_transport,
    interior_report,
    iota,
    is_valid,
    min_ext_check,
    morita_spans_check,
    pi,
    pullback,
    raw_oracle_check,
)
from kplab.ideals import enumerate_sat_her, saturated_closure
from kplab.kgraph import GraphError
from kplab.rings import QQ, ZZ
from kplab.sampling import random_composable, random_product_graph


def T(g, edges, c, d):
    seg = g.path(edges) if isinstance(edges, list) else g.vertex_path(edges)
    return TriplePath(seg, tuple(c), tuple(d))


def test_iota_and_pi_examples(A, C):
    b1 = A.path(["b1"])
    assert iota(b1) == T(A, ["b1"], (0, 0), (1, 0))
    assert pi(iota(b1)) == iota(b1)
    # (b1, 0, (1,1)) would need excess (0,1) at 10, where red is live
    assert not is_valid(A, T(A, ["b1"], (0, 0), (1, 1)))
    t = T(C, ["e"], (0, 0), (2, 0))
    assert is_valid(C, t) and pi(t) == T(C, ["e"], (0, 0), (1, 0))


def test_compose_and_factor_examples(A):
    t1, t2 = T(A, ["b1"], (0, 0), (1, 0)), T(A, "10", (0, 0), (1, 0))
    assert is_valid(A, t2)
    t = d_compose(A, t1, t2)
    assert t == T(A, ["b1"], (0, 0), (2, 0))
    assert d_factor(A, t, (1, 0)) == (t1, t2)
    assert d_factor(A, t, (0, 0)) == (dvertex_path(A, t.range), t)
    assert d_factor(A, t, (2, 0)) == (t, dvertex_path(A, t.source))
    sq = A.path(["b1", "r2"])
    assert d_compose(A, iota(A.path(["b1"])), iota(A.path(["r2"]))) == iota(sq)
    assert d_compose(A, dvertex_path(A, t1.range), t1) == t1
    with pytest.raises(GraphError):
        d_compose(A, t2, t1)


def test_d_paths_examples(A, C):
    zero = (0, 0)
    assert d_paths(A, DVertex("10", zero), (1, 0)) == [T(A, "10", zero, (1, 0))]
    assert d_paths(A, DVertex("00", zero), (1, 0)) == [T(A, ["b1"], zero, (1, 0))]
    assert d_paths(C, DVertex("u", zero), (0, 1)) == [T(C, ["f"], zero, (0, 1))]
    with pytest.raises(GraphError):
        d_paths(C, DVertex("u", (1, 0)), (1, 0))


def test_graph_c_window(C):
    tr = build_truncated(C, (2, 2))
    assert sorted(tr.vertex_id.values()) == ["u", "w", "w[1,0]", "w[2,0]"]
    blue = sorted(e.id for e in tr.graph.edges.values() if e.color == 0)
    assert blue == ["e", "w+1", "w+1[1,0]"]
    assert tr.iota_map() == {"u": "u", "w": "w", "e": "e", "f": "f", "h": "h"}


def test_graph_a_window_is_a_grid(A):
    tr = build_truncated(A, (3, 3))
    assert (len(tr.graph.vertices), len(tr.graph.edges)) == (25, 40)
    assert interior_report(tr) == []
    inner = [v for v in tr.graph.vertices if tr.is_interior(v)]
    for v in inner:
        assert all(len(tr.graph.edges_at(v, i)) == 1 for i in range(2))


def test_source_free_graph_is_its_own_window(graphs):
    g = graphs["graphD"]
    tr = build_truncated(g, (3,))
    assert tr.graph.vertices == g.vertices and sorted(tr.graph.edges) == sorted(g.edges)


def test_window_needs_no_boundary_paths(graphs):
    # realizability only looks at dead colors, so rose2 is fine
    g = graphs["rose2"]
    assert build_truncated(g, (2,)).graph.vertices == g.vertices


def test_min_ext(A, C):
    for g in (A, C):
        pairs, problems = min_ext_check(g, (1, 1))
        assert pairs > 0 and problems == []
    with pytest.raises(MarginError):
        min_ext_check(A, (3, 3), build_truncated(A, (2, 2)))


def test_embedding_examples(A):
    tr = build_truncated(A, (3, 3))
    assert embed_algebra(tr, gen_p(A, ZZ, "00")).equals(gen_p(tr.graph, ZZ, tr.iota_vertex("00")))
    s = embed_algebra(tr, gen_s(A, ZZ, "b1"))
    assert s.equals(gen_s(tr.graph, ZZ, tr.to_path(T(A, ["b1"], (0, 0), (1, 0)))))
    with pytest.raises(MarginError):
        embed_algebra(tr, gen_p(A, ZZ, "00").raise_level((3, 3)))


def test_morita_cases(C):
    tr = build_truncated(C, (4, 4))
    rep = morita_spans_check(C, QQ, (1, 1), tr)
    assert rep.ok and rep.factored > 0
    with pytest.raises(MarginError):
        morita_spans_check(C, QQ, (2, 2), build_truncated(C, (2, 2)))


def test_ideal_transport(C):
    tr = build_truncated(C, (2, 2))
    every = frozenset(tr.graph.vertices)
    assert ideal_transport(tr, every) == {"u", "w"}
    assert ideal_transport(tr, frozenset()) == frozenset()
    H = saturated_closure(tr.graph, {"w[1,0]"})
    assert tr.iota_vertex("w") in H
    assert ideal_transport(tr, H) == {"u", "w"}
    assert pullback(tr, {"u", "w"}) == every
    with pytest.raises(TransportError):
        ideal_transport(tr, frozenset({"w"}))


def test_transport_matches_lattices(graphs):
    g = graphs["loops2"]
    tr = build_truncated(g, (2,))
    lat = enumerate_sat_her(tr.graph)
    assert sorted(map(sorted, (ideal_transport(tr, H) for H in lat.sets))) == \
        sorted(map(sorted, enumerate_sat_her(g).sets))


def test_raw_oracle_full(A, C):
    assert raw_oracle_check(A, (2, 2)) == []
    assert raw_oracle_check(C, (2, 2)) == []


def test_raw_oracle_sees_the_uncorrected_degree(C, monkeypatch):
    # with the degree written as n + p - q, composition stops agreeing
    def misprint(sp, r1, r2):
        (x, m, n), (y, p, q) = r1, r2
        head = sp.initial(x, dg.meet(n, x.degree))
        z = sp.compose_finite(head, sp.shift(y, dg.meet(p, y.degree)))
        return z, m, tuple(max(0, a) for a in dg.sub(dg.add(n, p), q))

    monkeypatch.setattr(ds, "raw_compose", misprint)
    assert raw_oracle_check(C, (2, 2))


# -- properties ------------------------------------------------------------------------

seeds = st.integers(0, 5_000)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_iota_is_a_functor(seed, pick):
    g = random_product_graph(random.Random(seed), max_edges=2)
    lam, mu = random_composable(g, random.Random(pick), (1, 1))
    assert d_compose(g, iota(lam), iota(mu)) == iota(g.compose(lam, mu))
    assert pi(pi(iota(lam))) == iota(lam)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_factor_then_compose(seed, pick):
    g = random_product_graph(random.Random(seed), max_edges=2)
    rng = random.Random(pick)
    v = DVertex(rng.choice(g.vertices), (0, 0))
    n = (rng.randint(0, 2), rng.randint(0, 2))
    ts = d_paths(g, v, n)
    assert ts  # no sources in the new graph
    for t in ts:
        assert is_valid(g, t)
        for m in dg.box(n):
            a, b = d_factor(g, t, m)
            assert is_valid(g, a) and is_valid(g, b)
            assert d_compose(g, a, b) == t
