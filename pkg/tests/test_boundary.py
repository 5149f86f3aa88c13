import random

import pytest
from hypothesis import given, settings, strategies as st

from kplab import degrees as dg
from kplab.degrees import INF
from kplab.boundary import (
    NotEventuallyPeriodic,
    boundary_paths,
    compose_finite,
    finite_path_aperiodicity,
    is_aperiodic,
    is_cofinal,
    shift,
    space,
)
from kplab.kgraph import KGraph
from kplab.sampling import random_product_graph


def only(xs):
    xs = list(xs)
    assert len(xs) == 1, xs
    return xs[0]


def test_graph_c_boundary_paths(C):
    xu = only(boundary_paths(C, "u"))
    assert xu.degree == (1, INF) and str(xu.loop) == "h"
    assert str(xu.prefix) == "e.h"
    xw = only(boundary_paths(C, "w"))
    assert xw.degree == (0, INF) and str(xw.loop) == "h"


def test_graph_a_finite_boundary_path(A):
    x = only(boundary_paths(A, "10"))
    assert x.is_finite and x.degree == (0, 1) and str(x) == "r2"


def test_shifts(C):
    xu, xw = only(boundary_paths(C, "u")), only(boundary_paths(C, "w"))
    assert shift(C, xu, (0, 0)) == xu
    assert shift(C, xu, (1, 0)) == xw
    assert shift(C, xw, (0, 5)) == xw


def test_compose_finite(A, C):
    xu = only(boundary_paths(C, "u"))
    assert compose_finite(C, C.vertex_path("u"), xu) == xu
    assert compose_finite(C, C.path(["f"]), xu) == xu
    x = compose_finite(A, A.path(["b1"]), only(boundary_paths(A, "10")))
    assert x == only(boundary_paths(A, "00")) and str(x) == "b1.r2"


def test_aperiodicity(A, C, graphs):
    assert is_aperiodic(A).status == "yes"
    ap = is_aperiodic(C)
    assert ap.status == "no" and ap.reason == "aperiodicity fails at u"
    v, alpha, beta, x = ap.counterexample
    assert (v, str(alpha), str(beta)) == ("u", "f", "u")
    assert is_aperiodic(graphs["rose2"]).status == "unknown"
    assert is_aperiodic(KGraph(1, ["v"], [])).status == "yes"


def test_cofinality(A, C, graphs):
    assert is_cofinal(A) == (True, None)
    assert is_cofinal(C) == (True, None)
    ok, (x, v) = is_cofinal(graphs["loops2"])
    assert not ok and x.range != v
    with pytest.raises(NotEventuallyPeriodic):
        is_cofinal(graphs["rose2"])


def test_finite_path_check_on_loops(graphs):
    assert finite_path_aperiodicity(graphs["graphD"], (3,)) == "unknown"
    assert finite_path_aperiodicity(graphs["loops2"], (3,)) == "unknown"
    with pytest.raises(ValueError):
        finite_path_aperiodicity(graphs["graphC"], (2, 2))


# -- properties ------------------------------------------------------------------

seeds = st.integers(0, 5_000)


def _space(seed):
    g = random_product_graph(random.Random(seed), max_edges=2)
    try:
        return g, space(g), space(g).all()
    except NotEventuallyPeriodic:
        return g, None, []


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_every_vertex_has_a_boundary_path(seed):
    g, sp, xs = _space(seed)
    if sp is None:
        return
    assert {x.range for x in xs} == set(g.vertices)
    for x in xs:
        assert sp.check_boundary(x)


@settings(max_examples=25, deadline=None)
@given(seeds, seeds)
def test_shift_is_additive(seed, pick):
    g, sp, xs = _space(seed)
    if not xs:
        return
    rng = random.Random(pick)
    x = rng.choice(xs)
    top = tuple(int(min(d, 3)) for d in x.degree)
    m = tuple(rng.randint(0, t) for t in top)
    n = tuple(rng.randint(0, t - a) for a, t in zip(m, top))
    assert sp.shift(sp.shift(x, m), n) == sp.shift(x, dg.add(m, n))
    # shifting undoes composing with the initial segment
    assert sp.compose_finite(sp.initial(x, m), sp.shift(x, m)) == x

