import random

import pytest
from hypothesis import given, settings, strategies as st

from kplab.algebra import gen_p, zero
from kplab.ideals import (
    NotSaturatedHereditary,
    brute_force_closure,
    contains,
    enumerate_sat_her,
    hereditary_closure,
    ideal_from_set,
    is_basically_simple,
    is_hereditary,
    is_saturated,
    is_simple,
    saturated_closure,
)
from kplab.rings import QQ, ZZ, Zmod
from kplab.sampling import random_element, random_product_graph


def test_hereditary_closures(C):
    assert hereditary_closure(C, {"u"}) == {"u", "w"}
    assert hereditary_closure(C, {"w"}) == {"w"}
    assert hereditary_closure(C, set()) == set()


def test_saturated_closures(A, C):
    assert saturated_closure(C, {"w"}) == {"u", "w"}
    assert saturated_closure(C, {"u", "w"}) == {"u", "w"}
    assert saturated_closure(A, {"11"}) == set(A.vertices)


def test_lattice_sizes(graphs):
    assert len(enumerate_sat_her(graphs["graphA"]).sets) == 2
    assert len(enumerate_sat_her(graphs["graphC"]).sets) == 2
    lat = enumerate_sat_her(graphs["loops2"])
    assert len(lat.sets) == 4 and len(lat.hasse) == 4
    v1, v2 = frozenset({"v1"}), frozenset({"v2"})
    assert lat.join(v1, v2) == {"v1", "v2"} and lat.meet(v1, v2) == frozenset()


def test_membership(C):
    assert contains(ideal_from_set(C, QQ, set()), zero(C, QQ))
    assert not contains(ideal_from_set(C, QQ, set()), gen_p(C, QQ, "w"))
    full = ideal_from_set(C, QQ, {"u", "w"})
    rng = random.Random(1)
    for _ in range(20):
        assert contains(full, random_element(C, QQ, rng))
    assert contains(full, gen_p(C, QQ, "u"))


def test_not_saturated(C):
    with pytest.raises(NotSaturatedHereditary):
        ideal_from_set(C, QQ, {"w"})


def test_simplicity(A, C, graphs):
    assert is_simple(A, QQ).status == "yes"
    assert is_simple(A, Zmod(7)).status == "yes"
    d = is_simple(C, QQ)
    assert d.status == "no" and d.reason == "aperiodicity fails at u"
    assert is_basically_simple(A) and not is_simple(A, ZZ)
    assert is_simple(A, ZZ).reason == "ZZ is not a field"
    cof = is_basically_simple(graphs["loops2"])
    assert cof.status == "no" and cof.reason.startswith("cofinality fails")
    assert is_simple(graphs["rose2"], QQ).status == "unknown"


def test_closure_on_loops(graphs):
    g = graphs["loops2"]
    rep = brute_force_closure(g, {"v1"}, (2,))
    assert rep.ok and rep.generated > 0
    # the closure of nothing is nothing
    assert brute_force_closure(g, set(), (2,)).generated == 0


def test_closure_flags_unsaturated_sets(C):
    # s_e p_w s_e* = p_u, so the ideal of {w} already contains p_u
    rep = brute_force_closure(C, {"w"}, (1, 1))
    assert rep.outside == ["u"] and not rep.ok


# -- properties on random graphs ----------------------------------------------------

seeds = st.integers(0, 5_000)


@settings(max_examples=30, deadline=None)
@given(seeds, st.sets(st.integers(0, 5)))
def test_closures_are_closed(seed, picks):
    g = random_product_graph(random.Random(seed))
    S = {g.vertices[i % len(g.vertices)] for i in picks}
    H = hereditary_closure(g, S)
    assert S <= H and is_hereditary(g, H)
    assert hereditary_closure(g, H) == H
    T = saturated_closure(g, S)
    assert H <= T and is_hereditary(g, T) and is_saturated(g, T)
    assert saturated_closure(g, T) == T


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_lattice_is_exactly_the_closed_sets(seed):
    import itertools

    g = random_product_graph(random.Random(seed))
    lat = enumerate_sat_her(g)
    subsets = [frozenset(c) for r in range(len(g.vertices) + 1)
               for c in itertools.combinations(g.vertices, r)]
    closed = {s for s in subsets if is_hereditary(g, s) and is_saturated(g, s)}
    assert set(lat.sets) == closed
    for i, j in lat.hasse:
        assert lat.sets[i] < lat.sets[j]
