from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kplab.rings import (
    QQ,
    ZZ,
    Laurent,
    LaurentRing,
    RingError,
    RingMatrix,
    Zmod,
    parse_ring,
    rank,
)

small = st.integers(-20, 20)


def test_rational_sum():
    assert QQ.coerce(Fraction(1, 2)) + QQ.coerce(Fraction(1, 3)) == Fraction(5, 6)


def test_mod_product():
    R = Zmod(5)
    assert R.coerce(3) * R.coerce(4) == R.coerce(2)


def test_laurent_product():
    x = LaurentRing(QQ).gen()
    assert (x + Laurent.monomial(QQ, -1)) * x == x * x + 1


def test_laurent_needs_field():
    with pytest.raises(RingError):
        LaurentRing(ZZ)
    with pytest.raises(RingError):
        LaurentRing(Zmod(6))


def test_division():
    assert QQ.inv(4) == Fraction(1, 4)
    assert Zmod(7).inv(3) * 3 == Zmod(7).one()
    with pytest.raises(RingError):
        ZZ.inv(2)
    with pytest.raises(RingError):
        Zmod(6).inv(5)


@pytest.mark.parametrize("text", ["ZZ", "QQ", "Z/7", "Z/6", "Laurent(QQ)", "Laurent(Z/5)"])
def test_literal_round_trip(text):
    assert str(parse_ring(text)) == text


@pytest.mark.parametrize("text", ["Z", "Z/1", "Laurent(ZZ)", "QQ[x]"])
def test_bad_literals(text):
    with pytest.raises(RingError):
        parse_ring(text)


def test_scalar_literals():
    assert QQ.parse_scalar("-3/4") == Fraction(-3, 4)
    assert Zmod(5).parse_scalar("1/2") == Zmod(5).coerce(3)
    with pytest.raises(RingError):
        ZZ.parse_scalar("1/2")
    with pytest.raises(RingError):
        QQ.parse_scalar("1/0")


RINGS = [ZZ, QQ, Zmod(6), Zmod(7), LaurentRing(QQ), LaurentRing(Zmod(5))]


def _elem(R, a, b, e):
    if R.kind == "Laurent":
        return Laurent.monomial(R.base, e, a) + Laurent.monomial(R.base, e + 1, b)
    return R.coerce(a) + R.coerce(b) * e


@pytest.mark.parametrize("R", RINGS, ids=str)
@given(a=small, b=small, c=small, d=small, e=st.integers(-3, 3))
def test_ring_axioms(R, a, b, c, d, e):
    x, y, z = _elem(R, a, b, e), _elem(R, b, c, -e), _elem(R, c, d, e + 1)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == R.zero() and x * R.one() == x


@given(st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), max_size=4), st.integers(-3, 3))
def test_laurent_evaluation_is_a_homomorphism(coeffs, z):
    if z == 0:
        return
    p = Laurent(QQ, coeffs)
    q = Laurent(QQ, {k + 1: v for k, v in coeffs.items()})
    assert (p * q).evaluate(Fraction(z)) == p.evaluate(Fraction(z)) * q.evaluate(Fraction(z))
    assert (p + q).evaluate(Fraction(z)) == p.evaluate(Fraction(z)) + q.evaluate(Fraction(z))


def test_laurent_drops_zero_coefficients():
    p = Laurent(QQ, {0: 1, 3: 0})
    assert p == Laurent.monomial(QQ, 0) and list(p.coeffs) == [0]
    assert not Laurent(QQ, {2: 0})


# -- matrices --------------------------------------------------------------------

def test_identity():
    I = RingMatrix.identity(QQ, ["a", "b"])
    assert I.entries == {("a", "a"): 1, ("b", "b"): 1}


def test_evaluate_diag():
    L = LaurentRing(QQ)
    M = RingMatrix(L, ["a", "b"], {("a", "a"): L.gen(), ("b", "b"): Laurent.monomial(QQ, -1)})
    assert M.evaluate(Fraction(2)).entries == {("a", "a"): 2, ("b", "b"): Fraction(1, 2)}


def test_rank_of_diag():
    M = RingMatrix(QQ, ["a", "b"], {("a", "a"): 1})
    assert M.rank() == 1


def test_entries_outside_index():
    with pytest.raises(RingError):
        RingMatrix(QQ, ["a"], {("a", "b"): 1})


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), max_size=5))
def test_rank_bounds_and_duplicates(rows):
    R = Zmod(7)
    dicts = [{j: R.coerce(v) for j, v in enumerate(r) if v % 7} for r in rows]
    r = rank(R, dicts)
    assert r <= min(len(rows), 3)
    assert rank(R, dicts + dicts) == r


@given(st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc"), st.integers(-3, 3)), max_size=6),
       st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from("abc"), st.integers(-3, 3)), max_size=6))
def test_matrix_product_associates_with_identity(xs, ys):
    idx = "abc"
    A = RingMatrix(ZZ, idx, {(i, j): v for i, j, v in xs if v})
    B = RingMatrix(ZZ, idx, {(i, j): v for i, j, v in ys if v})
    I = RingMatrix.identity(ZZ, idx)
    assert A * I == A and I * A == A
    assert (A + B) * A == A * A + B * A
