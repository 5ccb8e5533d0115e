from math import comb

import pytest
from hypothesis import given, strategies as st

from qr3.multiindex import MultiIndex, enumerate_indices, parse_coordinate, unit

M = MultiIndex


def test_small_enumerations():
    assert [tuple(I) for I in enumerate_indices(1, 2)] == [(2, 0), (1, 1), (0, 2)]
    B = enumerate_indices(3, 2)
    assert len(B) == 10 and B.N == 9
    assert len(enumerate_indices(2, 3)) == comb(5, 2)
    assert tuple(enumerate_indices(2, 2)) == tuple(map(M, [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]))


def test_enumerate_rejects():
    with pytest.raises(ValueError):
        enumerate_indices(0, 2)
    with pytest.raises(ValueError):
        enumerate_indices(2, -1)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("d", range(0, 9))
def test_size_and_bijection(n, d):
    B = enumerate_indices(n, d)
    assert len(B) == comb(n + d, n)
    assert all(B.index_of(I) == i for i, I in enumerate(B))
    assert all(I.degree == d and len(I) == n + 1 for I in B)
    assert list(B) == sorted(B, reverse=True)


def test_arith_examples():
    assert M((1, 1, 0)) + M((1, 0, 1)) == M((2, 1, 1))
    assert M((2, 0, 0)) - M((1, 0, 0)) == M((1, 0, 0))
    assert M((1, 0, 0)) - M((0, 1, 0)) is None
    assert M((2, 0, 1)).support() == {0, 2}
    assert M((0, 0, 0, 3)).support() == {3}
    assert M((1, 1, 1, 1)).support() == {0, 1, 2, 3}


def test_index_maps():
    assert M((2, 1)).insert_zero(1) == M((2, 0, 1))
    assert M((0, 2)).insert_zero(0) == M((0, 0, 2))
    assert M((1, 1, 0)).add_unit(2) == M((1, 1, 1))
    assert M((0, 0)).add_unit(0) == M((1, 0))
    with pytest.raises(IndexError):
        M((1, 1)).insert_zero(3)
    with pytest.raises(IndexError):
        M((1, 1)).add_unit(2)
    with pytest.raises(ValueError):
        M((1, -1))


def test_text_round_trip():
    I = M((1, 0, 2))
    assert I.text() == "z[1,0,2]" and parse_coordinate(I.text()) == I


vecs = st.integers(1, 5).flatmap(lambda n: st.tuples(*[st.lists(st.integers(0, 4), min_size=n + 1, max_size=n + 1)] * 2))


@given(vecs)
def test_add_sub_inverse(pair):
    a, b = map(M, pair)
    s = a + b
    assert s - b == a and s - a == b
    assert s.support() == a.support() | b.support()
    assert s.degree == a.degree + b.degree


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.data())
def test_insert_delete_and_units(exps, data):
    a = M(exps)
    k = data.draw(st.integers(0, len(a)))
    b = a.insert_zero(k)
    assert len(b) == len(a) + 1 and b.degree == a.degree and b.delete(k) == a
    j = data.draw(st.integers(0, len(a) - 1))
    assert a.add_unit(j) - unit(len(a) - 1, j) == a
