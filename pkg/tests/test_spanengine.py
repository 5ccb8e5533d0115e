import random

import pytest
from hypothesis import given, strategies as st

from qr3.fieldcore import FieldSpec
from qr3.idealfile import fixture_path, parse_ideal
from qr3.multiindex import MultiIndex as M
from qr3.quadform import binomial_generators, quad_dimension
from qr3.spanengine import SpanBasis, ideal_degree_part, same_span, span_insert, span_of
from strategies import FIELDS, scalars

QQ = FieldSpec(0)


def test_insert_examples():
    S = SpanBasis(QQ, 3)
    _, new = span_insert(S, {})
    assert not new and S.dim == 0
    assert span_insert(S, {1: 1})[1] and not span_insert(S, {1: 5})[1] and S.dim == 1
    with pytest.raises(IndexError):
        S.add({3: 1})


def test_binomials_of_p3_conic_surface():
    S = span_of(QQ, 55, (q.as_vector() for q in binomial_generators(3, 2, QQ)))
    assert S.dim == 20


def test_empty_membership_certificate():
    cert = SpanBasis(QQ, 4, track=True).contains({})
    assert cert is not None and cert.coefficients == {}


def _echelon_ok(S):
    for piv, row in S.rows.items():
        assert row[piv] == 1 and min(row) == piv
        for other in S.rows:
            if other != piv:
                assert other not in row


vectors = lambda F, m: st.dictionaries(st.integers(0, m - 1), scalars(F), max_size=m)  # noqa: E731


@pytest.mark.parametrize("F", [QQ, FieldSpec(3), FieldSpec(7)], ids=str)
@given(data=st.data())
def test_certificates_replay(F, data):
    m = data.draw(st.integers(1, 8))
    gens = data.draw(st.lists(vectors(F, m), max_size=8))
    S = SpanBasis(F, m, track=True)
    for g in gens:
        S.add(g)
    _echelon_ok(S)
    target = data.draw(vectors(F, m))
    cert = S.contains(target)
    was_new = span_insert(span_of(F, m, gens), target)[1]
    assert (cert is None) == was_new
    if cert is not None:
        assert cert.replay(S.generators, {k: F.convert(v) for k, v in target.items() if F.convert(v)}, F)


@pytest.mark.parametrize("F", [QQ, FieldSpec(5)], ids=str)
def test_insertion_order_irrelevant(F):
    rng = random.Random(5)
    for _ in range(30):
        m = rng.randint(2, 10)
        gens = [{k: F.random(rng) for k in range(m) if rng.random() < 0.4} for _ in range(rng.randint(1, 8))]
        a = span_of(F, m, gens)
        shuffled = gens[:]
        rng.shuffle(shuffled)
        b = span_of(F, m, shuffled)
        assert a.dim == b.dim and same_span(a, b)
        probe = {k: F.random(rng) for k in range(m)}
        assert (probe in a) == (probe in b)


def test_ideal_degree_parts():
    conic = [{M((1, 0, 1)): 1, M((0, 2, 0)): -1}]
    assert ideal_degree_part(conic, 2, 2, QQ).dim == 1
    assert ideal_degree_part(conic, 3, 2, QQ).dim == 3
    f = parse_ideal(fixture_path("canonical_genus6"))
    assert ideal_degree_part(f.x_polynomials(), 2, 5, QQ).dim == 6
    with pytest.raises(ValueError):
        ideal_degree_part([{M((2, 0)): 1, M((1, 0)): 1}], 3, 1, QQ)
