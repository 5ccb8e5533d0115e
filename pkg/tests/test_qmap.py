import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qr3 import poly
from qr3.fieldcore import FieldSpec
from qr3.multiindex import MultiIndex as M, enumerate_indices, unit
from qr3.qmap import expand, flattening, gamma, gamma_size_bound, minors2, q_of
from qr3.quadform import QuadraticForm, binomial_generators, quad_dimension
from qr3.spanengine import same_span, span_of
from strategies import forms, nonzero_scalars, random_form, scalars

QQ, F5 = FieldSpec(0), FieldSpec(5)


def x(n, *ix):
    return {unit(n, i): 1 for i in ix}


def one(n):
    return poly.const(n)


def test_expand_examples():
    B12, B13 = enumerate_indices(1, 2), enumerate_indices(1, 3)
    assert expand({M((2, 0)): 1}, B12, QQ).coeffs == {0: 1}
    sq = poly.power(QQ, x(1, 0, 1), 2, 1)
    assert expand(sq, B12, QQ).coeffs == {0: 1, 1: 2, 2: 1}
    assert expand(poly.mul(QQ, poly.mul(QQ, x(1, 0), x(1, 1)), x(1, 0)), B13, QQ).coeffs == {1: 1}
    with pytest.raises(ValueError):
        expand({M((1, 0)): 1}, B12, QQ)


def test_q_of_examples():
    B = enumerate_indices(2, 2)
    assert not q_of(x(2, 1), x(2, 1), x(2, 0), enumerate_indices(2, 3), QQ)
    F01 = q_of(x(2, 0), x(2, 1), one(2), B, QQ)
    z = B.index_of
    assert F01 == QuadraticForm(QQ, 6, {(z(M((2, 0, 0))), z(M((0, 2, 0)))): 1, (z(M((1, 1, 0))),) * 2: -1})
    with pytest.raises(ValueError):
        q_of(x(2, 0), x(2, 1), x(2, 0), B, QQ)


@pytest.mark.parametrize("d", range(2, 9))
def test_rational_normal_curve_F_i(d):
    B = enumerate_indices(1, d)
    for i in range(d - 1):
        h = {M((d - 2 - i, i)): 1}
        assert q_of(x(1, 0), x(1, 1), h, B, QQ) == QuadraticForm(QQ, d + 1, {(i, i + 2): 1, (i + 1, i + 1): -1})


def test_gamma_plane_conic_case():
    G = gamma(2, 2, QQ)
    assert len(G) == 6 and [e.tag for e in G] == ["G11"] * 3 + ["G12"] * 3
    assert all(not e.is_zero and e.duplicate_of is None for e in G)
    assert span_of(QQ, 21, (q.as_vector() for q in G.forms())).dim == 6


def test_gamma_p3_quadric_case():
    G = gamma(3, 2, QQ)
    G22 = G.by_tag("G22")
    assert len(G22) == 3 and len(G) == 21 == gamma_size_bound(4, 1)
    assert [(e.s, e.t) for e in G22] == [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


@pytest.mark.parametrize("d", range(2, 12))
def test_gamma_rational_normal_curve_count(d):
    G = gamma(1, d, QQ)
    assert len(G) == comb(d, 2) == gamma_size_bound(2, d - 1)
    assert span_of(QQ, quad_dimension(d + 1), (q.as_vector() for q in G.forms())).dim == comb(d, 2)


def test_gamma_size_bound_examples():
    assert gamma_size_bound(4, 1) == 21 and gamma_size_bound(2, 1) == 1
    with pytest.raises(ValueError):
        gamma_size_bound(1, 1)


@pytest.mark.parametrize("n,d", [(1, 2), (1, 5), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_gamma_elements_are_rank3_ideal_members(n, d):
    G = gamma(n, d, QQ)
    assert len(G) <= gamma_size_bound(n + 1, comb(n + d - 2, n))
    for e in G:
        assert e.form.evaluate_monomial_map(G.basis) == {}
        assert e.form.rank() == (0 if e.is_zero else 3)
        if e.duplicate_of is not None:
            assert G.elements[e.duplicate_of].form == e.form
        s, t, h = e.polys(G.sections)
        assert q_of(s, t, h, G.basis, QQ) == e.form


def test_flattening_examples():
    assert flattening(1, 2, 1) == [[0, 1], [1, 2]]
    (m,) = minors2(1, 2, QQ)
    assert m == QuadraticForm(QQ, 3, {(0, 2): 1, (1, 1): -1})
    M4 = flattening(3, 2, 1)
    assert len(M4) == 4 and all(M4[i][j] == M4[j][i] for i in range(4) for j in range(4))
    S = span_of(QQ, 55, (q.as_vector() for q in minors2(2, 3, QQ)))
    T = span_of(QQ, 55, (q.as_vector() for q in binomial_generators(2, 3, QQ)))
    assert S.dim == 27 and same_span(S, T)
    with pytest.raises(ValueError):
        flattening(2, 3, 3)


# ---------------------------------------------------------------------------
# identity families for the Q-map, over QQ and F_5

CASES = [(1, 3), (2, 2), (2, 3), (3, 3)]


def triple(F, n, d):
    return st.tuples(forms(F, n, 1), forms(F, n, 1), forms(F, n, 1), forms(F, n, d - 2), forms(F, n, d - 2))


def add(F, *ps):
    out = {}
    for p in ps:
        out = poly.add(F, out, p)
    return out


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@pytest.mark.parametrize("n,d", CASES)
@settings(max_examples=60)
@given(data=st.data())
def test_basic_symmetries(F, n, d, data):
    B = enumerate_indices(n, d)
    s, t, _, h, _ = data.draw(triple(F, n, d))
    lam = data.draw(scalars(F))
    Q = lambda a, b, c: q_of(a, b, c, B, F)  # noqa: E731
    assert not Q(s, s, h)
    assert Q(s, t, h) == Q(t, s, h)
    assert Q(s, add(F, s, t), h) == Q(s, t, h)
    base = Q(s, t, h).scale(F.mul(lam, lam))
    assert Q(poly.scale(F, lam, s), t, h) == base == Q(s, t, poly.scale(F, lam, h))


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@pytest.mark.parametrize("n,d", CASES)
@settings(max_examples=60)
@given(data=st.data())
def test_bilinear_expansions(F, n, d, data):
    B = enumerate_indices(n, d)
    s, t, u, h, g = data.draw(triple(F, n, d))
    a, b = data.draw(scalars(F)), data.draw(scalars(F))
    Q = lambda p, q, r: q_of(p, q, r, B, F)  # noqa: E731
    c1, c2, c3 = F.sub(F.mul(a, a), F.mul(a, b)), F.sub(F.mul(b, b), F.mul(a, b)), F.mul(a, b)
    lhs = Q(s, add(F, poly.scale(F, a, t), poly.scale(F, b, u)), h)
    assert lhs == Q(s, t, h).scale(c1) + Q(s, u, h).scale(c2) + Q(s, add(F, t, u), h).scale(c3)
    lhs = Q(s, t, add(F, poly.scale(F, a, g), poly.scale(F, b, h)))
    assert lhs == Q(s, t, g).scale(c1) + Q(s, t, h).scale(c2) + Q(s, t, add(F, g, h)).scale(c3)


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@pytest.mark.parametrize("m", [3, 4, 5])
@settings(max_examples=40)
@given(data=st.data())
def test_multi_term_expansions(F, m, data):
    n, d = 2, 3
    B = enumerate_indices(n, d)
    Q = lambda p, q, r: q_of(p, q, r, B, F)  # noqa: E731
    s, t, h = data.draw(forms(F, n, 1)), data.draw(forms(F, n, 1)), data.draw(forms(F, n, 1))
    ts = [data.draw(forms(F, n, 1)) for _ in range(m)]
    gs = [data.draw(forms(F, n, d - 2)) for _ in range(m)]
    rhs = QuadraticForm.zero(F, len(B))
    for i, j in combinations(range(m), 2):
        rhs = rhs + Q(s, add(F, ts[i], ts[j]), h)
    for ti in ts:
        rhs = rhs - Q(s, ti, h).scale(m - 2)
    assert Q(s, add(F, *ts), h) == rhs
    rhs = QuadraticForm.zero(F, len(B))
    for i, j in combinations(range(m), 2):
        rhs = rhs + Q(s, t, add(F, gs[i], gs[j]))
    for gi in gs:
        rhs = rhs - Q(s, t, gi).scale(m - 2)
    assert Q(s, t, add(F, *gs)) == rhs


@pytest.mark.parametrize("F", [QQ, F5], ids=str)
@pytest.mark.parametrize("n,d", CASES)
@settings(max_examples=60)
@given(data=st.data())
def test_six_term_identity(F, n, d, data):
    B = enumerate_indices(n, d)
    s, t, u, h, _ = data.draw(triple(F, n, d))
    Q = lambda p, q, r: q_of(p, q, r, B, F)  # noqa: E731
    lhs = Q(add(F, s, u), add(F, t, u), h)
    rhs = (Q(s, u, h) + Q(t, u, h) + Q(add(F, s, u), t, h) + Q(add(F, t, u), s, h)
           - Q(s, t, h) - Q(add(F, s, t), u, h))
    assert lhs == rhs


@pytest.mark.parametrize("n,d", [(2, 3), (3, 3), (2, 4)])
def test_random_q_values_lie_in_gamma_span(n, d):
    rng = random.Random(n * 10 + d)
    G = gamma(n, d, QQ)
    S = span_of(QQ, quad_dimension(G.size), (q.as_vector() for q in G.forms(nonzero=True)))
    for _ in range(40):
        s, t, h = random_form(QQ, n, 1, rng), random_form(QQ, n, 1, rng), random_form(QQ, n, d - 2, rng)
        assert q_of(s, t, h, G.basis, QQ).as_vector() in S
