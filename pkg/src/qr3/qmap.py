"""Rank-3 quadrics from triples of sections, and the featured generating set Gamma.

For the Veronese embedding of P^n by degree-d forms, split a degree-d form
as (linear)^2 * (degree d-2).  Given linear forms s, t and a form h of
degree d-2,

    Q(s, t, h) = f(s^2 h) * f(t^2 h) - f(s t h)^2

where f sends a degree-d polynomial sum c_I x^I to the linear form
sum c_I z_I.  Q(s, t, h) vanishes on the Veronese variety and has rank 0
or 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from . import poly
from .fieldcore import FieldSpec
from .multiindex import CoordinateBasis, enumerate_indices, monomials, unit
from .quadform import LinearForm, QuadraticForm, product_of_linear


@dataclass(frozen=True)
class AmbientSections:
    """Monomial bases for the linear sections (x_0..x_n) and the degree-(d-2) sections."""

    n: int
    d: int
    basis_L1: tuple = field(repr=False)
    basis_L2: tuple = field(repr=False)

    @property
    def p(self) -> int:
        return len(self.basis_L1)

    @property
    def q(self) -> int:
        return len(self.basis_L2)


def sections(n: int, d: int) -> AmbientSections:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    L1 = tuple(unit(n, i) for i in range(n + 1))
    L2 = monomials(n, d - 2)
    return AmbientSections(n, d, L1, L2)


def expand(g: dict, basis: CoordinateBasis, field: FieldSpec) -> LinearForm:
    """The linear form sum c_I z_I for the degree-d form g = sum c_I x^I."""
    pos = basis.position
    coeffs = {}
    for m, c in g.items():
        if m.degree != basis.d or len(m) != basis.n + 1:
            raise ValueError(f"term x^{tuple(m)} is not of degree {basis.d} in {basis.n + 1} variables")
        c = field.convert(c)
        if c:
            coeffs[pos[m]] = c
    return LinearForm._raw(field, len(basis), coeffs)


def q_of(s: dict, t: dict, h: dict, basis: CoordinateBasis, field: FieldSpec) -> QuadraticForm:
    """Q(s, t, h) for linear forms s, t and a form h of degree d-2 (polynomials in x)."""
    for name, g, deg in (("s", s, 1), ("t", t, 1), ("h", h, basis.d - 2)):
        if g and not poly.is_homogeneous_of(g, deg):
            raise ValueError(f"{name} must be homogeneous of degree {deg}")
    F = field
    ssh = expand(poly.mul(F, poly.mul(F, s, s), h), basis, F)
    tth = expand(poly.mul(F, poly.mul(F, t, t), h), basis, F)
    sth = expand(poly.mul(F, poly.mul(F, s, t), h), basis, F)
    return product_of_linear(ssh, tth) - product_of_linear(sth, sth)


def q_from_factors(A: LinearForm, B: LinearForm, C: LinearForm) -> QuadraticForm:
    return product_of_linear(A, B) - product_of_linear(C, C)


@dataclass
class GammaElement:
    tag: str            # "G11", "G12" or "G22"
    s: tuple            # indices of the linear sections summed into s
    t: tuple
    h: tuple            # indices of the degree-(d-2) sections summed into h
    form: QuadraticForm
    duplicate_of: int = None

    @property
    def is_zero(self) -> bool:
        return not self.form

    def describe(self, secs: AmbientSections) -> str:
        def lin(ix):
            return "+".join(f"x{i}" for i in ix)

        def deg(ix):
            terms = []
            for k in ix:
                m = secs.basis_L2[k]
                f = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
                terms.append(f or "1")
            return "+".join(terms)

        return f"Q({lin(self.s)}, {lin(self.t)}, {deg(self.h)})"

    def polys(self, secs: AmbientSections):
        """The (s, t, h) polynomials this element was built from."""
        s = {secs.basis_L1[i]: 1 for i in self.s}
        t = {secs.basis_L1[i]: 1 for i in self.t}
        h = {secs.basis_L2[k]: 1 for k in self.h}
        return s, t, h


@dataclass
class GeneratorSet:
    n: int
    d: int
    field: FieldSpec
    sections: AmbientSections = field(repr=False)
    basis: CoordinateBasis = field(repr=False)
    elements: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def forms(self, nonzero: bool = False) -> list:
        return [e.form for e in self.elements if not (nonzero and e.is_zero)]

    def by_tag(self, tag: str) -> list:
        return [e for e in self.elements if e.tag == tag]

    @property
    def size(self) -> int:
        return len(self.basis)


def delta1(p: int):
    return [(i, j) for i in range(p) for j in range(i + 1, p)]


def delta2(p: int):
    return [(i, j, k) for (i, j) in delta1(p) for k in range(p) if k not in (i, j)]


def delta3(p: int):
    pairs = delta1(p)
    return [(i, j, k, l) for (i, j) in pairs for (k, l) in pairs if i < k and j not in (k, l)]


def h_index_set(q: int):
    return [(k,) for k in range(q)] + [(a, b) for a, b in combinations(range(q), 2)]


def gamma(n: int, d: int, field: FieldSpec) -> GeneratorSet:
    """Gamma = Gamma_11 u Gamma_12 u Gamma_22 for (O(1), O(d-2)) on P^n.

    Zero elements and repeated forms are kept; repeats point at their
    first occurrence through ``duplicate_of``.
    """
    if field.characteristic == 2:
        raise ValueError("characteristic 2 is not supported")
    secs = sections(n, d)
    B = enumerate_indices(n, d)
    F = field
    p = secs.p
    L2 = secs.basis_L2
    mon_pos = B.position

    # f(x_a x_b h) as a linear form, for monomial h; sums are assembled by linearity
    cache = {}

    def f_lin(a, b, hs):
        key = (a, b, hs)
        if key not in cache:
            coeffs = {}
            for k in hs:
                m = L2[k].add_unit(a).add_unit(b)
                i = mon_pos[m]
                coeffs[i] = F.add(coeffs.get(i, 0), 1)
            cache[key] = LinearForm._raw(F, len(B), {i: c for i, c in coeffs.items() if c})
        return cache[key]

    def f_prod(S, T, hs):
        out = None
        for a in S:
            for b in T:
                lf = f_lin(min(a, b), max(a, b), hs)
                out = lf if out is None else out + lf
        return out

    def build(S, T, hs):
        return product_of_linear(f_prod(S, S, hs), f_prod(T, T, hs)) - product_of_linear(
            f_prod(S, T, hs), f_prod(S, T, hs))

    H = h_index_set(secs.q)
    elements = []
    seen = {}
    for tag, tuples in (("G11", [((i,), (j,)) for i, j in delta1(p)]),
                        ("G12", [((i, j), (k,)) for i, j, k in delta2(p)]),
                        ("G22", [((i, j), (k, l)) for i, j, k, l in delta3(p)])):
        for S, T in tuples:
            for hs in H:
                form = build(S, T, hs)
                key = frozenset(form.coeffs.items())
                dup = seen.setdefault(key, len(elements))
                elements.append(GammaElement(tag, S, T, hs, form,
                                             None if dup == len(elements) else dup))
    return GeneratorSet(n, d, F, secs, B, elements)


def gamma_size_bound(p: int, q: int) -> int:
    if p < 2 or q < 1:
        raise ValueError("need p >= 2 and q >= 1")
    return comb(comb(p, 2) + 1, 2) * comb(q + 1, 2)


def flattening(n: int, d: int, a: int = 1):
    """Matrix of coordinate positions z_{I+J}, rows A(n, a), columns A(n, d-a)."""
    if not 1 <= a < d:
        raise ValueError(f"split degree {a} must satisfy 1 <= a < {d}")
    B = enumerate_indices(n, d)
    rows = monomials(n, a)
    cols = monomials(n, d - a)
    return [[B.position[I + J] for J in cols] for I in rows]


def minors2(n: int, d: int, field: FieldSpec, a: int = 1) -> list:
    """All 2x2 minors of the flattening as quadrics (zero minors included)."""
    M = flattening(n, d, a)
    size = comb(n + d, n)
    out = []
    for r1, r2 in combinations(range(len(M)), 2):
        for c1, c2 in combinations(range(len(M[0])), 2):
            out.append(QuadraticForm.from_terms(field, size, [((M[r1][c1], M[r2][c2]), 1),
                                                              ((M[r1][c2], M[r2][c1]), -1)]))
    return out
