"""Verification drivers that turn the constructions into replayable certificates."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import permutations
from math import comb

import numpy as np

from . import poly
from .fieldcore import FieldSpec
from .multiindex import MultiIndex, enumerate_indices, monomials, unit
from .qmap import GeneratorSet, flattening, gamma, minors2, q_of
from .quadform import (LinearForm, QuadraticForm, binomial_generators, binomial_pairs,
                       product_of_linear, quad_dimension, veronese_quadric_dimension)
from .spanengine import SpanBasis, same_span, span_of

VERIFIED, REFUTED, INCONCLUSIVE = "verified", "refuted", "inconclusive"


class PreconditionError(ValueError):
    """The inputs do not satisfy the hypotheses of the claim being checked."""


@dataclass
class Certificate:
    claim: str
    status: str
    field: str
    payload: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    seed: int = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self) -> dict:
        return asdict(self)


def scalar_text(c) -> str:
    return str(c)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        cert = fn(*args, **kwargs)
        cert.wall_time = round(time.perf_counter() - t0, 6)
        return cert

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _no_char2(F: FieldSpec):
    if F.characteristic == 2:
        raise PreconditionError("characteristic 2 is excluded")


# ---------------------------------------------------------------------------
# spans of Gamma and of the binomials

def gamma_span(G: GeneratorSet, track: bool = False) -> SpanBasis:
    """Span of the nonzero, non-repeated elements of Gamma, labelled by element index."""
    S = SpanBasis(G.field, quad_dimension(G.size), track=track)
    for k, e in enumerate(G.elements):
        if e.is_zero or e.duplicate_of is not None:
            continue
        S.add(e.form.as_vector(), label=k)
    return S


def binomial_span(n: int, d: int, F: FieldSpec) -> SpanBasis:
    size = len(enumerate_indices(n, d))
    return span_of(F, quad_dimension(size), (q.as_vector() for q in binomial_generators(n, d, F)))


def vanishes_on_veronese(q: QuadraticForm, n: int, d: int) -> bool:
    return not q.evaluate_monomial_map(enumerate_indices(n, d))


def _rank_histogram(G: GeneratorSet) -> dict:
    hist = Counter(e.form.rank() for e in G.elements if not e.is_zero)
    return {str(r): hist[r] for r in sorted(hist)}


def _binomial_text(n, d, a, b) -> str:
    B = enumerate_indices(n, d)
    (i, j), (k, l) = a, b
    return f"{B[i].text()}*{B[j].text()} - {B[k].text()}*{B[l].text()}"


@_timed
def verify_qr3_veronese(n: int, d: int, F: FieldSpec) -> Certificate:
    """Gamma generates I(V_{n,d}): every nonzero element has rank 3 and the spans agree."""
    _no_char2(F)
    G = gamma(n, d, F)
    hist = _rank_histogram(G)
    SG = gamma_span(G)
    SQ = binomial_span(n, d, F)
    expected = veronese_quadric_dimension(n, d)
    inside = all(not SQ.reduce(e.form.as_vector()) for e in G.elements if not e.is_zero)
    payload = {
        "n": n, "d": d,
        "gamma_size": len(G),
        "gamma_nonzero": sum(1 for e in G.elements if not e.is_zero),
        "gamma_distinct": sum(1 for e in G.elements if not e.is_zero and e.duplicate_of is None),
        "gamma_size_bound": _bound(n, d),
        "rank_histogram": hist,
        "dims": {"span_gamma": SG.dim, "ideal_quadrics": SQ.dim},
        "dim_expected": expected,
        "gamma_inside_ideal": inside,
    }
    witnesses = []
    ranks_ok = set(hist) <= {"3"}
    if ranks_ok and inside and SG.dim == SQ.dim:
        status = VERIFIED
    else:
        status = REFUTED
        if not ranks_ok:
            bad = next(e for e in G.elements if not e.is_zero and e.form.rank() != 3)
            witnesses.append({"kind": "rank", "quadric": bad.form.text(G.basis),
                              "rank": bad.form.rank()})
        for a, b in binomial_pairs(n, d):
            q = QuadraticForm.from_terms(F, G.size, [(a, 1), (b, -1)])
            if SG.reduce(q.as_vector()):
                witnesses.append({"kind": "outside_span", "span": f"gamma({n},{d})",
                                  "quadric": _binomial_text(n, d, a, b)})
                break
    return Certificate(f"qr3-veronese(n={n},d={d})", status, str(F), payload, witnesses)


def _bound(n, d):
    from .qmap import gamma_size_bound
    return gamma_size_bound(n + 1, comb(n + d - 2, n))


@_timed
def verify_rnc(d: int, F: FieldSpec = FieldSpec(0)) -> Certificate:
    """The F_i and G'_{i,j} = G_{i,j} - F_i - F_j are independent and count binom(d, 2)."""
    if d < 2:
        raise PreconditionError(f"need d >= 2, got {d}")
    G = gamma(1, d, F)
    F_i = {e.h[0]: e.form for e in G.elements if len(e.h) == 1}
    forms = [F_i[i] for i in sorted(F_i)]
    for e in G.elements:
        if len(e.h) == 2:
            i, j = e.h
            forms.append(e.form - F_i[i] - F_i[j])
    size = G.size
    S = span_of(F, quad_dimension(size), (q.as_vector() for q in forms))
    target = veronese_quadric_dimension(1, d)
    SQ = binomial_span(1, d, F)
    full = S.dim == SQ.dim and same_span(S, SQ)
    ranks = Counter(e.form.rank() for e in G.elements)
    payload = {"d": d, "count": len(forms), "independent": S.dim,
               "binom_d_2": comb(d, 2), "dims": {"span_gamma": S.dim, "ideal_quadrics": target},
               "rank_histogram": {str(r): ranks[r] for r in sorted(ranks)}}
    ok = (len(forms) == S.dim == comb(d, 2) == target) and full and set(ranks) == {3}
    return Certificate(f"rnc(d={d})", VERIFIED if ok else REFUTED, str(F), payload)


# ---------------------------------------------------------------------------
# [I, J] relations

def bracket(basis, F: FieldSpec, terms) -> QuadraticForm:
    """sum c [I, J] for ``(c, I, J)`` triples of multi-indices in ``basis``."""
    pos = basis.position
    return QuadraticForm.from_terms(F, len(basis), [((pos[I], pos[J]), c) for c, I, J in terms])


# Relations between brackets [A, B] = z_A z_B, written as "left ~ right":
#   square-pair       [2e_i+I, 2e_j+I] ~ [e_i+e_j+I, e_i+e_j+I]
#   square-mixed      [2e_i+I, e_j+e_k+I] ~ [e_i+e_j+I, e_i+e_k+I]
#   cross-swap        [e_i+e_j+I, e_k+e_l+I] ~ [e_i+e_k+I, e_j+e_l+I]
#   square-pair-2     [2e_i+I, 2e_j+J] + [2e_j+I, 2e_i+J] ~ 2[e_i+e_j+I, e_i+e_j+J]
#   square-mixed-2    [2e_i+I, e_j+e_k+J] + [e_j+e_k+I, 2e_i+J]
#                         ~ [e_i+e_j+I, e_i+e_k+J] + [e_i+e_k+I, e_i+e_j+J]
#   cross-swap-2      [e_i+e_j+I, e_k+e_l+J] + [e_k+e_l+I, e_i+e_j+J]
#                         ~ [e_i+e_k+I, e_j+e_l+J] + [e_j+e_l+I, e_i+e_k+J]
#   double-exchange   [I, J] ~ [I-2e_0+e_1+e_2, J+2e_0-e_1-e_2]   (I_0 >= 3, J_1, J_2 >= 1)
#   single-exchange   [I, J] ~ [I-e_0+e_3, J+e_0-e_3]   (I_0, I_1, J_2, J_3 >= 1, I_1 or J_2 >= 2)
#   unit-pair         [I, J] ~ [K, L]   (I_0 = I_1 = K_0 = K_1 = 1, J_0 = J_1 = L_0 = L_1 = 0)
RELATION_KINDS = ("square-pair", "square-mixed", "cross-swap", "square-pair-2", "square-mixed-2",
                  "cross-swap-2", "double-exchange", "single-exchange", "unit-pair")
_ARITY = {"square-pair": 2, "square-mixed": 3, "cross-swap": 4,
          "square-pair-2": 2, "square-mixed-2": 3, "cross-swap-2": 4}


def relation_terms(kind: str, n: int, d: int, I=None, J=None, K=None, L=None, idx=()):
    """The left side minus the right side of a relation, as ``(coeff, A, B)`` triples.

    For the square/cross kinds, ``I``/``J`` live in A(n, d-2) and ``idx``
    holds the positions i, j, k, l.  The exchange kinds take ``I, J`` in
    A(n, d) and ``idx`` relabels positions 0..3; unit-pair takes
    ``I, J, K, L`` in A(n, d) with the same relabelling for positions 0 and 1.
    """
    e = lambda i: unit(n, i)  # noqa: E731
    if kind in _ARITY:
        arity = _ARITY[kind]
        if len(idx) != arity or len(set(idx)) != arity:
            raise PreconditionError(f"relation {kind} needs {arity} distinct positions, got {idx}")
        if any(not 0 <= i <= n for i in idx):
            raise PreconditionError(f"positions {idx} out of range for n={n}")
        if I is None or I.degree != d - 2 or len(I) != n + 1:
            raise PreconditionError(f"I must lie in A({n},{d - 2})")
        needs_J = kind in ("square-pair-2", "square-mixed-2", "cross-swap-2")
        if needs_J and (J is None or J.degree != d - 2 or len(J) != n + 1):
            raise PreconditionError(f"J must lie in A({n},{d - 2})")
        i, j = idx[0], idx[1]
        k = idx[2] if arity > 2 else None
        l = idx[3] if arity > 3 else None
        if kind == "square-pair":
            return [(1, e(i) + e(i) + I, e(j) + e(j) + I), (-1, e(i) + e(j) + I, e(i) + e(j) + I)]
        if kind == "square-mixed":
            return [(1, e(i) + e(i) + I, e(j) + e(k) + I), (-1, e(i) + e(j) + I, e(i) + e(k) + I)]
        if kind == "cross-swap":
            return [(1, e(i) + e(j) + I, e(k) + e(l) + I), (-1, e(i) + e(k) + I, e(j) + e(l) + I)]
        if kind == "square-pair-2":
            return [(1, e(i) + e(i) + I, e(j) + e(j) + J), (1, e(j) + e(j) + I, e(i) + e(i) + J),
                    (-2, e(i) + e(j) + I, e(i) + e(j) + J)]
        if kind == "square-mixed-2":
            return [(1, e(i) + e(i) + I, e(j) + e(k) + J), (1, e(j) + e(k) + I, e(i) + e(i) + J),
                    (-1, e(i) + e(j) + I, e(i) + e(k) + J), (-1, e(i) + e(k) + I, e(i) + e(j) + J)]
        return [(1, e(i) + e(j) + I, e(k) + e(l) + J), (1, e(k) + e(l) + I, e(i) + e(j) + J),
                (-1, e(i) + e(k) + I, e(j) + e(l) + J), (-1, e(j) + e(l) + I, e(i) + e(k) + J)]

    idx = tuple(idx) or tuple(range(min(4, n + 1)))
    for X in (I, J) + ((K, L) if kind == "unit-pair" else ()):
        if X is None or X.degree != d or len(X) != n + 1:
            raise PreconditionError(f"multi-indices must lie in A({n},{d})")
    if kind == "double-exchange":
        a, b, c = idx[:3]
        if not (I[a] >= 3 and J[b] >= 1 and J[c] >= 1):
            raise PreconditionError("needs I_0 >= 3, J_1 >= 1, J_2 >= 1")
        shift = {a: -2, b: 1, c: 1}
        return [(1, I, J), (-1, _shift(I, shift), _shift(J, {k: -v for k, v in shift.items()}))]
    if kind == "single-exchange":
        if n < 3:
            raise PreconditionError("needs n >= 3")
        a, b, c, g = idx[:4]
        if not (I[a] >= 1 and I[b] >= 1 and J[c] >= 1 and J[g] >= 1 and (I[b] >= 2 or J[c] >= 2)):
            raise PreconditionError("needs I_0, I_1, J_2, J_3 >= 1 and (I_1 >= 2 or J_2 >= 2)")
        return [(1, I, J), (-1, _shift(I, {a: -1, g: 1}), _shift(J, {a: 1, g: -1}))]
    if kind == "unit-pair":
        a, b = idx[:2]
        if not (I[a] == I[b] == K[a] == K[b] == 1 and J[a] == J[b] == L[a] == L[b] == 0):
            raise PreconditionError("needs I_0 = I_1 = K_0 = K_1 = 1 and J_0 = J_1 = L_0 = L_1 = 0")
        if I + J != K + L:
            raise PreconditionError("needs I + J = K + L")
        return [(1, I, J), (-1, K, L)]
    raise PreconditionError(f"unknown relation kind {kind!r}")


def _shift(I: MultiIndex, delta: dict) -> MultiIndex:
    return MultiIndex(a + delta.get(k, 0) for k, a in enumerate(I))


class GammaContext:
    """Gamma(n, d) over a field with a tracked span, built once and reused."""

    def __init__(self, n: int, d: int, F: FieldSpec):
        self.n, self.d, self.field = n, d, F
        self.gamma = gamma(n, d, F)
        self.span = gamma_span(self.gamma, track=True)

    def certificate_for(self, q: QuadraticForm, target_id=None):
        return self.span.contains(q.as_vector(), target_id)

    def replay(self, coefficients: dict, q: QuadraticForm) -> bool:
        """Recombine Gamma elements with ``coefficients`` and compare with ``q`` exactly."""
        acc = QuadraticForm.zero(self.field, self.gamma.size)
        for k, c in coefficients.items():
            acc = acc + self.gamma.elements[int(k)].form.scale(c)
        return acc == q


def verify_relation(kind: str, n: int, d: int, F: FieldSpec, I=None, J=None, K=None, L=None,
                    idx=(), force: bool = False, ctx: GammaContext = None) -> Certificate:
    """Check one relation instance by span membership in Gamma(n, d), with a certificate.

    The cross-swap kinds are derived by dividing by 3; over F_3 they
    are refused unless ``force`` is set, in which case the outcome is simply
    reported.
    """
    t0 = time.perf_counter()
    _no_char2(F)
    if F.characteristic == 3 and kind in ("cross-swap", "cross-swap-2") and not force:
        raise PreconditionError(f"relation {kind} needs char != 3")
    to_mi = lambda X: None if X is None else MultiIndex(X)  # noqa: E731
    I, J, K, L = map(to_mi, (I, J, K, L))
    terms = relation_terms(kind, n, d, I, J, K, L, tuple(idx))
    if ctx is None or (ctx.n, ctx.d, ctx.field) != (n, d, F):
        ctx = GammaContext(n, d, F)
    q = bracket(ctx.gamma.basis, F, terms)
    cert = ctx.certificate_for(q, kind)
    payload = {"kind": kind, "n": n, "d": d, "idx": list(idx),
               "I": list(I) if I is not None else None, "J": list(J) if J is not None else None,
               "K": list(K) if K is not None else None, "L": list(L) if L is not None else None,
               "in_ideal": vanishes_on_veronese(q, n, d)}
    text = q.text(ctx.gamma.basis)
    if cert is not None:
        w = {"kind": "membership", "span": f"gamma({n},{d})", "target": text,
             "coefficients": {str(k): scalar_text(c) for k, c in sorted(cert.coefficients.items())}}
        status = VERIFIED
    else:
        w = {"kind": "outside_span", "span": f"gamma({n},{d})", "quadric": text}
        status = REFUTED
    out = Certificate(f"relation-{kind}", status, str(F), payload, [w])
    out.wall_time = round(time.perf_counter() - t0, 6)
    return out


def relation_instances(kind: str, n: int, d: int, sample: int = 20, seed: int = 0):
    """Every valid instance of a relation with I, J from a fixed sample of their index set.

    Yields keyword dicts for :func:`verify_relation`.
    """
    rng = random.Random(seed)
    if kind in _ARITY:
        pool = list(monomials(n, d - 2))
        pick = pool if len(pool) <= sample else rng.sample(pool, sample)
        arity = _ARITY[kind]
        if arity > n + 1:
            return
        needs_J = kind in ("square-pair-2", "square-mixed-2", "cross-swap-2")
        for idx in permutations(range(n + 1), arity):
            for I in pick:
                for J in (pick if needs_J else [None]):
                    yield {"I": I, "J": J, "idx": idx}
        return
    pool = list(monomials(n, d))
    if kind == "double-exchange":
        Is = [I for I in pool if I[0] >= 3]
        Js = [J for J in pool if J[1] >= 1 and J[2] >= 1]
        pairs = [(I, J) for I in Is for J in Js]
    elif kind == "single-exchange":
        if n < 3:
            return
        pairs = [(I, J) for I in pool for J in pool
                 if I[0] >= 1 and I[1] >= 1 and J[2] >= 1 and J[3] >= 1 and (I[1] >= 2 or J[2] >= 2)]
    elif kind == "unit-pair":
        Is = [I for I in pool if I[0] == I[1] == 1]
        Js = [J for J in pool if J[0] == J[1] == 0]
        quads = []
        for I in Is:
            for J in Js:
                w = I + J
                for K in Is:
                    L = w - K
                    if L is not None and L[0] == L[1] == 0 and (K, L) != (I, J):
                        quads.append({"I": I, "J": J, "K": K, "L": L})
        if len(quads) > sample * sample:
            quads = rng.sample(quads, sample * sample)
        yield from quads
        return
    else:
        raise PreconditionError(f"unknown relation kind {kind!r}")
    if len(pairs) > sample * sample:
        pairs = rng.sample(pairs, sample * sample)
    for I, J in pairs:
        yield {"I": I, "J": J}


@_timed
def verify_relation_suite(n: int, d: int, F: FieldSpec, kinds=RELATION_KINDS,
                          sample: int = 20, seed: int = 0) -> Certificate:
    """Run every relation instance from :func:`relation_instances` against one Gamma span."""
    ctx = GammaContext(n, d, F)
    counts, failures = {}, []
    for kind in kinds:
        if F.characteristic == 3 and kind in ("cross-swap", "cross-swap-2"):
            continue
        total = 0
        for inst in relation_instances(kind, n, d, sample, seed):
            c = verify_relation(kind, n, d, F, ctx=ctx, **inst)
            total += 1
            if not c.ok:
                failures.append(c.witnesses[0] | {"relation": kind})
        counts[kind] = total
    status = VERIFIED if not failures else REFUTED
    return Certificate(f"relations(n={n},d={d})", status, str(F),
                       {"n": n, "d": d, "instances": counts, "failures": len(failures)},
                       failures[:5], seed=seed)


@_timed
def verify_equiv_all(n: int, d: int, F: FieldSpec, guard: int = 10 ** 7) -> Certificate:
    """[I, J] ~ [K, L] for every I + J = K + L, checked pair by pair."""
    _no_char2(F)
    m = comb(n + d, n)
    if quad_dimension(m) ** 2 // 2 > guard:
        raise PreconditionError(f"instance too large: ~{quad_dimension(m) ** 2 // 2} pairs > guard {guard}")
    G = gamma(n, d, F)
    S = gamma_span(G)
    checked, failing = 0, []
    for a, b in binomial_pairs(n, d):
        checked += 1
        q = QuadraticForm.from_terms(F, G.size, [(a, 1), (b, -1)])
        if S.reduce(q.as_vector()):
            failing.append((a, b))
    witnesses = []
    B = G.basis
    for a, b in failing[:1]:
        witnesses.append({"kind": "outside_span", "span": f"gamma({n},{d})",
                          "quadric": _binomial_text(n, d, a, b),
                          "pair": [[list(B[a[0]]), list(B[a[1]])], [list(B[b[0]]), list(B[b[1]])]]})
    return Certificate(f"equiv-all(n={n},d={d})", REFUTED if failing else VERIFIED, str(F),
                       {"n": n, "d": d, "pairs_checked": checked, "pairs_failing": len(failing)},
                       witnesses)


# ---------------------------------------------------------------------------
# projective linear substitutions

def is_invertible(sigma, F: FieldSpec) -> bool:
    k = len(sigma)
    S = span_of(F, k, ({j: F.convert(x) for j, x in enumerate(row)} for row in sigma))
    return S.dim == k


def pgl_substitute(sigma, q: QuadraticForm, n: int, d: int) -> QuadraticForm:
    """Image of q under z_I -> f((sigma x)^I), the action induced on P^N."""
    F = q.field
    if len(sigma) != n + 1 or any(len(r) != n + 1 for r in sigma):
        raise ValueError(f"substitution must be {(n + 1)}x{(n + 1)}")
    if not is_invertible(sigma, F):
        raise ValueError("substitution matrix is singular")
    B = enumerate_indices(n, d)
    images = {}

    def image(i):
        if i not in images:
            g = poly.substitute_linear(F, {B[i]: 1}, sigma)
            images[i] = LinearForm._raw(F, len(B), {B.position[m]: c for m, c in g.items()})
        return images[i]

    out = QuadraticForm.zero(F, len(B))
    for (i, j), c in q.coeffs.items():
        out = out + product_of_linear(image(i), image(j)).scale(c)
    return out


def random_invertible(n: int, F: FieldSpec, rng: random.Random):
    while True:
        sigma = [[F.random(rng) for _ in range(n + 1)] for _ in range(n + 1)]
        if is_invertible(sigma, F):
            return sigma


def random_form(n: int, deg: int, F: FieldSpec, rng: random.Random) -> dict:
    """Dense random homogeneous polynomial of the given degree."""
    out = {}
    for m in monomials(n, deg):
        c = F.random(rng)
        if c:
            out[m] = c
    return out


@_timed
def pgl_check(n: int, d: int, F: FieldSpec, samples: int = 200, seed: int = 0) -> Certificate:
    """sigma(Q(s, t, h)) == Q(sigma s, sigma t, sigma h), and the rank is unchanged."""
    rng = random.Random(seed)
    B = enumerate_indices(n, d)
    failures = []
    ranks = Counter()
    for k in range(samples):
        sigma = random_invertible(n, F, rng)
        s, t, h = random_form(n, 1, F, rng), random_form(n, 1, F, rng), random_form(n, d - 2, F, rng)
        q = q_of(s, t, h, B, F)
        lhs = pgl_substitute(sigma, q, n, d)
        rhs = q_of(*(poly.substitute_linear(F, g, sigma) for g in (s, t, h)), B, F)
        r0, r1 = q.rank(), lhs.rank()
        ranks[r0] += 1
        if lhs != rhs or r0 != r1:
            failures.append({"kind": "pgl", "sample": k, "sigma": [[scalar_text(x) for x in r] for r in sigma],
                             "commutes": lhs == rhs, "rank_before": r0, "rank_after": r1})
    return Certificate(f"pgl-commutation(n={n},d={d})", VERIFIED if not failures else REFUTED, str(F),
                       {"n": n, "d": d, "samples": samples, "failures": len(failures),
                        "rank_histogram": {str(r): ranks[r] for r in sorted(ranks)}},
                       failures[:3], seed=seed)


# ---------------------------------------------------------------------------
# rank-3 statistics over F_p

def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of square matrices with entries in [0, p)."""
    A = np.array(mats, dtype=np.int64) % p
    b, m, _ = A.shape
    r = np.zeros(b, dtype=np.int64)
    rows = np.arange(m)
    inv_table = np.zeros(p, dtype=np.int64)
    inv_table[1:] = [pow(x, -1, p) for x in range(1, p)]
    ar = np.arange(b)
    for c in range(m):
        mask = (A[:, :, c] != 0) & (rows[None, :] >= r[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(mask, axis=1)
        sel = ar[has]
        pr, rr = piv[has], r[has]
        prow = A[sel, pr, :].copy()
        A[sel, pr, :] = A[sel, rr, :]
        prow = (prow * inv_table[prow[:, c]][:, None]) % p
        A[sel, rr, :] = prow
        factors = A[sel, :, c].copy()
        factors[np.arange(len(sel)), rr] = 0
        A[sel] = (A[sel] - factors[:, :, None] * prow[:, None, :]) % p
        r[has] += 1
    return r


def _sym_matrices(vectors: np.ndarray, size: int, p: int) -> np.ndarray:
    """Symmetric matrices (entries in F_p) of quadrics given as pair-coordinate vectors."""
    from .quadform import pair_list
    half = pow(2, -1, p)
    pairs = pair_list(size)
    M = np.zeros((vectors.shape[0], size, size), dtype=np.int64)
    for k, (i, j) in enumerate(pairs):
        col = vectors[:, k]
        if not col.any():
            continue
        if i == j:
            M[:, i, i] = col
        else:
            v = (col * half) % p
            M[:, i, j] = v
            M[:, j, i] = v
    return M


def _proportional(a: dict, b: dict, F: FieldSpec) -> bool:
    if not a or not b:
        return not a and not b
    if set(a) != set(b):
        return False
    k = next(iter(a))
    lam = F.div(a[k], b[k])
    return all(a[c] == F.mul(lam, b[c]) for c in a)


@_timed
def rank3_search(span: SpanBasis, size: int, samples: int, seed: int, reference: QuadraticForm = None,
                 chunk: int = 50_000, max_hits: int = 50) -> Certificate:
    """Sample uniform elements of a quadric span over F_p and tally their ranks.

    Every rank <= 3 hit among nonzero samples is re-ranked exactly, re-tested
    under random nonzero scalings, and compared with ``reference`` (if given)
    for proportionality.  Statistical only: absence of hits proves nothing.
    """
    F = span.field
    p = F.characteristic
    if p == 0:
        raise PreconditionError("rank3_search needs a prime field")
    if span.dim == 0:
        raise PreconditionError("empty span")
    rng = np.random.default_rng(seed)
    pyrng = random.Random(seed)
    nd = quad_dimension(size)
    basis = np.zeros((span.dim, nd), dtype=np.int64)
    for r, row in enumerate(span.vectors()):
        for k, c in row.items():
            basis[r, k] = c
    hist = Counter()
    hits, hit_count, zero_samples = [], 0, 0
    all_proportional = True
    scalings_ok = True
    done = 0
    while done < samples:
        b = min(chunk, samples - done)
        coeffs = rng.integers(0, p, size=(b, span.dim), dtype=np.int64)
        vecs = (coeffs @ basis) % p
        ranks = batch_rank_mod_p(_sym_matrices(vecs, size, p), p)
        for r, c in zip(*np.unique(ranks, return_counts=True)):
            hist[int(r)] += int(c)
        zero = ~vecs.any(axis=1)
        zero_samples += int(zero.sum())
        for k in np.nonzero((ranks <= 3) & ~zero)[0]:
            v = {int(j): int(vecs[k, j]) for j in np.nonzero(vecs[k])[0]}
            q = QuadraticForm.from_vector(F, size, v)
            r_exact = q.rank()
            scaled = [q.scale(pyrng.randrange(1, p)).rank() for _ in range(3)]
            scalings_ok &= all(s == r_exact for s in scaled)
            prop = None if reference is None else _proportional(v, reference.as_vector(), F)
            if prop is False:
                all_proportional = False
            hit_count += 1
            if len(hits) < max_hits:
                hits.append({"kind": "rank_hit", "rank": r_exact, "proportional_to_reference": prop,
                             "coefficients": [int(x) for x in coeffs[k]]})
        done += b
    payload = {"samples": samples, "dim": span.dim, "field_size": p,
               "rank_histogram": {str(r): hist[r] for r in sorted(hist)},
               "zero_samples": zero_samples, "hits": hit_count,
               "all_hits_proportional": all_proportional if reference is not None else None,
               "scalings_consistent": scalings_ok}
    status = VERIFIED if (all_proportional and scalings_ok) else REFUTED
    return Certificate("rank3-search", status, str(F), payload, hits, seed=seed)


# ---------------------------------------------------------------------------
# inclusion maps between instances

def map_quadric(q: QuadraticForm, src, dst, fn) -> QuadraticForm:
    """Relabel coordinates of ``q`` through a map of multi-indices ``fn``."""
    pos = dst.position
    return QuadraticForm._raw(q.field, len(dst), {
        tuple(sorted((pos[fn(src[i])], pos[fn(src[j])]))): c for (i, j), c in q.coeffs.items()})


@_timed
def inclusion_check(kind: str, n: int, d: int, k: int, F: FieldSpec = FieldSpec(0)) -> Certificate:
    """iota_k: Gamma(n-1, d) -> Gamma(n, d), or delta_k: Gamma(n, d-1) -> Gamma(n, d).

    ``n`` and ``d`` describe the target instance.
    """
    if kind == "iota":
        if n < 2 or not 0 <= k <= n:
            raise PreconditionError(f"iota_{k} needs n >= 2 and 0 <= k <= n")
        src_n, src_d = n - 1, d
        fn = lambda I: I.insert_zero(k)  # noqa: E731
    elif kind == "delta":
        if d < 3 or not 0 <= k <= n:
            raise PreconditionError(f"delta_{k} needs d >= 3 and 0 <= k <= n")
        src_n, src_d = n, d - 1
        fn = lambda I: I.add_unit(k)  # noqa: E731
    else:
        raise PreconditionError(f"unknown inclusion {kind!r}")
    small = gamma(src_n, src_d, F)
    big = gamma(n, d, F)
    S = gamma_span(big)
    big_forms = {frozenset(e.form.coeffs.items()) for e in big.elements}
    in_span = in_gamma = 0
    for e in small.elements:
        img = map_quadric(e.form, small.basis, big.basis, fn)
        in_span += not S.reduce(img.as_vector())
        in_gamma += frozenset(img.coeffs.items()) in big_forms
    total = len(small)
    payload = {"map": f"{kind}_{k}", "source": [src_n, src_d], "target": [n, d],
               "elements": total, "in_span": in_span, "in_gamma": in_gamma}
    return Certificate(f"inclusion-{kind}_{k}", VERIFIED if in_span == total else REFUTED, str(F), payload)


# ---------------------------------------------------------------------------
# characteristic 3, n = 3

def r_quadrics(F: FieldSpec):
    """R_1, R_2, R_3 on P^9 (n = 3, d = 2)."""
    B = enumerate_indices(3, 2)
    z = lambda s: MultiIndex(int(c) for c in s)  # noqa: E731
    br = lambda a, b, c, e: bracket(B, F, [(1, z(a), z(b)), (-1, z(c), z(e))])  # noqa: E731
    return (br("1100", "0011", "1010", "0101"), br("1100", "0011", "1001", "0110"),
            br("1010", "0101", "1001", "0110"))


def h_prime(G: GeneratorSet, i, j, k, l) -> QuadraticForm:
    """H'_{i,j,k,l}: H_{i,j,k,l} minus its Gamma_11/Gamma_12 part, for n = 3, d = 2."""
    F = G.field
    B = G.basis
    x = lambda *ix: {unit(3, a): 1 for a in ix}  # noqa: E731
    one = poly.const(3)
    Q = lambda s, t: q_of(s, t, one, B, F)  # noqa: E731
    H = Q(x(i, j), x(k, l))
    part = (Q(x(i, j), x(k)) + Q(x(i, j), x(l)) + Q(x(k, l), x(i)) + Q(x(k, l), x(j))
            - Q(x(i), x(k)) - Q(x(i), x(l)) - Q(x(j), x(k)) - Q(x(j), x(l)))
    return H - part


@_timed
def char3_analysis(F: FieldSpec = FieldSpec(3), samples: int = 0, seed: int = 0) -> Certificate:
    """The failure of Gamma to generate I(V_{3,2}) in characteristic 3.

    Checks the H' relations exactly, dim span Gamma = 19 < 20, that R_1 is
    outside the span and, with ``samples > 0``, that sampled rank-3 elements
    of I(V_{3,2})_2 fall inside span Gamma.
    """
    G = gamma(3, 2, F)
    R1, R2, R3 = r_quadrics(F)
    H1, H2, H3 = h_prime(G, 0, 1, 2, 3), h_prime(G, 0, 2, 1, 3), h_prime(G, 0, 3, 1, 2)
    relations = {
        "H'0123=2R1+2R2": H1 == R1.scale(2) + R2.scale(2),
        "H'0213=-4R1+2R2": H2 == R1.scale(-4) + R2.scale(2),
        "H'0312=2R1-4R2": H3 == R1.scale(2) + R2.scale(-4),
        "R3=-R1+R2": R3 == R2 - R1,
        "H'0123+H'0213+H'0312=0": not (H1 + H2 + H3),
        "H' all equal": H1 == H2 == H3,
    }
    S = gamma_span(G)
    g11_12 = sum(1 for e in G.elements if e.tag in ("G11", "G12"))
    outside = bool(S.reduce(R1.as_vector()))
    payload = {"relations": relations, "gamma_11_12": g11_12, "dim_span_gamma": S.dim,
               "dim_ideal_quadrics": veronese_quadric_dimension(3, 2), "R1_outside_span": outside}
    # the three H' coincide only in characteristic 3
    expected = {k: (F.characteristic == 3 if k == "H' all equal" else True) for k in relations}
    ok = relations == expected and S.dim == 19 and outside
    witnesses = [{"kind": "outside_span", "span": "gamma(3,2)", "quadric": R1.text(G.basis)}] if outside else []
    if samples and F.characteristic == 3:
        SQ = binomial_span(3, 2, F)
        rep = rank3_search(SQ, G.size, samples, seed)
        stray = [h for h in rep.witnesses if h["rank"] == 3
                 and S.reduce(_combine(SQ, h["coefficients"]))]
        payload["sampled_rank3_hits"] = rep.payload["hits"]
        payload["sampled_hits_outside_span"] = len(stray)
        payload["sampled_rank_histogram"] = rep.payload["rank_histogram"]
        ok = ok and not stray
    return Certificate("char3-failure(n=3,d=2)", VERIFIED if ok else REFUTED, str(F), payload, witnesses,
                       seed=seed if samples else None)


def _combine(span: SpanBasis, coeffs) -> dict:
    F = span.field
    out = {}
    for c, row in zip(coeffs, span.vectors()):
        for k, x in row.items():
            out[k] = F.add(out.get(k, 0), F.mul(c, x))
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# determinantal presentation

@_timed
def verify_flattening(n: int, d: int, F: FieldSpec = FieldSpec(0), a: int = 1) -> Certificate:
    """span(2-minors of the (a, d-a) flattening) == span(binomials)."""
    M = minors2(n, d, F, a)
    size = len(enumerate_indices(n, d))
    SM = span_of(F, quad_dimension(size), (q.as_vector() for q in M))
    SQ = binomial_span(n, d, F)
    ranks = Counter(q.rank() for q in M if q)
    equal = same_span(SM, SQ)
    payload = {"n": n, "d": d, "split": [a, d - a], "shape": [len(flattening(n, d, a)), len(flattening(n, d, a)[0])],
               "minors": len(M), "dims": {"span_minors": SM.dim, "ideal_quadrics": SQ.dim},
               "rank_histogram": {str(r): ranks[r] for r in sorted(ranks)}}
    return Certificate(f"flattening(n={n},d={d},a={a})", VERIFIED if equal else REFUTED, str(F), payload)
