"""Sparse polynomials in x_0..x_n as ``{MultiIndex: scalar}`` dicts.

Scalars are raw field values (see :mod:`qr3.fieldcore`).  Zero coefficients
are never stored.
"""

from __future__ import annotations

from collections import defaultdict

from .fieldcore import FieldSpec
from .multiindex import MultiIndex, unit


def var(n: int, i: int) -> dict:
    return {unit(n, i): 1}


def const(n: int, c=1) -> dict:
    return {MultiIndex((0,) * (n + 1)): c} if c else {}


def monomial(I) -> dict:
    return {MultiIndex(I): 1}


def add(F: FieldSpec, a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = F.add(out.get(m, 0), c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def lincomb(F: FieldSpec, terms) -> dict:
    """Sum of ``c * poly`` over ``(c, poly)`` pairs."""
    acc = defaultdict(int)
    for c, p in terms:
        for m, v in p.items():
            acc[m] = F.add(acc[m], F.mul(c, v))
    return {m: v for m, v in acc.items() if v}


def scale(F: FieldSpec, c, a: dict) -> dict:
    if not c:
        return {}
    return {m: F.mul(c, v) for m, v in a.items()}


def mul(F: FieldSpec, a: dict, b: dict) -> dict:
    acc = defaultdict(int)
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            acc[m] = F.add(acc[m], F.mul(c1, c2))
    return {m: v for m, v in acc.items() if v}


def power(F: FieldSpec, a: dict, e: int, n: int) -> dict:
    out = const(n)
    for _ in range(e):
        out = mul(F, out, a)
    return out


def degree(a: dict):
    """Common total degree, or ``None`` for the zero polynomial; raises if inhomogeneous."""
    degs = {m.degree for m in a}
    if len(degs) > 1:
        raise ValueError(f"inhomogeneous polynomial (degrees {sorted(degs)})")
    return degs.pop() if degs else None


def is_homogeneous_of(a: dict, d: int) -> bool:
    return all(m.degree == d for m in a)


def substitute_linear(F: FieldSpec, a: dict, sigma) -> dict:
    """Return a(sigma x), where (sigma x)_i = sum_j sigma[i][j] x_j."""
    if not a:
        return {}
    n = len(next(iter(a))) - 1
    images = [{unit(n, j): F.convert(sigma[i][j]) for j in range(n + 1) if F.convert(sigma[i][j])}
              for i in range(n + 1)]
    cache = {}

    def img_pow(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = const(n) if e == 0 else mul(F, img_pow(i, e - 1), images[i])
        return cache[key]

    terms = []
    for m, c in a.items():
        prod = const(n)
        for i, e in enumerate(m):
            if e:
                prod = mul(F, prod, img_pow(i, e))
        terms.append((c, prod))
    return lincomb(F, terms)


def to_text(a: dict, names=None) -> str:
    """Human-readable form, e.g. ``x0^2 - 3*x1*x2``; ``names`` overrides ``x{i}``."""
    if not a:
        return "0"
    parts = []
    for m in sorted(a, reverse=True):
        c = a[m]
        factors = []
        for i, e in enumerate(m):
            if e:
                nm = names[i] if names else f"x{i}"
                factors.append(nm if e == 1 else f"{nm}^{e}")
        mono = "*".join(factors)
        parts.append(_signed_term(c, mono))
    return _join_terms(parts)


def _signed_term(c, mono: str):
    neg = c < 0
    mag = -c if neg else c
    if mono:
        body = mono if mag == 1 else f"{mag}*{mono}"
    else:
        body = str(mag)
    return neg, body


def _join_terms(parts) -> str:
    out = []
    for k, (neg, body) in enumerate(parts):
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)
