"""Incremental reduced row-echelon spans with membership certificates.

Vectors are sparse ``{column: scalar}`` dicts over a :class:`FieldSpec`.
Each basis row is kept with pivot entry 1 and no other row touching its
pivot column, so a membership test is a single pass over the target's
pivot columns.  With ``track=True`` every row also carries its expression
in terms of the inserted generators, which is what a
:class:`MembershipCertificate` records.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import poly
from .fieldcore import FieldSpec
from .multiindex import monomials


def _axpy_mod(v: dict, f, row: dict, p: int):
    """v -= f * row over F_p, dropping zeros."""
    get = v.get
    for k, x in row.items():
        y = (get(k, 0) - f * x) % p
        if y:
            v[k] = y
        else:
            v.pop(k, None)


def _axpy_q(v: dict, f, row: dict, p: int = 0):
    get = v.get
    for k, x in row.items():
        y = get(k, 0) - f * x
        if y:
            v[k] = y
        else:
            v.pop(k, None)


@dataclass
class MembershipCertificate:
    """``target == sum(coefficients[g] * generator[g])`` over the basis' field."""

    target_id: object
    coefficients: dict = field(default_factory=dict)

    def replay(self, generators, target: dict, F: FieldSpec) -> bool:
        """Recombine ``generators`` (id -> vector) and compare with ``target`` exactly."""
        acc = {}
        ax = _axpy_mod if F.characteristic else _axpy_q
        for g, c in self.coefficients.items():
            ax(acc, F.neg(c), generators[g], F.characteristic)
        diff = dict(acc)
        ax(diff, 1, target, F.characteristic)
        return not diff


class SpanBasis:
    def __init__(self, field: FieldSpec, ambient: int, track: bool = False):
        self.field = field
        self.ambient = ambient
        self.track = track
        self.rows = {}       # pivot column -> row (pivot entry 1)
        self.combos = {}     # pivot column -> {generator id: coeff}
        self._colrows = {}   # column -> set of pivots whose rows are nonzero there
        self.generators = {}  # id -> original vector of each independent insert
        self._next_id = 0
        p = field.characteristic
        self._p = p
        self._axpy = _axpy_mod if p else _axpy_q

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows)

    def _check(self, v: dict):
        for k in v:
            if not 0 <= k < self.ambient:
                raise IndexError(f"column {k} outside ambient dimension {self.ambient}")

    def _normalize(self, v: dict) -> dict:
        F = self.field
        out = {}
        for k, c in v.items():
            c = F.convert(c)
            if c:
                out[k] = c
        return out

    def _reduce(self, v: dict, combo):
        rows, axpy, p = self.rows, self._axpy, self._p
        for c in [c for c in v if c in rows]:
            f = v.get(c)
            if f is None:
                continue
            axpy(v, f, rows[c], p)
            if combo is not None:
                axpy(combo, f, self.combos[c], p)
        return v

    def reduce(self, v: dict) -> dict:
        """Normal form of ``v`` modulo the span (zero iff ``v`` is a member)."""
        self._check(v)
        return self._reduce(self._normalize(v), None)

    def insert(self, v: dict, label=None) -> bool:
        """Add ``v``; returns ``True`` iff it was outside the previous span."""
        self._check(v)
        orig = self._normalize(v)
        v = dict(orig)
        combo = {} if self.track else None
        # after reduction: v == orig + sum(combo[g] * generator[g])
        self._reduce(v, combo)
        if not v:
            return False
        gid = self._next_id if label is None else label
        if gid in self.generators:
            raise ValueError(f"duplicate generator label {gid!r}")
        self._next_id += 1
        self.generators[gid] = orig
        F = self.field
        if combo is not None:
            combo[gid] = F.add(combo.get(gid, 0), 1)
        piv = min(v)
        inv = F.inv(v[piv])
        if inv != 1:
            v = {k: F.mul(inv, x) for k, x in v.items()}
            if combo is not None:
                combo = {g: F.mul(inv, x) for g, x in combo.items()}
        axpy, p = self._axpy, self._p
        for r in list(self._colrows.get(piv, ())):
            row = self.rows[r]
            f = row[piv]
            before = set(row)
            axpy(row, f, v, p)
            if combo is not None:
                axpy(self.combos[r], f, combo, p)
            after = set(row)
            for k in before - after:
                self._colrows[k].discard(r)
            for k in after - before:
                self._colrows.setdefault(k, set()).add(r)
        self.rows[piv] = v
        if combo is not None:
            self.combos[piv] = combo
        for k in v:
            self._colrows.setdefault(k, set()).add(piv)
        return True

    add = insert

    def contains(self, v: dict, target_id=None):
        """A :class:`MembershipCertificate` if ``v`` is in the span, else ``None``.

        Certificates need ``track=True``; untracked bases return a certificate
        with empty coefficients for members.
        """
        self._check(v)
        w = self._normalize(v)
        combo = {} if self.track else None
        self._reduce(w, combo)
        if w:
            return None
        F = self.field
        coeffs = {g: F.neg(c) for g, c in (combo or {}).items() if c}
        return MembershipCertificate(target_id, coeffs)

    def __contains__(self, v: dict) -> bool:
        return not self.reduce(v)

    def vectors(self) -> list:
        return [self.rows[c] for c in sorted(self.rows)]


def span_of(field: FieldSpec, ambient: int, vectors, track: bool = False, labels=None) -> SpanBasis:
    S = SpanBasis(field, ambient, track=track)
    for k, v in enumerate(vectors):
        S.add(v, None if labels is None else labels[k])
    return S


def same_span(a: SpanBasis, b: SpanBasis) -> bool:
    if a.dim != b.dim or a.ambient != b.ambient:
        return False
    return all(not a.reduce(r) for r in b.rows.values())


def span_insert(basis: SpanBasis, v: dict):
    """Functional-style wrapper: ``(basis, was_new)``; the basis is updated in place."""
    was_new = basis.add(v)
    return basis, was_new


def ideal_degree_part(generators, e: int, n: int, field: FieldSpec) -> SpanBasis:
    """Span of all ``m * g`` with ``g`` a generator and ``m`` a monomial of degree ``e - deg g``.

    Columns are the degree-``e`` monomials of x_0..x_n in graded-lex order.
    """
    mons = monomials(n, e)
    pos = {m: i for i, m in enumerate(mons)}
    S = SpanBasis(field, len(mons))
    for g in generators:
        dg = poly.degree(g)
        if dg is None:
            continue
        if dg > e:
            continue
        for m in monomials(n, e - dg):
            S.add({pos[m + k]: c for k, c in g.items()})
    assert len(mons) == comb(n + e, n)
    return S
