"""Exponent vectors of monomials and the coordinate basis of a Veronese ambient space.

Coordinates of P^N, N = binom(n+d, n) - 1, are indexed by the exponent vectors
of degree-d monomials in x_0..x_n.  They are always listed in graded-lex order,
i.e. descending lexicographic order within one degree::

    >>> [tuple(I) for I in enumerate_indices(1, 2).indices]
    [(2, 0), (1, 1), (0, 2)]
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator


class MultiIndex(tuple):
    """Immutable exponent vector (a_0, ..., a_n)."""

    __slots__ = ()

    def __new__(cls, exponents=()):
        exps = tuple(int(a) for a in exponents)
        if any(a < 0 for a in exps):
            raise ValueError(f"negative exponent in {exps}")
        return super().__new__(cls, exps)

    @property
    def n(self) -> int:
        return len(self) - 1

    @property
    def degree(self) -> int:
        return sum(self)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("multi-indices of different length")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        """Entrywise difference, or ``None`` when some entry would be negative."""
        if len(other) != len(self):
            raise ValueError("multi-indices of different length")
        diff = tuple(a - b for a, b in zip(self, other))
        if any(a < 0 for a in diff):
            return None
        return MultiIndex(diff)

    def support(self) -> frozenset:
        return frozenset(k for k, a in enumerate(self) if a > 0)

    def insert_zero(self, k: int) -> "MultiIndex":
        """The inclusion A(n-1, d) -> A(n, d) placing a 0 at position k."""
        if not 0 <= k <= len(self):
            raise IndexError(f"insert position {k} out of range for length {len(self)}")
        return MultiIndex(self[:k] + (0,) + self[k:])

    def delete(self, k: int) -> "MultiIndex":
        if self[k] != 0:
            raise ValueError(f"entry {k} of {tuple(self)} is not zero")
        return MultiIndex(self[:k] + self[k + 1:])

    def add_unit(self, k: int) -> "MultiIndex":
        """The map A(n, d-1) -> A(n, d) adding 1 at position k (multiplication by x_k)."""
        if not 0 <= k < len(self):
            raise IndexError(f"position {k} out of range for length {len(self)}")
        return MultiIndex(a + (i == k) for i, a in enumerate(self))

    def text(self) -> str:
        return "z[" + ",".join(map(str, self)) + "]"

    def __repr__(self):
        return "MultiIndex(" + ",".join(map(str, self)) + ")"


def unit(n: int, i: int) -> MultiIndex:
    """e_i in A(n, 1)."""
    return MultiIndex(int(k == i) for k in range(n + 1))


def zero_index(n: int) -> MultiIndex:
    return MultiIndex((0,) * (n + 1))


_Z_RE = re.compile(r"^\s*z\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]\s*$")


def parse_coordinate(text: str) -> MultiIndex:
    m = _Z_RE.match(text)
    if not m:
        raise ValueError(f"not a coordinate: {text!r}")
    return MultiIndex(int(a) for a in m.group(1).split(","))


def _exponents(nvars: int, d: int) -> Iterator[tuple]:
    if nvars == 1:
        yield (d,)
        return
    for a in range(d, -1, -1):
        for rest in _exponents(nvars - 1, d - a):
            yield (a,) + rest


@dataclass(frozen=True)
class CoordinateBasis:
    """All of A(n, d) in graded-lex order, with O(1) position lookup."""

    n: int
    d: int
    indices: tuple = field(repr=False)
    position: dict = field(repr=False, compare=False, hash=False)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, i) -> MultiIndex:
        return self.indices[i]

    def __iter__(self):
        return iter(self.indices)

    def index_of(self, I) -> int:
        return self.position[I]

    @property
    def N(self) -> int:
        """Dimension of the projective space these coordinates live on."""
        return len(self.indices) - 1


@lru_cache(maxsize=None)
def enumerate_indices(n: int, d: int) -> CoordinateBasis:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if d < 0:
        raise ValueError(f"need d >= 0, got {d}")
    idx = tuple(MultiIndex(e) for e in _exponents(n + 1, d))
    assert len(idx) == comb(n + d, n)
    return CoordinateBasis(n, d, idx, {I: i for i, I in enumerate(idx)})


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple:
    """A(n, d) for any n >= 0 (n = 0 allowed, unlike the ambient basis)."""
    return tuple(MultiIndex(e) for e in _exponents(n + 1, d))
