"""Linear and quadratic forms on P^N, their ranks, and the binomial Veronese quadrics.

Coordinates are positions ``0..size-1`` in some ordered basis (normally a
:class:`~qr3.multiindex.CoordinateBasis`).  A quadratic form stores the
coefficient of ``z_i z_j`` under the key ``(i, j)`` with ``i <= j``.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations

from .fieldcore import FieldError, FieldSpec
from .multiindex import enumerate_indices


class LinearForm:
    __slots__ = ("field", "size", "coeffs")

    def __init__(self, field: FieldSpec, size: int, coeffs=None):
        self.field = field
        self.size = size
        self.coeffs = {}
        for i, c in (coeffs or {}).items():
            if not 0 <= i < size:
                raise IndexError(f"coordinate {i} outside basis of size {size}")
            c = field.convert(c)
            if c:
                self.coeffs[i] = c

    @classmethod
    def _raw(cls, field, size, coeffs):
        lf = cls.__new__(cls)
        lf.field, lf.size, lf.coeffs = field, size, coeffs
        return lf

    def _check(self, other):
        if self.size != other.size or self.field != other.field:
            raise ValueError("linear forms on different bases or fields")

    def __add__(self, other):
        self._check(other)
        F = self.field
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            v = F.add(out.get(i, 0), c)
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return LinearForm._raw(F, self.size, out)

    def __neg__(self):
        F = self.field
        return LinearForm._raw(F, self.size, {i: F.neg(c) for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        c = F.convert(c)
        if not c:
            return LinearForm._raw(F, self.size, {})
        return LinearForm._raw(F, self.size, {i: F.mul(c, v) for i, v in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, LinearForm) and self.size == other.size
                and self.field == other.field and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.size, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"LinearForm({self.coeffs}, size={self.size}, {self.field})"


class QuadraticForm:
    __slots__ = ("field", "size", "coeffs")

    def __init__(self, field: FieldSpec, size: int, coeffs=None):
        self.field = field
        self.size = size
        self.coeffs = {}
        for (i, j), c in (coeffs or {}).items():
            if i > j:
                i, j = j, i
            if not (0 <= i and j < size):
                raise IndexError(f"pair {(i, j)} outside basis of size {size}")
            c = field.convert(c)
            v = field.add(self.coeffs.get((i, j), 0), c)
            if v:
                self.coeffs[(i, j)] = v
            else:
                self.coeffs.pop((i, j), None)

    @classmethod
    def _raw(cls, field, size, coeffs):
        q = cls.__new__(cls)
        q.field, q.size, q.coeffs = field, size, coeffs
        return q

    @classmethod
    def from_terms(cls, field: FieldSpec, size: int, terms):
        """Sum of ``c * z_i z_j`` over ``((i, j), c)`` pairs; repeated pairs accumulate."""
        q = cls(field, size)
        for (i, j), c in terms:
            q = q + cls(field, size, {(i, j): c})
        return q

    @classmethod
    def zero(cls, field: FieldSpec, size: int):
        return cls._raw(field, size, {})

    def _check(self, other):
        if self.size != other.size or self.field != other.field:
            raise ValueError("quadratic forms on different bases or fields")

    def __add__(self, other):
        self._check(other)
        F = self.field
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = F.add(out.get(k, 0), c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return QuadraticForm._raw(F, self.size, out)

    def __neg__(self):
        F = self.field
        return QuadraticForm._raw(F, self.size, {k: F.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        c = F.convert(c)
        if not c:
            return QuadraticForm._raw(F, self.size, {})
        return QuadraticForm._raw(F, self.size, {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm) and self.size == other.size
                and self.field == other.field and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.size, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"QuadraticForm({self.coeffs}, size={self.size}, {self.field})"

    def support(self) -> list:
        s = set()
        for i, j in self.coeffs:
            s.add(i)
            s.add(j)
        return sorted(s)

    def matrix(self, coords=None) -> list:
        """Symmetric matrix (list of rows of raw scalars) restricted to ``coords``."""
        F = self.field
        coords = self.support() if coords is None else list(coords)
        pos = {c: k for k, c in enumerate(coords)}
        half = F.inv(F.convert(2))
        m = len(coords)
        M = [[0] * m for _ in range(m)]
        for (i, j), c in self.coeffs.items():
            a, b = pos[i], pos[j]
            if a == b:
                M[a][a] = c
            else:
                v = F.mul(c, half)
                M[a][b] = v
                M[b][a] = v
        return M

    def rank(self) -> int:
        return symmetric_rank(self.matrix(), self.field)

    def as_vector(self) -> dict:
        """Sparse coordinates over the degree-2 monomial basis (pairs i <= j, lex order)."""
        m = self.size
        return {pair_index(m, i, j): c for (i, j), c in self.coeffs.items()}

    @classmethod
    def from_vector(cls, field: FieldSpec, size: int, vec: dict):
        pairs = pair_list(size)
        return cls._raw(field, size, {pairs[k]: c for k, c in vec.items() if c})

    def evaluate_monomial_map(self, basis) -> dict:
        """Pull back along z_I <- x^I; the result is a polynomial in x of degree 2d."""
        F = self.field
        acc = defaultdict(int)
        for (i, j), c in self.coeffs.items():
            m = basis[i] + basis[j]
            acc[m] = F.add(acc[m], c)
        return {m: v for m, v in acc.items() if v}

    def text(self, basis=None) -> str:
        """Render with ``z[...]`` names when a coordinate basis is given, else ``z<i>``."""
        def name(i):
            return basis[i].text() if basis is not None else f"z{i}"

        if not self.coeffs:
            return "0"
        parts = []
        for (i, j) in sorted(self.coeffs):
            c = self.coeffs[(i, j)]
            mono = f"{name(i)}^2" if i == j else f"{name(i)}*{name(j)}"
            neg = c < 0
            mag = -c if neg else c
            body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((" - " if neg else " + ") + body if parts else ("-" if neg else "") + body)
        return "".join(parts)


def pair_index(m: int, i: int, j: int) -> int:
    """Position of z_i z_j (i <= j) in the lex-ordered list of coordinate pairs of P^{m-1}."""
    return i * m - i * (i - 1) // 2 + (j - i)


_PAIR_CACHE = {}


def pair_list(m: int) -> list:
    if m not in _PAIR_CACHE:
        _PAIR_CACHE[m] = [(i, j) for i in range(m) for j in range(i, m)]
    return _PAIR_CACHE[m]


def quad_dimension(m: int) -> int:
    return m * (m + 1) // 2


def symmetric_rank(M: list, F: FieldSpec) -> int:
    """Rank of a symmetric matrix by congruence elimination (char != 2).

    Uses a nonzero diagonal pivot when there is one, otherwise a 2x2
    hyperbolic block on a nonzero off-diagonal entry.  ``M`` is consumed.
    """
    if F.characteristic == 2:
        raise FieldError("rank of a quadric is undefined in characteristic 2")
    A = [row[:] for row in M]
    live = list(range(len(A)))
    rank = 0
    while live:
        piv = next((i for i in live if A[i][i]), None)
        if piv is not None:
            live.remove(piv)
            inv = F.inv(A[piv][piv])
            for k in live:
                f = A[k][piv]
                if not f:
                    continue
                f = F.mul(f, inv)
                rk, rp = A[k], A[piv]
                for l in live:
                    if rp[l]:
                        rk[l] = F.sub(rk[l], F.mul(f, rp[l]))
            rank += 1
            continue
        hit = next(((i, j) for i in live for j in live if i < j and A[i][j]), None)
        if hit is None:
            break
        i, j = hit
        live.remove(i)
        live.remove(j)
        a_inv = F.inv(A[i][j])
        # Schur complement of [[0, a], [a, 0]]: A_kl - (A_ki A_jl + A_kj A_il) / a
        for k in live:
            aki, akj = A[k][i], A[k][j]
            if not (aki or akj):
                continue
            rk = A[k]
            for l in live:
                t = F.add(F.mul(aki, A[j][l]), F.mul(akj, A[i][l]))
                if t:
                    rk[l] = F.sub(rk[l], F.mul(t, a_inv))
        rank += 2
    return rank


def rank(q: QuadraticForm, field: FieldSpec = None) -> int:
    if field is not None and field != q.field:
        raise ValueError(f"form is over {q.field}, not {field}")
    return q.rank()


def product_of_linear(a: LinearForm, b: LinearForm) -> QuadraticForm:
    a._check(b)
    F = a.field
    out = {}
    for i, ci in a.coeffs.items():
        for j, cj in b.coeffs.items():
            key = (i, j) if i <= j else (j, i)
            v = F.add(out.get(key, 0), F.mul(ci, cj))
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return QuadraticForm._raw(F, a.size, out)


def binomial(field: FieldSpec, size: int, I: int, J: int, K: int, L: int) -> QuadraticForm:
    """z_I z_J - z_K z_L for coordinate positions I, J, K, L."""
    return QuadraticForm.from_terms(field, size, [((I, J), 1), ((K, L), -1)])


def binomial_pairs(n: int, d: int) -> list:
    """All ((I, J), (K, L)) with I+J = K+L and {I,J} != {K,L}, as position pairs.

    Every unordered pair of distinct monomials z_I z_J, z_K z_L of equal
    weight appears exactly once.
    """
    B = enumerate_indices(n, d)
    by_weight = defaultdict(list)
    for i, I in enumerate(B):
        for j in range(i, len(B)):
            by_weight[I + B[j]].append((i, j))
    out = []
    for w in sorted(by_weight, reverse=True):
        for a, b in combinations(by_weight[w], 2):
            out.append((a, b))
    return out


def binomial_generators(n: int, d: int, field: FieldSpec) -> list:
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    size = len(enumerate_indices(n, d))
    return [binomial(field, size, a[0], a[1], b[0], b[1]) for a, b in binomial_pairs(n, d)]


def veronese_quadric_dimension(n: int, d: int) -> int:
    """dim I(V_{n,d})_2 = binom(N+2, 2) - binom(n+2d, n)."""
    from math import comb
    m = comb(n + d, n)
    return quad_dimension(m) - comb(n + 2 * d, n)
