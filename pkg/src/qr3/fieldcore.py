"""Exact scalar arithmetic over the rationals and odd prime fields.

Internally the rest of the package works with *raw* scalars: ``Fraction``
(or ``int``) for QQ and canonical residues ``0 <= r < p`` for F_p.  The
:class:`FieldSpec` methods operate on those raw values.  :class:`FieldElement`
is a thin value type carrying its field, for callers who want operator
syntax and mixed-field checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]


class FieldError(ValueError):
    pass


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """QQ (``characteristic == 0``) or F_p for an odd prime p."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or isinstance(c, bool) or c < 0:
            raise FieldError(f"invalid characteristic {c!r}")
        if c == 2:
            raise FieldError("characteristic 2 is not supported: quadric rank is undefined")
        if c != 0 and not is_prime(c):
            raise FieldError(f"characteristic {c} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __str__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    # raw scalar operations -------------------------------------------------

    def convert(self, x) -> Scalar:
        """Map an int, Fraction, or decimal/fraction string to a canonical raw scalar."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldError(f"element of {x.field} used in {self}")
            return x.value
        if isinstance(x, str):
            x = Fraction(x)
        p = self.characteristic
        if p == 0:
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else x
            if isinstance(x, int):
                return x
            raise FieldError(f"cannot convert {x!r} to a rational")
        if isinstance(x, Fraction):
            den = x.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return x.numerator * pow(den, -1, p) % p
        if isinstance(x, int):
            return x % p
        raise FieldError(f"cannot convert {x!r} to GF({p})")

    def zero(self) -> Scalar:
        return 0

    def one(self) -> Scalar:
        return 1

    def add(self, a, b):
        p = self.characteristic
        return (a + b) % p if p else _canon(a + b)

    def sub(self, a, b):
        p = self.characteristic
        return (a - b) % p if p else _canon(a - b)

    def neg(self, a):
        p = self.characteristic
        return (-a) % p if p else -a

    def mul(self, a, b):
        p = self.characteristic
        return (a * b) % p if p else _canon(a * b)

    def inv(self, a):
        p = self.characteristic
        if p:
            if a % p == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, p)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return _canon(1 / Fraction(a))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng: random.Random, bound: int = 5) -> Scalar:
        """Uniform residue over F_p; small integer (occasionally a fraction) over QQ."""
        p = self.characteristic
        if p:
            return rng.randrange(p)
        num = rng.randint(-bound, bound)
        if rng.random() < 0.25:
            return _canon(Fraction(num, rng.randint(1, bound)))
        return num

    def element(self, x) -> "FieldElement":
        return FieldElement(self.convert(x), self)


def _canon(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def field_make(characteristic: int) -> FieldSpec:
    return FieldSpec(characteristic)


QQ = FieldSpec(0)


@dataclass(frozen=True)
class FieldElement:
    value: Scalar
    field: FieldSpec

    def _other(self, other) -> Scalar:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields: {self.field} and {other.field}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._other(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._other(other)), self.field)

    def __rsub__(self, other):
        return FieldElement(self.field.sub(self._other(other), self.value), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._other(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field.div(self.value, self._other(other)), self.field)

    def __rtruediv__(self, other):
        return FieldElement(self.field.div(self._other(other), self.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.convert(other)
        except (FieldError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.characteristic))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field}({self.value})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldError(f"mixed fields: {a.field} and {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
