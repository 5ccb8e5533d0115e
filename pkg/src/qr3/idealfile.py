"""Plain-text ideal files: a ``key: value`` header followed by one polynomial per line.

Example::

    # twisted cubic
    n: 3
    char: 0
    m: 2
    x0*x2 - x1^2
    x0*x3 - x1*x2
    x1*x3 - x2^2

Header keys are ``n`` (required), ``char`` (default 0), ``m`` and ``vars``
(space-separated variable names, default ``x0 .. xn``).  Polynomials use
integer coefficients, ``+ - * ^``, parentheses and juxtaposition, over the
x-variables or Veronese coordinates written ``z[a0,...,an]``.  ``#`` starts
a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from . import poly
from .fieldcore import FieldError, FieldSpec
from .multiindex import MultiIndex, enumerate_indices
from .quadform import QuadraticForm

HEADER_KEYS = ("n", "char", "m", "vars")
_HEADER = re.compile(r"^\s*([A-Za-z_]\w*)\s*[:=]\s*(.*?)\s*$")
_Z = re.compile(r"z\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]")


class IdealSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, col: int, source: str = "<text>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col = line, col


@dataclass
class ParsedPolynomial:
    """Terms keyed by monomials ``((var, exp), ...)`` with ``var`` an int (x) or a MultiIndex (z)."""

    terms: dict
    line: int
    text: str

    @property
    def kind(self) -> str:
        kinds = {type(v) is int for mono in self.terms for v, _ in mono}
        if kinds == {False}:
            return "z"
        return "x" if kinds <= {True} else "mixed"


@dataclass
class IdealFile:
    n: int
    characteristic: int
    m: int = None
    names: tuple = None
    polynomials: list = field(default_factory=list)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.characteristic)

    def x_polynomials(self, F: FieldSpec = None) -> list:
        F = F or self.field
        out = []
        for p in self.polynomials:
            if p.kind != "x":
                raise IdealSyntaxError("expected a polynomial in the x-variables", p.line, 1)
            g = {}
            for mono, c in p.terms.items():
                e = [0] * (self.n + 1)
                for v, k in mono:
                    e[v] += k
                m = MultiIndex(e)
                g[m] = F.add(g.get(m, 0), F.convert(c))
            out.append({m: c for m, c in g.items() if c})
        return out

    def presentation(self, F: FieldSpec = None, m: int = None):
        from .reembed import IdealPresentation
        F = F or self.field
        gens = self.x_polynomials(F)
        degs = [poly.degree(g) for g in gens if g]
        m = m if m is not None else (self.m if self.m is not None else max(degs, default=1))
        return IdealPresentation(self.n, F, gens, m, self.names)

    def canonical_text(self) -> str:
        lines = [f"n: {self.n}", f"char: {self.characteristic}"]
        if self.m is not None:
            lines.append(f"m: {self.m}")
        if self.names:
            lines.append("vars: " + " ".join(self.names))
        for p in self.polynomials:
            lines.append(polynomial_text(p, self.names))
        return "\n".join(lines) + "\n"


def polynomial_text(p: ParsedPolynomial, names=None) -> str:
    def var(v):
        if type(v) is int:
            return names[v] if names else f"x{v}"
        return v.text()

    def key(mono):
        return tuple((0, v) if type(v) is int else (1, tuple(v)) for v, _ in mono)

    parts = []
    for mono in sorted(p.terms, key=lambda mo: (-sum(e for _, e in mo), key(mo))):
        c = p.terms[mono]
        body = "*".join(var(v) if e == 1 else f"{var(v)}^{e}" for v, e in mono)
        parts.append(poly._signed_term(c, body))
    return poly._join_terms(parts) if parts else "0"


class _Parser:
    def __init__(self, text: str, line: int, names: tuple, n: int, source: str):
        self.s, self.i, self.line, self.names, self.n, self.source = text, 0, line, names, n, source
        self.by_len = sorted(names, key=len, reverse=True)

    def error(self, msg, at=None):
        raise IdealSyntaxError(msg, self.line, (self.i if at is None else at) + 1, self.source)

    def peek(self):
        while self.i < len(self.s) and self.s[self.i] in " \t":
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def parse(self) -> dict:
        out = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return out

    def expr(self) -> dict:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.s[self.i] == "-" else 1
            self.i += 1
        acc = _scale(self.term(), sign)
        while self.peek() in ("+", "-") and self.peek():
            sign = -1 if self.s[self.i] == "-" else 1
            self.i += 1
            acc = _add(acc, _scale(self.term(), sign))
        return acc

    def term(self) -> dict:
        acc = self.power()
        while True:
            c = self.peek()
            if c == "*":
                self.i += 1
                acc = _mul(acc, self.power())
            elif c and (c.isalnum() or c in "(["):
                acc = _mul(acc, self.power())
            else:
                return acc

    def power(self) -> dict:
        base = self.atom()
        if self.peek() == "^":
            self.i += 1
            self.peek()
            m = re.match(r"\d+", self.s[self.i:])
            if not m:
                self.error("expected an exponent")
            self.i += m.end()
            out = {(): 1}
            for _ in range(int(m.group())):
                out = _mul(out, base)
            return out
        return base

    def atom(self) -> dict:
        c = self.peek()
        start = self.i
        if not c:
            self.error("unexpected end of line")
        if c == "(":
            self.i += 1
            inner = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return inner
        if c.isdigit():
            m = re.match(r"\d+", self.s[self.i:])
            self.i += m.end()
            if self.peek() in ("/", "."):
                self.error("coefficients must be integers")
            v = int(m.group())
            return {(): v} if v else {}
        zm = _Z.match(self.s, self.i)
        if zm:
            idx = MultiIndex(int(a) for a in zm.group(1).split(","))
            if len(idx) != self.n + 1:
                self.error(f"z-coordinate needs {self.n + 1} entries", start)
            self.i = zm.end()
            return {((idx, 1),): 1}
        for k, nm in sorted(enumerate(self.names), key=lambda t: -len(t[1])):
            if self.s.startswith(nm, self.i):
                after = self.s[self.i + len(nm):self.i + len(nm) + 1]
                if after.isdigit():
                    continue
                self.i += len(nm)
                return {((k, 1),): 1}
        self.error(f"unknown symbol starting at {self.s[self.i:self.i + 8]!r}")


def _add(a, b):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _scale(a, c):
    return {k: c * v for k, v in a.items()}


def _merge(m1, m2):
    acc = {}
    for v, e in m1 + m2:
        acc[v] = acc.get(v, 0) + e
    key = lambda t: (0, t[0]) if type(t[0]) is int else (1, tuple(t[0]))  # noqa: E731
    return tuple(sorted(acc.items(), key=key))


def _mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _merge(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def parse_polynomial(text: str, n: int, names=None, line: int = 1, source: str = "<text>") -> ParsedPolynomial:
    names = tuple(names) if names else tuple(f"x{i}" for i in range(n + 1))
    terms = _Parser(text, line, names, n, source).parse()
    degs = {sum(e for _, e in mono) for mono in terms}
    if len(degs) > 1:
        raise IdealSyntaxError(f"inhomogeneous polynomial (degrees {sorted(degs)})", line, 1, source)
    p = ParsedPolynomial(terms, line, text.strip())
    if p.kind == "mixed":
        raise IdealSyntaxError("polynomial mixes x-variables and z-coordinates", line, 1, source)
    if p.kind == "z":
        ds = {v.degree for mono in terms for v, _ in mono}
        if len(ds) > 1:
            raise IdealSyntaxError("z-coordinates of different degrees", line, 1, source)
    return p


def parse_ideal_text(text: str, source: str = "<text>") -> IdealFile:
    header, body = {}, []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        hm = _HEADER.match(line)
        if hm and not body:
            key, val = hm.group(1), hm.group(2)
            if key not in HEADER_KEYS:
                raise IdealSyntaxError(f"unknown header key {key!r}", k, line.index(key) + 1, source)
            header[key] = (val, k)
            continue
        body.append((line, k))
    if "n" not in header:
        raise IdealSyntaxError("missing header key 'n'", 1, 1, source)

    def int_key(key, default=None):
        if key not in header:
            return default
        val, ln = header[key]
        try:
            return int(val)
        except ValueError:
            raise IdealSyntaxError(f"header {key!r} must be an integer, got {val!r}", ln, 1, source) from None

    n, ch, m = int_key("n"), int_key("char", 0), int_key("m")
    if n < 1:
        raise IdealSyntaxError(f"need n >= 1, got {n}", header["n"][1], 1, source)
    try:
        FieldSpec(ch)
    except FieldError as exc:
        raise IdealSyntaxError(f"bad characteristic: {exc}", header.get("char", ("", 1))[1], 1, source) from None
    names = None
    if "vars" in header:
        val, ln = header["vars"]
        names = tuple(val.replace(",", " ").split())
        if len(names) != n + 1 or len(set(names)) != len(names):
            raise IdealSyntaxError(f"'vars' must list {n + 1} distinct names", ln, 1, source)
    polys = [parse_polynomial(line, n, names, k, source) for line, k in body]
    return IdealFile(n, ch, m, names, polys)


def parse_ideal(path) -> IdealFile:
    p = Path(path)
    return parse_ideal_text(p.read_text(), source=str(p))


def quadric_from_parsed(p: ParsedPolynomial, n: int, F: FieldSpec) -> tuple:
    """A degree-2 polynomial as a :class:`QuadraticForm` with its coordinate basis.

    x-quadrics live on P^n; z-quadrics on the Veronese ambient of their coordinates.
    """
    if any(sum(e for _, e in mono) != 2 for mono in p.terms):
        raise ValueError(f"line {p.line}: not a quadric")
    if p.kind == "x":
        size, pos = n + 1, lambda v: v  # noqa: E731
        basis = None
    else:
        d = next(v.degree for mono in p.terms for v, _ in mono)
        basis = enumerate_indices(n, d)
        size, pos = len(basis), basis.index_of
    terms = []
    for mono, c in p.terms.items():
        idx = [pos(v) for v, e in mono for _ in range(e)]
        terms.append(((idx[0], idx[1]), F.convert(c)))
    return QuadraticForm.from_terms(F, size, terms), basis


def fixture_path(name: str) -> Path:
    here = Path(__file__).parent / "fixtures"
    for cand in (here / name, here / f"{name}.ideal"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no fixture named {name!r} in {here}")
