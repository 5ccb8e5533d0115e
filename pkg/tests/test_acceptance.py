"""Acceptance suite: one test and one PASS/FAIL line per criterion, at zero tolerance."""

import json
import random
import time
from itertools import combinations
from math import comb

import pytest

from qr3 import certify, poly
from qr3.certify import PreconditionError
from qr3.cli import DEFAULT_GRID, main
from qr3.fieldcore import FieldError, FieldSpec
from qr3.idealfile import fixture_path, parse_ideal, parse_polynomial, quadric_from_parsed
from qr3.multiindex import enumerate_indices
from qr3.qmap import gamma, q_of
from qr3.quadform import QuadraticForm, quad_dimension
from qr3.reembed import IdealPresentation, build_section, verify_qr3_reembedding
from qr3.spanengine import span_of
from strategies import random_form

QQ, F3, F5, F7, F101 = (FieldSpec(p) for p in (0, 3, 5, 7, 101))


def add(F, *ps):
    out = {}
    for p in ps:
        out = poly.add(F, out, p)
    return out


def dims_bytes(cert):
    return json.dumps(cert.payload["dims"], sort_keys=True).encode()


def test_criterion_01_veronese_grid(criterion):
    t0 = time.perf_counter()
    bad = []
    for n, d in DEFAULT_GRID:
        c = certify.verify_qr3_veronese(n, d, QQ)
        dims = c.payload["dims"]
        if not (c.ok and dims["span_gamma"] == dims["ideal_quadrics"]
                and set(c.payload["rank_histogram"]) == {"3"}):
            bad.append((n, d))
    wall = time.perf_counter() - t0
    ok = not bad and wall < 120
    criterion(1, "QR(3) over QQ on the Veronese grid", ok, f"{len(DEFAULT_GRID)} instances, {wall:.1f}s, bad={bad}")
    assert ok


def test_criterion_02_dimension_anchors(criterion):
    v32 = certify.verify_qr3_veronese(3, 2, QQ).payload["dims"]["ideal_quadrics"]
    g22 = gamma(2, 2, QQ)
    v22 = certify.verify_qr3_veronese(2, 2, QQ).payload["dims"]["ideal_quadrics"]
    rnc_bad = []
    for d in range(2, 31):
        c = certify.verify_rnc(d, QQ)
        if not (c.ok and c.payload["independent"] == comb(d, 2)):
            rnc_bad.append(d)
    ok = v32 == 20 and v22 == 6 and len(g22.elements) == 6 and not rnc_bad
    criterion(2, "dimension anchors", ok,
              f"I(V32)_2={v32}, I(V22)_2={v22}, |Gamma(2,2)|={len(g22.elements)}, rnc failures={rnc_bad}")
    assert ok


def test_criterion_03_char3_failure(criterion):
    c32 = certify.verify_qr3_veronese(3, 2, F3)
    w = c32.witnesses[0]["quadric"] if c32.witnesses else None
    r1 = certify.r_quadrics(F3)[0]
    w_form = quadric_from_parsed(parse_polynomial(w, 3), 3, F3)[0] if w else None
    c42 = certify.verify_qr3_veronese(4, 2, F3)
    lines = [certify.verify_qr3_veronese(1, d, F3).ok for d in range(2, 7)]
    c22 = certify.verify_qr3_veronese(2, 2, F3)
    ok = (c32.status == certify.REFUTED and c32.payload["dims"] == {"span_gamma": 19, "ideal_quadrics": 20}
          and w == "z[1,1,0,0]*z[0,0,1,1] - z[1,0,1,0]*z[0,1,0,1]" and w_form == r1
          and c42.status == certify.REFUTED and all(lines) and c22.ok)
    criterion(3, "char 3 failure and its boundaries", ok,
              f"(3,2): {c32.payload['dims']}, witness {w}; (4,2) {c42.status}; P^1 d<=6 {all(lines)}; (2,2) {c22.status}")
    assert ok


IDENTITY_DRAWS = 1000
IDENTITY_CASES = [(1, 3), (2, 2), (2, 3), (3, 2)]


def _identity_failures(F, seed):
    rng = random.Random(seed)
    fails = {"symmetries": 0, "bilinear": 0, "multi-term": 0, "six-term": 0}
    for k in range(IDENTITY_DRAWS):
        n, d = IDENTITY_CASES[k % len(IDENTITY_CASES)]
        B = enumerate_indices(n, d)
        Q = lambda a, b, c: q_of(a, b, c, B, F)  # noqa: E731
        s, t, u = (random_form(F, n, 1, rng) for _ in range(3))
        h, g = random_form(F, n, d - 2, rng), random_form(F, n, d - 2, rng)
        lam, a, b = F.random(rng), F.random(rng), F.random(rng)
        # symmetries and homogeneity
        base = Q(s, t, h)
        if not (not Q(s, s, h) and base == Q(t, s, h) and Q(s, add(F, s, t), h) == base
                and Q(poly.scale(F, lam, s), t, h) == base.scale(F.mul(lam, lam))
                == Q(s, t, poly.scale(F, lam, h))):
            fails["symmetries"] += 1
        # bilinear expansions in the second and third slots
        c1, c2, c3 = F.sub(F.mul(a, a), F.mul(a, b)), F.sub(F.mul(b, b), F.mul(a, b)), F.mul(a, b)
        e1 = Q(s, add(F, poly.scale(F, a, t), poly.scale(F, b, u)), h) == (
            Q(s, t, h).scale(c1) + Q(s, u, h).scale(c2) + Q(s, add(F, t, u), h).scale(c3))
        e2 = Q(s, t, add(F, poly.scale(F, a, g), poly.scale(F, b, h))) == (
            Q(s, t, g).scale(c1) + Q(s, t, h).scale(c2) + Q(s, t, add(F, g, h)).scale(c3))
        if not (e1 and e2):
            fails["bilinear"] += 1
        # sums of m terms, m cycling through 3, 4, 5
        m = 3 + k % 3
        ts = [random_form(F, n, 1, rng) for _ in range(m)]
        gs = [random_form(F, n, d - 2, rng) for _ in range(m)]
        r1 = sum((Q(s, add(F, ts[i], ts[j]), h) for i, j in combinations(range(m), 2)), QuadraticForm.zero(F, len(B)))
        r1 = r1 - sum((Q(s, x, h) for x in ts), QuadraticForm.zero(F, len(B))).scale(m - 2)
        r2 = sum((Q(s, t, add(F, gs[i], gs[j])) for i, j in combinations(range(m), 2)), QuadraticForm.zero(F, len(B)))
        r2 = r2 - sum((Q(s, t, x) for x in gs), QuadraticForm.zero(F, len(B))).scale(m - 2)
        if not (Q(s, add(F, *ts), h) == r1 and Q(s, t, add(F, *gs)) == r2):
            fails["multi-term"] += 1
        # six-term identity
        lhs = Q(add(F, s, u), add(F, t, u), h)
        rhs = (Q(s, u, h) + Q(t, u, h) + Q(add(F, s, u), t, h) + Q(add(F, t, u), s, h)
               - Q(s, t, h) - Q(add(F, s, t), u, h))
        if lhs != rhs:
            fails["six-term"] += 1
    return fails


def test_criterion_04_identity_suite(criterion):
    result = {str(F): _identity_failures(F, seed=4) for F in (QQ, F5)}
    ok = all(v == 0 for fam in result.values() for v in fam.values())
    criterion(4, "Q-map identity families", ok, f"{IDENTITY_DRAWS} draws per family per field, failures={result}")
    assert ok


def test_criterion_05_q_values_in_gamma_span(criterion):
    failures = {}
    for n, d in [(2, 3), (3, 3), (2, 4)]:
        rng = random.Random(500 + 10 * n + d)
        G = gamma(n, d, QQ)
        S = span_of(QQ, quad_dimension(G.size), (q.as_vector() for q in G.forms(nonzero=True)))
        bad = 0
        for _ in range(200):
            s, t, h = random_form(QQ, n, 1, rng), random_form(QQ, n, 1, rng), random_form(QQ, n, d - 2, rng)
            if S.reduce(q_of(s, t, h, G.basis, QQ).as_vector()):
                bad += 1
        failures[f"{n},{d}"] = bad
    ok = not any(failures.values())
    criterion(5, "random Q-map values lie in span Gamma", ok, f"200 per instance, failures={failures}")
    assert ok


def test_criterion_06_relation_suite(criterion):
    summary = {}
    ok = True
    for n, d in [(2, 3), (3, 3), (2, 4), (3, 4)]:
        for F in (QQ, F7):
            c = certify.verify_relation_suite(n, d, F, sample=20, seed=0)
            total = sum(c.payload["instances"].values())
            summary[f"{n},{d},{F}"] = (total, c.payload["failures"])
            ok = ok and c.ok and total > 0 and c.payload["failures"] == 0
    criterion(6, "relation suite by span membership", ok, f"(instances, failures)={summary}")
    assert ok


def test_criterion_07_pgl_commutation(criterion):
    res = {f"{n},{d}": certify.pgl_check(n, d, F101, samples=200, seed=7) for n, d in [(2, 2), (2, 3)]}
    ok = all(c.ok and c.payload["samples"] == 200 and c.payload["failures"] == 0 for c in res.values())
    criterion(7, "PGL action commutes with the Q-map and keeps rank", ok,
              ", ".join(f"({k}) failures={c.payload['failures']}" for k, c in res.items()))
    assert ok


def test_criterion_08_flattening(criterion):
    res = {f"{n},{d}": certify.verify_flattening(n, d, QQ, 1) for n, d in [(1, 3), (2, 2), (2, 3), (3, 2)]}
    ok = all(c.ok and c.payload["dims"]["span_minors"] == c.payload["dims"]["ideal_quadrics"] for c in res.values())
    criterion(8, "2-minors of the flattening span the ideal quadrics", ok,
              ", ".join(f"({k}) {c.payload['dims']}" for k, c in res.items()))
    assert ok


def test_criterion_09_reembedding(criterion):
    conic = verify_qr3_reembedding(parse_ideal(fixture_path("conic")).presentation(QQ), 2)
    quartic = verify_qr3_reembedding(parse_ideal(fixture_path("elliptic_quartic")).presentation(QQ), 2)
    routes = all(c.payload["r_linear_part"] == c.payload["r_hilbert"]
                 and c.payload["hf_2d"] == c.payload["hf_2d_ascent"]
                 and c.payload["kernel_dim"] == c.payload["dims"]["ideal_quadrics"] for c in (conic, quartic))
    mismatched = []
    for n, d in DEFAULT_GRID:
        a = verify_qr3_reembedding(IdealPresentation.projective_space(n, QQ), d)
        b = certify.verify_qr3_veronese(n, d, QQ)
        if not (a.ok and dims_bytes(a) == dims_bytes(b)):
            mismatched.append((n, d))
    ok = (conic.ok and conic.payload["dims"]["ideal_quadrics"] == 6 and quartic.ok and routes and not mismatched)
    criterion(9, "re-embedding as a linear section", ok,
              f"conic {conic.payload['dims']}, quartic {quartic.payload['dims']}, routes agree={routes}, "
              f"P^n mismatches={mismatched}")
    assert ok


def test_criterion_10_canonical_curve(criterion):
    f = parse_ideal(fixture_path("canonical_genus6"))
    qs = [quadric_from_parsed(p, f.n, QQ)[0] for p in f.polynomials]
    ranks = [q.rank() for q in qs]
    qp = [quadric_from_parsed(p, f.n, F101)[0] for p in f.polynomials]
    span = span_of(F101, quad_dimension(6), (q.as_vector() for q in qp))
    t0 = time.perf_counter()
    rep = certify.rank3_search(span, 6, 10 ** 6, seed=0, reference=qp[5])
    wall = time.perf_counter() - t0
    p = rep.payload
    ok = (ranks[5] == 3 and all(r > 3 for r in ranks[:5]) and p["samples"] == 10 ** 6
          and p["all_hits_proportional"] and wall < 300)
    criterion(10, "canonical curve ranks and rank-3 sampling", ok,
              f"ranks={ranks}, hits={p['hits']}, histogram={p['rank_histogram']}, {wall:.1f}s")
    assert ok


def test_criterion_11_scope_guards(criterion, capsys):
    grid_ok = all(certify.verify_qr3_veronese(n, d, QQ).ok for n, d in DEFAULT_GRID)
    guards = []
    conic = parse_ideal(fixture_path("conic")).presentation(QQ)
    for thunk in (lambda: build_section(conic, 1),
                  lambda: verify_qr3_reembedding(parse_ideal(fixture_path("conic")).presentation(F3), 2)):
        try:
            thunk()
            guards.append(False)
        except PreconditionError:
            guards.append(True)
    try:
        FieldSpec(2)
        guards.append(False)
    except FieldError:
        guards.append(True)
    cli_code = main(["reembed", "--file", "conic", "--d", "1"])
    capsys.readouterr()
    ok = grid_ok and all(guards) and cli_code == 2
    criterion(11, "instance grid and precondition guards cover the general claims", ok,
              f"grid={grid_ok}, guards={guards}, cli exit={cli_code}")
    assert ok
