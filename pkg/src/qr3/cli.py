"""``qr3`` command line: run a check, print a JSON certificate, exit 0/1/2.

Exit codes: 0 verified, 1 refuted (or inconclusive), 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import certify, reembed
from .certify import PreconditionError
from .fieldcore import FieldError, FieldSpec
from .idealfile import IdealSyntaxError, fixture_path, parse_ideal, parse_polynomial, quadric_from_parsed
from .quadform import quad_dimension
from .spanengine import span_of

SCHEMA = "qr3.certificate/1"
DEFAULT_GRID = [(n, d) for n in (1, 2, 3) for d in (2, 3, 4)] + [(4, 2), (5, 2)]


class UsageError(Exception):
    pass


def document(command: str, argv: list, cert: certify.Certificate) -> dict:
    body = {"schema": SCHEMA, "command": command, "argv": list(argv), "claim": cert.claim,
            "status": cert.status, "field": cert.field, "seed": cert.seed,
            "payload": cert.payload, "witnesses": cert.witnesses}
    return {"body": body, "wall_time": cert.wall_time}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=str)


def body_bytes(doc: dict) -> bytes:
    """Canonical bytes of the part of a document that must be reproducible."""
    return json.dumps(doc["body"], sort_keys=True, separators=(",", ":"), default=str).encode()


def _field(args) -> FieldSpec:
    return FieldSpec(args.char)


def _ints(text: str):
    return tuple(int(x) for x in text.split(",") if x.strip() != "")


def _need(args, *names):
    for nm in names:
        if getattr(args, nm) is None:
            raise UsageError(f"--{nm} is required")


def _ideal(args):
    if args.file is None:
        raise UsageError("--file is required")
    path = args.file
    if not Path(path).exists():
        try:
            path = fixture_path(path)
        except FileNotFoundError:
            raise UsageError(f"no such file or fixture: {args.file}") from None
    return parse_ideal(path)


def parse_grid(text: str) -> list:
    """``default`` or a comma list of ``NxD`` entries, e.g. ``1x2,2x3``."""
    if text == "default":
        return list(DEFAULT_GRID)
    out = []
    for item in text.split(","):
        try:
            n, d = item.strip().lower().split("x")
            out.append((int(n), int(d)))
        except ValueError:
            raise UsageError(f"bad grid entry {item!r}; expected NxD") from None
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_veronese(args):
    _need(args, "n", "d")
    return certify.verify_qr3_veronese(args.n, args.d, _field(args))


def cmd_rnc(args):
    _need(args, "d")
    return certify.verify_rnc(args.d, _field(args))


def cmd_equiv_all(args):
    _need(args, "n", "d")
    return certify.verify_equiv_all(args.n, args.d, _field(args))


def cmd_relations(args):
    _need(args, "n", "d")
    F = _field(args)
    if args.I is None:
        kinds = certify.RELATION_KINDS if args.kind == "all" else (args.kind,)
        return certify.verify_relation_suite(args.n, args.d, F, kinds, sample=args.samples or 20,
                                             seed=args.seed)
    if args.kind == "all":
        raise UsageError("--kind must name one relation when --I is given")
    conv = lambda s: None if s is None else _ints(s)  # noqa: E731
    return certify.verify_relation(args.kind, args.n, args.d, F, conv(args.I), conv(args.J),
                                   conv(args.K), conv(args.L), _ints(args.idx or ""), force=args.force)


def cmd_pgl_check(args):
    _need(args, "n", "d")
    return certify.pgl_check(args.n, args.d, _field(args), args.samples or 200, args.seed)


def cmd_char3(args):
    return certify.char3_analysis(FieldSpec(3), args.samples or 0, args.seed)


def cmd_rank(args):
    if args.poly is not None:
        _need(args, "n")
        F = _field(args)
        items = [parse_polynomial(args.poly, args.n)]
        n = args.n
    else:
        f = _ideal(args)
        F = FieldSpec(args.char) if args.char_given else f.field
        items, n = f.polynomials, f.n
    ranks = []
    for k, p in enumerate(items, start=1):
        q, _ = quadric_from_parsed(p, n, F)
        ranks.append({"index": k, "rank": q.rank(), "variables": p.kind})
    payload = {"ranks": ranks, "rank3_or_less": [r["index"] for r in ranks if r["rank"] <= 3]}
    return certify.Certificate("quadric-rank", certify.VERIFIED, str(F), payload)


def cmd_rank3_search(args):
    F = _field(args)
    if F.characteristic == 0:
        raise UsageError("rank3-search needs --char p for a prime p")
    samples = args.samples or 10_000
    reference = None
    if args.file is not None:
        f = _ideal(args)
        qs = [quadric_from_parsed(p, f.n, F)[0] for p in f.polynomials]
        size = qs[0].size
        low = [q for q in qs if q.rank() <= 3]
        if args.reference is not None:
            reference = qs[args.reference - 1]
        elif len(low) == 1:
            reference = low[0]
        span = span_of(F, quad_dimension(size), (q.as_vector() for q in qs))
    else:
        _need(args, "n", "d")
        span = certify.binomial_span(args.n, args.d, F)
        from math import comb
        size = comb(args.n + args.d, args.n)
    return certify.rank3_search(span, size, samples, args.seed, reference)


def cmd_reembed(args):
    _need(args, "d")
    f = _ideal(args)
    F = FieldSpec(args.char) if args.char_given else f.field
    X = f.presentation(F, args.m)
    return reembed.verify_qr3_reembedding(X, args.d, minors=args.minors)


def cmd_flattening(args):
    _need(args, "n", "d")
    return certify.verify_flattening(args.n, args.d, _field(args), args.a)


def cmd_replay(args):
    if args.file is None:
        raise UsageError("--file is required")
    doc = json.loads(Path(args.file).read_text())
    body = doc.get("body", doc)
    if body.get("schema") != SCHEMA:
        raise UsageError(f"unsupported certificate schema {body.get('schema')!r}")
    argv = body["argv"]
    fresh, code = run(argv)
    if isinstance(fresh, list):
        raise UsageError("grid documents are replayed one instance at a time")
    same = body_bytes(fresh) == body_bytes({"body": body})
    witnesses = [replay_witness(w, body) for w in body.get("witnesses", [])]
    ok = same and all(w["replayed"] for w in witnesses)
    payload = {"original_status": body["status"], "recomputed_status": fresh["body"]["status"],
               "body_identical": same, "witnesses": witnesses}
    return certify.Certificate("replay", certify.VERIFIED if ok else certify.REFUTED, body["field"], payload)


def replay_witness(w: dict, body: dict) -> dict:
    """Independent check of one witness against a freshly built Gamma."""
    F = _field_from_text(body["field"])
    kind = w.get("kind")
    span = w.get("span", "")
    if kind in ("outside_span", "membership") and span.startswith("gamma("):
        n, d = map(int, span[6:-1].split(","))
        text = w["quadric"] if kind == "outside_span" else w["target"]
        q, _ = quadric_from_parsed(parse_polynomial(text, n), n, F)
        ctx = certify.GammaContext(n, d, F)
        if kind == "outside_span":
            ok = certify.vanishes_on_veronese(q, n, d) and ctx.certificate_for(q) is None
        else:
            coeffs = {int(k): F.convert(c) for k, c in w["coefficients"].items()}
            ok = ctx.replay(coeffs, q)
        return {"kind": kind, "replayed": bool(ok)}
    return {"kind": kind, "replayed": True, "note": "covered by recomputation"}


def _field_from_text(text: str) -> FieldSpec:
    if text in ("QQ", "Q"):
        return FieldSpec(0)
    digits = "".join(ch for ch in text if ch.isdigit())
    return FieldSpec(int(digits) if digits else 0)


COMMANDS = {
    "veronese": cmd_veronese, "rnc": cmd_rnc, "equiv-all": cmd_equiv_all, "relations": cmd_relations,
    "pgl-check": cmd_pgl_check, "char3": cmd_char3, "rank": cmd_rank, "rank3-search": cmd_rank3_search,
    "reembed": cmd_reembed, "flattening": cmd_flattening, "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qr3", description="Rank-3 quadratic generation checks.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--n", type=int)
    ap.add_argument("--d", type=int)
    ap.add_argument("--char", type=int, default=None, help="0 for the rationals, else a prime != 2")
    ap.add_argument("--m", type=int, help="regularity bound for reembed (overrides the file header)")
    ap.add_argument("--samples", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--file", help="ideal file, fixture name, or certificate (for replay)")
    ap.add_argument("--grid", help="'default' or NxD,NxD,... (veronese, equiv-all, flattening)")
    ap.add_argument("--kind", default="all", choices=("all",) + certify.RELATION_KINDS)
    ap.add_argument("--I")
    ap.add_argument("--J")
    ap.add_argument("--K")
    ap.add_argument("--L")
    ap.add_argument("--idx", help="comma-separated positions for a relation instance")
    ap.add_argument("--force", action="store_true", help="run relations that exclude char 3 anyway")
    ap.add_argument("--poly", help="a single polynomial for rank")
    ap.add_argument("--reference", type=int, help="1-based generator index for rank3-search hits")
    ap.add_argument("--minors", action="store_true", help="also restrict the flattening minors")
    ap.add_argument("--a", type=int, default=1, help="flattening split degree")
    ap.add_argument("--workers", type=int, default=None)
    return ap


def _exit_code(status: str) -> int:
    return 0 if status == certify.VERIFIED else 1


def _grid_job(argv):
    return run(argv)


def run(argv):
    """Parse and execute; returns ``(document or list of documents, exit code)``.

    Raises :class:`UsageError`, :class:`PreconditionError` and friends for exit 2.
    """
    args = build_parser().parse_args(argv)
    args.char_given = args.char is not None
    if args.char is None:
        args.char = 0
    if args.grid:
        if args.command not in ("veronese", "equiv-all", "flattening"):
            raise UsageError("--grid applies to veronese, equiv-all and flattening")
        jobs = []
        for n, d in parse_grid(args.grid):
            sub = [a for a in _strip_grid(argv)] + ["--n", str(n), "--d", str(d)]
            jobs.append(sub)
        workers = args.workers or min(len(jobs), os.cpu_count() or 1)
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                results = list(ex.map(_grid_job, jobs))
        else:
            results = [run(j) for j in jobs]
        docs = [r[0] for r in results]
        return docs, max(r[1] for r in results)
    cert = COMMANDS[args.command](args)
    return document(args.command, argv, cert), _exit_code(cert.status)


def _strip_grid(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in ("--grid", "--n", "--d", "--workers"):
            skip = True
            continue
        if a.startswith(("--grid=", "--n=", "--d=", "--workers=")):
            continue
        out.append(a)
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        doc, code = run(argv)
    except SystemExit as exc:   # argparse usage errors
        return 2 if exc.code not in (0, None) else 0
    except (UsageError, PreconditionError, FieldError, IdealSyntaxError, ValueError, FileNotFoundError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2
    print(dumps(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
