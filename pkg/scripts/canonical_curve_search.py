"""Sample the quadrics through a canonical genus-6 curve over F_p and tally ranks."""

import json
import time
from dataclasses import dataclass

from qr3.certify import rank3_search
from qr3.config import parse_config
from qr3.fieldcore import FieldSpec
from qr3.idealfile import fixture_path, parse_ideal, quadric_from_parsed
from qr3.quadform import quad_dimension
from qr3.spanengine import span_of


@dataclass
class SearchConfig:
    """Rank statistics for span(Q1..Q6)."""
    primes: list[int] = None
    samples: int = 1_000_000
    seed: int = 0
    fixture: str = "canonical_genus6"
    reference: int = 6

    def __post_init__(self):
        self.primes = self.primes or [101]


def main(argv=None):
    cfg = parse_config(SearchConfig, argv)
    ideal = parse_ideal(fixture_path(cfg.fixture))
    for p in cfg.primes:
        F = FieldSpec(p)
        qs = [quadric_from_parsed(poly, ideal.n, F)[0] for poly in ideal.polynomials]
        size = qs[0].size
        span = span_of(F, quad_dimension(size), (q.as_vector() for q in qs))
        t0 = time.perf_counter()
        rep = rank3_search(span, size, cfg.samples, cfg.seed, qs[cfg.reference - 1])
        row = {"p": p, "generator_ranks": [q.rank() for q in qs], "seconds": round(time.perf_counter() - t0, 2),
               **{k: rep.payload[k] for k in ("samples", "rank_histogram", "hits", "all_hits_proportional")}}
        print(json.dumps(row, sort_keys=True))


if __name__ == "__main__":
    main()
