"""Certify QR(3) for Veronese varieties over a grid of (n, d) and fields; one JSON line per instance."""

import json
import sys
from dataclasses import dataclass, field

from qr3.certify import verify_qr3_veronese
from qr3.cli import DEFAULT_GRID
from qr3.config import parse_config
from qr3.fieldcore import FieldSpec


@dataclass
class GridConfig:
    """Veronese QR(3) grid."""
    chars: list[int] = field(default_factory=lambda: [0, 3, 5, 7])
    ns: list[int] = field(default_factory=list)
    ds: list[int] = field(default_factory=list)
    out: str = "-"


def main(argv=None):
    cfg = parse_config(GridConfig, argv)
    grid = [(n, d) for n in cfg.ns for d in cfg.ds] if cfg.ns and cfg.ds else DEFAULT_GRID
    sink = sys.stdout if cfg.out == "-" else open(cfg.out, "w")
    for p in cfg.chars:
        F = FieldSpec(p)
        for n, d in grid:
            c = verify_qr3_veronese(n, d, F)
            row = {"n": n, "d": d, "field": str(F), "status": c.status, **c.payload["dims"],
                   "ranks": c.payload["rank_histogram"], "seconds": c.wall_time}
            print(json.dumps(row, sort_keys=True), file=sink, flush=True)
    if sink is not sys.stdout:
        sink.close()


if __name__ == "__main__":
    main()
