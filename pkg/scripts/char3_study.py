"""Where span Gamma falls short of the quadrics of the Veronese ideal over F_3, and by how much."""

import json
from math import comb
from dataclasses import dataclass, field

from qr3.certify import char3_analysis, verify_qr3_veronese
from qr3.config import parse_config
from qr3.fieldcore import FieldSpec


@dataclass
class Char3Config:
    """Characteristic-3 shortfall sweep."""
    ns: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    ds: list[int] = field(default_factory=lambda: [2, 3, 4])
    max_ambient: int = 60
    samples: int = 100_000
    seed: int = 0


def main(argv=None):
    cfg = parse_config(Char3Config, argv)
    F3 = FieldSpec(3)
    for n in cfg.ns:
        for d in cfg.ds:
            if comb(n + d, n) > cfg.max_ambient:
                continue
            c = verify_qr3_veronese(n, d, F3)
            dims = c.payload["dims"]
            print(json.dumps({"n": n, "d": d, "status": c.status, **dims,
                              "shortfall": dims["ideal_quadrics"] - dims["span_gamma"]}, sort_keys=True))
    c = char3_analysis(F3, cfg.samples, cfg.seed)
    print(json.dumps({"analysis": c.status, **c.payload}, sort_keys=True, default=str))


if __name__ == "__main__":
    main()
