"""Contact verdict over an (a, b) grid, printed as a table.

Rows are inner levels a, columns outer levels b; C marks a two-component
contact boundary, D a degenerate shell and F an inward-pointing wall.
"""

import argparse
from dataclasses import dataclass, field

from twisted_chn import ModelParams
from twisted_chn.contact import CONTACT, DEGENERATE, contact_report


@dataclass
class GridConfig:
    n: int = 1
    c: float = 1.0
    a_values: list = field(default_factory=lambda: [0.25 * k for k in range(1, 8)])
    b_values: list = field(default_factory=lambda: [0.5 * k for k in range(1, 8)])
    samples: int = 50
    seed: int = 0


def run(cfg: GridConfig):
    params = ModelParams(cfg.n, cfg.c)
    symbol = {CONTACT: "C", DEGENERATE: "D"}
    print("a \\ b " + " ".join(f"{b:5.2f}" for b in cfg.b_values))
    mismatches = 0
    for a in cfg.a_values:
        row = []
        for b in cfg.b_values:
            rep = contact_report(params, a * cfg.c, b * cfg.c, cfg.samples, cfg.seed)
            mismatches += (rep.verdict == CONTACT) != (a < 1 < b)
            row.append(symbol.get(rep.verdict, "F"))
        print(f"{a:5.2f} " + " ".join(f"{s:>5}" for s in row))
    print(f"cells disagreeing with 'contact iff a < c < b': {mismatches}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=50)
    args = ap.parse_args()
    run(GridConfig(n=args.n, c=args.c, samples=args.samples))
