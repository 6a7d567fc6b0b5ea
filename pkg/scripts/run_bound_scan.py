#!/usr/bin/env python3
"""W(E_N) and D_N scan for a theorem-shape expression, written as CSV."""

import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from gprand.bounds import bound_scan, scan_csv


@dataclass
class ScanConfig:
    expr: str = "sqrt(5)*floor(sqrt(3)*floor(sqrt(2)*x^2))"
    exponents: list = field(default_factory=lambda: list(range(10, 17)))
    a_max: int | None = None
    t_assumed: Fraction = Fraction(1)
    precision_bits: int = 256
    out: str = "bound_scan.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--expr", default=ScanConfig.expr)
    ap.add_argument("--kmin", type=int, default=10)
    ap.add_argument("--kmax", type=int, default=16)
    ap.add_argument("--amax", type=int)
    ap.add_argument("--t", default="1")
    ap.add_argument("--out", default=ScanConfig.out)
    args = ap.parse_args()
    cfg = ScanConfig(args.expr, list(range(args.kmin, args.kmax + 1)), args.amax, Fraction(args.t), out=args.out)

    t0 = time.perf_counter()
    rows = bound_scan(cfg.expr, [2 ** k for k in cfg.exponents], cfg.a_max, cfg.t_assumed,
                      precision_bits=cfg.precision_bits)
    with open(cfg.out, "w", encoding="utf-8") as fh:
        fh.write(scan_csv(rows))
    for r in rows:
        print(f"N={r.n:>7}  W={r.w:>6}  slope={r.slope_so_far:.3f}  D={r.d:.5f}")
    print(f"wrote {cfg.out} in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
