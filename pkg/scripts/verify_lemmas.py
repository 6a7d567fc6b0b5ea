#!/usr/bin/env python3
"""Randomized sweep of the hard inequalities plus ratio sweeps for the << lemmas."""

import argparse
import json

from gprand.analytic import SmoothingParams, fourier_tail
from gprand.cli import run_verify
from gprand.dioph import ntheta_discrepancy_bound, sum_of_minima


def ratio_sweeps():
    out = {"ntheta": {}, "sumOfMinima": {}, "fourierTail": {}}
    for theta in ("sqrt(2)", "1/2 + 1/2*sqrt(5)", "sqrt(7)"):
        out["ntheta"][theta] = [ntheta_discrepancy_bound(theta, L, 31).c_ratio for L in (100, 1000, 10000)]
    out["sumOfMinima"]["sqrt(2)"] = [sum_of_minima("sqrt(2)", L, 1000).c_ratio for L in (1000, 2000, 4000)]
    out["fourierTail"]["r=2,delta=0.01,tau=0.5"] = [
        fourier_tail(SmoothingParams(2, 0.01, 0.5, K), 256).c_ratio for K in (1000, 2000, 4000)]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    rep = run_verify(args.quick)
    rep["ratios"] = ratio_sweeps()
    print(json.dumps(rep, indent=2))
    raise SystemExit(1 if any(rep["violations"].values()) else 0)


if __name__ == "__main__":
    main()
