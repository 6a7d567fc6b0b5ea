#!/usr/bin/env python3
"""Empirical type of the golden ratio and of a few theorem triples as the search box grows."""

import argparse

from gprand.dioph import type_probe
from gprand.genpoly import parse, recognize_theorem_shape

TRIPLE_EXPRS = ["sqrt(5)*floor(sqrt(3)*floor(sqrt(2)*x^2))"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=10**4)
    args = ap.parse_args()
    q = 2
    print("golden ratio: Q, tHat (box minimum), tSup (per-vector max), witness")
    while q <= args.qmax:
        r = type_probe(["1/2 + 1/2*sqrt(5)"], q)
        print(f"  {q:>6}  {r.t_hat:.4f}  {r.t_sup:.4f}  {r.witness}")
        q *= 3
    for text in TRIPLE_EXPRS:
        inst = recognize_theorem_shape(parse(text))
        for box in (4, 8, 16):
            r = type_probe(list(inst.triple()), box)
            print(f"triple of {text}: Q={box} tHat={r.t_hat:.4f} witness={r.witness}")


if __name__ == "__main__":
    main()
