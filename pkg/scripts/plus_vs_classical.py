#!/usr/bin/env python3
"""Tabulate classical and plus products for a handful of built-in sequences."""

import argparse
from fractions import Fraction

from prodmeasure import product_arith as pa


def rules():
    yield "constant 1", pa.constant(1)
    yield "constant 1/2", pa.constant(Fraction(1, 2))
    yield "alternating 2, 1/2", pa.Periodic((Fraction(2), Fraction(1, 2)))
    yield "exp((-1)^(n+1)/n)", pa.alternating_harmonic_exp()
    yield "1 - (1/2)^n", pa.one_minus_geometric(1, Fraction(1, 2))
    yield "1 + (1/3)^n", pa.one_plus_geometric(1, Fraction(1, 3))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=Fraction, default=Fraction(1, 10 ** 9))
    args = ap.parse_args()
    for name, rule in rules():
        classical = pa.classify_product(rule, args.precision)
        plus = pa.plus_product(rule, args.precision)
        print(f"{name:<22} classical={classical!s:<48} plus={plus}")


if __name__ == "__main__":
    main()
