#!/usr/bin/env python3
"""Random sweep of the S/T isometry on cylinder simple functions for several p."""

import argparse
import random
from fractions import Fraction

from prodmeasure import generators as gen
from prodmeasure.intervals import RInterval
from prodmeasure.lp_decomposition import equiv, frakS, frakT, lim_norm_power, lp_norm_power


def agree(a, b):
    """Exact equality, or overlap when either side is a certified enclosure."""
    if isinstance(a, RInterval) or isinstance(b, RInterval):
        lo = lambda x: x.lo if isinstance(x, RInterval) else x
        hi = lambda x: x.hi if isinstance(x, RInterval) else x
        return lo(a) <= hi(b) and lo(b) <= hi(a)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    for p in (Fraction(1), Fraction(2), Fraction(3, 2), Fraction(3)):
        for _ in range(args.cases):
            f = gen.random_function(rng, gen.random_ambient(rng))
            s = frakS(f)
            ok = equiv(frakT(s), f) and agree(lim_norm_power(s, p), lp_norm_power(f, p))
            bad += not ok
        print(f"p={p}: {args.cases} cases")
    print("all equal" if not bad else f"{bad} mismatches")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
