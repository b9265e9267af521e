"""How the finite-N tautness gaps and B-free densities move with N.

Both are logarithmic densities, so changes with N are slow; the scan shows
the trend across decades rather than a single verdict.

Usage: python scripts/taut_behrend_scan.py [--cutoff 10000] [--decades 4 5 6]
"""

import argparse
import math

from subshift_gibbs.generators import behrend_check, parse_family, primes_upto, taut_check


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cutoff", type=int, default=10**4)
    parser.add_argument("--decades", type=int, nargs="+", default=[4, 5, 6])
    parser.add_argument("--show", type=int, nargs="+", default=[6, 10, 14, 22, 26])
    args = parser.parse_args()

    B = parse_family(f"behrend-product:{args.cutoff}")
    print(f"B = 2p for odd primes p <= {args.cutoff} ({len(B)} elements)")
    print("N        " + " ".join(f"gap({b:>3})" for b in args.show) + "  #gaps>=0.01  dens(F_primes)  1/ln N")
    for k in args.decades:
        N = 10**k
        r = taut_check(B, N)
        wide = sum(g >= 0.01 for g in r.gaps.values())
        primes = behrend_check(primes_upto(N), N).density_free
        gaps = " ".join(f"{r.gaps.get(b, float('nan')):8.5f}" for b in args.show)
        print(f"10^{k:<5} {gaps}  {wide:11d}  {primes:14.5f}  {1 / math.log(N):.5f}")
    print(r.label)


if __name__ == "__main__":
    main()
