"""Per-length Gibbs constants of nu * B(1/2,1/2) for periodic nu.

For each n prints min kappa(C) 2^{nd} over positive blocks next to 1/k and
to (1/k) 2^{nd - o_n}, where o_n is the largest number of ones in an
n-window of the orbit.

Usage: python scripts/periodic_gibbs_constants.py [--patterns 01 011 0011] [--n-max 12]
"""

import argparse
from fractions import Fraction

from subshift_gibbs.measures import convolve_series, gibbs_lower_bound_check, periodic_series


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--patterns", nargs="+", default=["01", "011", "0011"])
    parser.add_argument("--n-max", type=int, default=12)
    args = parser.parse_args()

    for pattern in args.patterns:
        k = len(pattern)
        d = Fraction(pattern.count("1"), k)
        series = periodic_series(pattern, args.n_max)
        check = gibbs_lower_bound_check(convolve_series(series), d, Fraction(1, k))
        print(f"pattern {pattern}: d = {d}, 1/k = {1 / k:.6f}, a* = {check.a_star:.6f}")
        for e in check.per_n:
            o_n = max(w.ones for w in series[e.n].support())
            floor = float(Fraction(1, k)) * 2 ** float(e.n * d - o_n)
            print(f"  n={e.n:2d}  min ratio {e.value:.6f}  at {e.witness}  (1/k) 2^(nd-o_n) = {floor:.6f}")


if __name__ == "__main__":
    main()
