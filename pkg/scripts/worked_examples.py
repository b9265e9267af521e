"""Entropy and density of the small worked SFT examples and their closures.

Usage: python scripts/worked_examples.py [--n-max 12]
"""

import argparse
import math

from subshift_gibbs.spectral import entropy_series, max_mean_cycle, topological_entropy_exact
from subshift_gibbs.subshifts import ForbiddenSet, SubshiftSpec, hereditary_closure_graph, sft_to_graph

EXAMPLES = [("golden mean", ("11",)), ("X_{00,111}", ("00", "111")), ("Y = X_{111,1001}", ("111", "1001"))]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=12)
    args = parser.parse_args()

    print(f"{'shift':<18} {'h':>8} {'d':>5} {'h~':>8} {'d~':>5} {'H(d)':>8}  (1/n)log2|L_n| at n={args.n_max}")
    for name, F in EXAMPLES:
        G = sft_to_graph(ForbiddenSet.of(*F))
        closure = hereditary_closure_graph(G)
        h, d = topological_entropy_exact(G), max_mean_cycle(G)
        h_c, d_c = topological_entropy_exact(closure), max_mean_cycle(closure)
        p = float(d)
        H = 0.0 if p in (0.0, 1.0) else -(p * math.log2(p) + (1 - p) * math.log2(1 - p))
        tail = entropy_series(SubshiftSpec.sft(*F), args.n_max)[args.n_max]
        print(f"{name:<18} {h:8.5f} {str(d):>5} {h_c:8.5f} {str(d_c):>5} {H:8.5f}  {tail:.5f}")


if __name__ == "__main__":
    main()
