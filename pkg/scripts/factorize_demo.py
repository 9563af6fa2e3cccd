"""Factor a few seeded products of generalized twists back into twists.

For each seed, build a product of three random twist powers on the genus-2
surface, run the staged approximation and report the residual Johnson degree
and the size of the twist word found.
"""

import random
import sys
from fractions import Fraction

from gentwist.acceptance import random_loop
from gentwist.surface_loops import build_surface
from gentwist.twist_engine import johnson_degree
from gentwist.twist_factorization import TwistWord, approximate_by_twists


def main(seeds=range(3), genus=2, N=5, target=3):
    S = build_surface(genus)
    for seed in seeds:
        rng = random.Random(seed)
        factors = tuple((Fraction(rng.choice([-2, -1, 1, 2]), rng.randint(1, 3)), random_loop(genus, 4, rng))
                        for _ in range(3))
        u = TwistWord(factors).evaluate(S, N)
        word, report = approximate_by_twists(S, u, target)
        residual = word.evaluate(S, N).inverse().compose(u)
        print(f"seed {seed}: {len(word.factors)} twists, residual degree {johnson_degree(residual)}")
        print(report)


if __name__ == "__main__":
    main(range(int(sys.argv[1]) if len(sys.argv) > 1 else 3))
