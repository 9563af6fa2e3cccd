"""Figure-eight curve in the pair of pants: sigma value, kernel congruence,
closed form against the direct exponential, annihilation, by order."""

import sys
import time

from gentwist.skein_shadow import chebyshev_trace_check, figure_eight_report


def main(max_order=4):
    for order in range(max_order + 1):
        t0 = time.perf_counter()
        rep = figure_eight_report(order)
        print(f"== order {order} ({time.perf_counter() - t0:.1f}s) all={rep.all()}")
        print(rep)
    print("== Chebyshev traces")
    print(chebyshev_trace_check(max_order))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
