"""Build the LDS matrix for every supported q and tabulate its correlation properties.

    python scripts/analyze_all_q.py [--q 2 3 5 7]
"""
import argparse
import time

from projlds.galois import supported_q
from projlds.lds import build_lds
from projlds.metrics import correlation_report, distance_spectrum
from projlds.projective import expected_intersections, incidence_matrix, intersection_distribution, quadric_vector


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=sorted(supported_q()))
    args = ap.parse_args()
    print(f"{'q':>3} {'L':>4} {'K':>4} {'(A,B,C)':>14} {'c_max':>6} {'TSC':>12} {'Welch':>12} {'d2 min':>7} {'build s':>8}")
    for q in args.q:
        t0 = time.perf_counter()
        C = build_lds(q)
        dt = time.perf_counter() - t0
        abc = intersection_distribution(incidence_matrix(q), quadric_vector(q))
        assert tuple(abc) == tuple(expected_intersections(q))
        rep = correlation_report(C)
        d2 = min(distance_spectrum(C))
        print(f"{q:>3} {C.L:>4} {C.K:>4} {str(tuple(abc)):>14} {str(rep.c_max):>6} "
              f"{float(rep.tsc):>12.4f} {float(rep.welch_tsc_lb):>12.4f} {float(d2):>7.4f} {dt:>8.3f}")


if __name__ == "__main__":
    main()
