"""Paired PDA vs ML bit-error comparison on shared channel realisations.

    python scripts/pda_vs_ml.py --q 2 --snr 0 4 8 12 --trials 10240
"""
import argparse
import math

import numpy as np

from projlds.lds import build_lds
from projlds.simlink import LinkSetup, paired_errors


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--snr", type=float, nargs="+", default=[0.0, 4.0, 8.0, 12.0])
    ap.add_argument("--trials", type=int, default=10_240)
    ap.add_argument("--channel", choices=("awgn", "rayleigh_flat"), default="awgn")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    C = build_lds(args.q)
    setup = LinkSetup(C.normalized(), np.ones(C.K), args.channel)
    nb = 2 * C.K
    print("# eb_n0_db ber_ml ber_pda diff sigma_diff")
    for s, snr in enumerate(args.snr):
        e = paired_errors(setup, ("ml", "pda"), args.seed, snr, args.trials, snr_index=s)
        diff = (e["pda"] - e["ml"]) / nb
        sig = diff.std(ddof=1) / math.sqrt(args.trials)
        print(f"{snr:g} {e['ml'].mean() / nb:.5e} {e['pda'].mean() / nb:.5e} {diff.mean():+.3e} {sig:.1e}")


if __name__ == "__main__":
    main()
