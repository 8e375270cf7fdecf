"""Run every config in a directory through the simulator and collect the CSVs.

    python scripts/ber_sweep.py scripts/configs --out results/
"""
import argparse
import sys
from pathlib import Path

from projlds.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", type=Path)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for cfg in sorted(args.configs.glob("*.cfg")):
        print(f"== {cfg.name}")
        argv = ["simulate", "--config", str(cfg), "--out", str(args.out / f"{cfg.stem}.csv")]
        if args.workers:
            argv += ["--workers", str(args.workers)]
        worst = max(worst, cli_main(argv))
    return worst


if __name__ == "__main__":
    sys.exit(main())
